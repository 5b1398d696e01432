//! Path sums over composed derivations, exponential pairings with certified
//! truncation, and flows of analytic vector fields.
//!
//! All series here are truncated by the geometric tail that follows from the
//! factorial chain bound, never by watching terms get small.

use serde::{Deserialize, Serialize};

use crate::coalgebra::{BasisSymbol, FaVector};
use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::multiindex::MultiIndex;
use crate::C64;

/// Default cap on the truncation order of exponential series.
pub const DEFAULT_ORDER_CAP: usize = 10_000;

/// The chain `ε_F(D_{A_1} ∘ … ∘ D_{A_n}(f_β^α))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub fields: Vec<VectorField>,
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
}

impl ChainSpec {
    pub fn new(fields: Vec<VectorField>, alpha: MultiIndex, beta: MultiIndex) -> Result<Self> {
        let p = alpha.dim();
        if beta.dim() != p {
            return Err(Error::DimensionMismatch { expected: p, found: beta.dim() });
        }
        if let Some(a) = fields.iter().find(|a| a.p() != p) {
            return Err(Error::DimensionMismatch { expected: p, found: a.p() });
        }
        Ok(ChainSpec { fields, alpha, beta })
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    /// Sum of the field bands, the furthest an index can travel along the chain.
    pub fn total_band(&self) -> u32 {
        self.fields.iter().map(VectorField::band).sum()
    }
}

fn exact() -> FaVector {
    FaVector::with_prune_eps(0.0)
}

/// Applies `D_{A_n}` first and `D_{A_1}` last, then takes the counit.
pub fn eps_chain_direct(c: &ChainSpec) -> Result<C64> {
    let mut v = exact();
    v.add_term(BasisSymbol::new(c.beta.clone(), c.alpha.clone())?, C64::new(1.0, 0.0));
    for a in c.fields.iter().rev() {
        v = a.apply_da_vec(&v)?;
        if v.is_empty() {
            break;
        }
    }
    Ok(crate::coalgebra::counit(&v))
}

/// `sup_norm(α) + (Σ bands) + sup_norm(β)`, always large enough for
/// [`eps_chain_pathsum`].
pub fn default_cap(c: &ChainSpec) -> u32 {
    c.alpha.sup_norm() + c.total_band() + c.beta.sup_norm()
}

/// Single-step factor `ε_F(D_A(f_k^j))`.
fn step_factor(a: &VectorField, k: &MultiIndex, j: &MultiIndex) -> Result<C64> {
    let s = BasisSymbol::new(k.clone(), j.clone())?;
    let mut v = exact();
    v.add_term(s, C64::new(1.0, 0.0));
    let out = a.apply_da_vec(&v)?;
    Ok(out.coeff(&BasisSymbol::new(j.clone(), j.clone())?))
}

/// Indices within band distance `band` of `center`.
fn band_box(center: &MultiIndex, band: u32) -> Vec<MultiIndex> {
    let mut out = vec![Vec::with_capacity(center.dim())];
    for &e in center.entries() {
        let lo = e.saturating_sub(band);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo..=e + band).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(|v| MultiIndex::new(v).expect("non-empty")).collect()
}

/// The nested sum over intermediate indices
/// `Σ_{k_1…k_{n−1}} ε(D_{A_1} f_{k_1}^α) ε(D_{A_2} f_{k_2}^{k_1}) ⋯ ε(D_{A_n} f_β^{k_{n−1}})`.
///
/// Each intermediate index ranges over the band box of its predecessor and
/// every factor is computed as a counit of a single derivation step, so this is
/// independent of [`eps_chain_direct`]. Fails if a band-reachable index has a
/// component above `cap`.
pub fn eps_chain_pathsum(c: &ChainSpec, cap: u32) -> Result<C64> {
    let n = c.fields.len();
    if n == 0 {
        return Ok(if c.alpha == c.beta { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
    }
    // layer weights over k_j, starting from k_0 = α
    let mut layer: Vec<(MultiIndex, C64)> = vec![(c.alpha.clone(), C64::new(1.0, 0.0))];
    for (j, a) in c.fields.iter().enumerate().take(n - 1) {
        let band = a.band();
        let mut next: std::collections::BTreeMap<MultiIndex, C64> = Default::default();
        for (prev, w) in &layer {
            for k in band_box(prev, band) {
                if k.sup_norm() > cap {
                    return Err(Error::CapTooSmall { index: k.to_string(), cap });
                }
                let f = step_factor(a, &k, prev)?;
                if f != C64::new(0.0, 0.0) {
                    *next.entry(k).or_insert(C64::new(0.0, 0.0)) += w * f;
                }
            }
        }
        layer = next.into_iter().filter(|(_, w)| *w != C64::new(0.0, 0.0)).collect();
        if layer.is_empty() {
            return Ok(C64::new(0.0, 0.0));
        }
        debug_assert!(j < n - 1);
    }
    let last = &c.fields[n - 1];
    let mut total = C64::new(0.0, 0.0);
    for (prev, w) in &layer {
        total += w * step_factor(last, &c.beta, prev)?;
    }
    Ok(total)
}

/// `(deg α + n)!/deg α! · Π m(A_j) · deg β`.
pub fn chain_bound(c: &ChainSpec) -> f64 {
    let d = c.alpha.degree();
    let rising: f64 = (d + 1..=d + c.fields.len() as u64).map(|k| k as f64).product();
    let norms: f64 = c.fields.iter().map(VectorField::m_norm).product();
    rising * norms * c.beta.degree() as f64
}

/// Result of a truncated exponential pairing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpPairing {
    pub value: C64,
    /// Highest power kept.
    pub order: usize,
    /// Certified bound on the discarded tail.
    pub tail: f64,
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// Smallest `N` with `deg · r^{N+1}/(1−r) ≤ tol`, with the tail it certifies.
fn truncation(deg: u64, r: f64, tol: f64, cap: usize) -> Result<(usize, f64)> {
    if deg == 0 || r == 0.0 {
        return Ok((0, 0.0));
    }
    let mut tail = deg as f64 * r / (1.0 - r);
    let mut n = 0;
    while tail > tol {
        n += 1;
        if n > cap {
            return Err(Error::OrderCapExceeded { tol, cap });
        }
        tail *= r;
    }
    Ok((n, tail))
}

fn domain(r: f64, m: f64) -> Error {
    Error::Domain { product: r, radius: if m == 0.0 { f64::INFINITY } else { 1.0 / m } }
}

/// `ε_F(e^{t D_A}(f_β^o))` at tolerance `tol`, default order cap.
pub fn exp_pairing(a: &VectorField, t: C64, beta: &MultiIndex, tol: f64) -> Result<ExpPairing> {
    exp_pairing_with_cap(a, t, beta, tol, DEFAULT_ORDER_CAP)
}

/// Advances `v_{n} = (t/n) D_A v_{n−1}` in place, dropping indices that can no
/// longer reach `o` in the `budget` steps left (the degree drops by at most one
/// per step).
fn scaled_step(a: &VectorField, v: &FaVector, t: C64, n: usize, budget: usize) -> Result<FaVector> {
    let mut out = a.apply_da_vec(v)?.scale(t / n as f64);
    out.retain(|s, _| s.lower.degree() <= budget as u64);
    Ok(out)
}

fn counit_o(v: &FaVector, p: usize) -> C64 {
    v.coeff(&BasisSymbol::row(MultiIndex::zero(p)))
}

pub fn exp_pairing_with_cap(
    a: &VectorField,
    t: C64,
    beta: &MultiIndex,
    tol: f64,
    order_cap: usize,
) -> Result<ExpPairing> {
    check_tol(tol)?;
    if beta.dim() != a.p() {
        return Err(Error::DimensionMismatch { expected: a.p(), found: beta.dim() });
    }
    let m = a.m_norm();
    let r = t.norm() * m;
    if r >= 1.0 {
        return Err(domain(r, m));
    }
    let (order, tail) = truncation(beta.degree(), r, tol, order_cap)?;
    let p = a.p();
    let mut v = exact();
    if beta.degree() <= order as u64 {
        v.add_term(BasisSymbol::row(beta.clone()), C64::new(1.0, 0.0));
    }
    let mut value = counit_o(&v, p);
    for n in 1..=order {
        if v.is_empty() {
            break;
        }
        v = scaled_step(a, &v, t, n, order - n)?;
        value += counit_o(&v, p);
    }
    Ok(ExpPairing { value, order, tail })
}

/// `ε_F(e^{t_2 D_B} ∘ e^{t_1 D_A}(f_β^o))`, the double series truncated on
/// total degree with the tail `Σ_{P>N} deg β · s^P`, `s = |t_1| m(A) + |t_2| m(B)`.
/// `D_A` acts first.
pub fn exp_pairing_composed(
    b: &VectorField,
    t2: C64,
    a: &VectorField,
    t1: C64,
    beta: &MultiIndex,
    tol: f64,
) -> Result<ExpPairing> {
    check_tol(tol)?;
    let p = a.p();
    if b.p() != p {
        return Err(Error::DimensionMismatch { expected: p, found: b.p() });
    }
    if beta.dim() != p {
        return Err(Error::DimensionMismatch { expected: p, found: beta.dim() });
    }
    let (ma, mb) = (a.m_norm(), b.m_norm());
    let s = t1.norm() * ma + t2.norm() * mb;
    if s >= 1.0 {
        return Err(domain(s, ma.max(mb)));
    }
    let (order, tail) = truncation(beta.degree(), s, tol, DEFAULT_ORDER_CAP)?;
    let mut u = exact();
    if beta.degree() <= order as u64 {
        u.add_term(BasisSymbol::row(beta.clone()), C64::new(1.0, 0.0));
    }
    let mut value = C64::new(0.0, 0.0);
    for m in 0..=order {
        if m > 0 {
            u = scaled_step(a, &u, t1, m, order - m)?;
        }
        if u.is_empty() {
            break;
        }
        let mut w = u.clone();
        value += counit_o(&w, p);
        for n in 1..=order - m {
            w = scaled_step(b, &w, t2, n, order - m - n)?;
            if w.is_empty() {
                break;
            }
            value += counit_o(&w, p);
        }
    }
    Ok(ExpPairing { value, order, tail })
}

/// Flow problem `dy/dt = A(y)`, `y(0) = x0`, evaluated at time `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowRequest {
    pub field: VectorField,
    pub x0: Vec<C64>,
    pub t: C64,
    pub tol: f64,
    pub order_cap: usize,
}

impl FlowRequest {
    pub fn new(field: VectorField, x0: Vec<C64>, t: C64, tol: f64) -> Self {
        FlowRequest { field, x0, t, tol, order_cap: DEFAULT_ORDER_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowResult {
    pub y: Vec<C64>,
    /// `1/m(A_x)`.
    pub radius: f64,
    /// Largest truncation order used over the components.
    pub truncation_order: usize,
    /// Largest certified tail over the components.
    pub tail_bound: f64,
}

/// `1/m(A_x)` where `A_x` is the field recentred at `x0`; infinite for a zero
/// recentred field.
pub fn certified_radius(a: &VectorField, x0: &[C64]) -> Result<f64> {
    Ok(a.shift(x0)?.radius())
}

/// `y_i = x0_i + ε_F(e^{t D_{A_x}}(f_{i(1)}^o))`.
pub fn flow(r: &FlowRequest) -> Result<FlowResult> {
    check_tol(r.tol)?;
    let ax = r.field.shift(&r.x0)?;
    let m = ax.m_norm();
    let prod = r.t.norm() * m;
    if prod >= 1.0 {
        return Err(domain(prod, m));
    }
    let p = r.field.p();
    let mut y = Vec::with_capacity(p);
    let (mut order, mut tail) = (0, 0.0f64);
    for i in 1..=p {
        let e = exp_pairing_with_cap(&ax, r.t, &MultiIndex::unit(p, i)?, r.tol, r.order_cap)?;
        y.push(r.x0[i - 1] + e.value);
        order = order.max(e.order);
        tail = tail.max(e.tail);
    }
    Ok(FlowResult { y, radius: ax.radius(), truncation_order: order, tail_bound: tail })
}
