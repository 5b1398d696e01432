//! Finite-dimensional harness for the duality between a realization
//! `x: L → Inv(F)` and its transpose `y: F → Inv(L)`.
//!
//! Coalgebras are duals of small unital associative algebras, so the axioms
//! hold by construction. `x` is built from a bilinear form `B` on `L × F`:
//! `x(l)(f) = Σ B(l, f') f''`, an invariant operator contracting the first leg
//! of `Δ_F`. The transpose uses `Bᵀ` on `F × L`. Words act through the
//! extension `X(l)(z_1 ⋯ z_r) = Σ x(l^{(1)})(z_1) ⋯ x(l^{(r)})(z_r)` with the
//! first letter outermost, and the identity checked is
//! `ε_F ∘ π_x(w)(z) = ε_L ∘ π_y(τz)(τw)`.
//!
//! Everything is dense: a word of length `r` over a `d`-dimensional space
//! lives in `C^{d^r}` with the first letter most significant.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Deviation allowed by the checks in this module.
pub const DUALITY_TOL: f64 = 1e-10;

/// A coalgebra on `C^dim` with `Δ(e_a) = Σ delta[a][b][c] e_b ⊗ e_c`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteCoalgebra {
    name: String,
    dim: usize,
    delta: Vec<Vec<Vec<C64>>>,
    eps: Vec<C64>,
}

impl FiniteCoalgebra {
    /// Validates coassociativity and both counit laws to `1e-12` relative to
    /// the largest structure constant.
    pub fn new(name: impl Into<String>, delta: Vec<Vec<Vec<C64>>>, eps: Vec<C64>) -> Result<Self> {
        let dim = eps.len();
        if dim == 0 {
            return Err(Error::InvalidCoalgebra("empty basis".into()));
        }
        let shaped = delta.len() == dim && delta.iter().all(|m| m.len() == dim && m.iter().all(|r| r.len() == dim));
        if !shaped {
            return Err(Error::InvalidCoalgebra("structure tensor has the wrong shape".into()));
        }
        let c = FiniteCoalgebra { name: name.into(), dim, delta, eps };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim;
        let scale = self
            .delta
            .iter()
            .flatten()
            .flatten()
            .chain(&self.eps)
            .map(|z| z.norm())
            .fold(1.0, f64::max);
        let tol = 1e-12 * scale * scale;
        for a in 0..d {
            for b1 in 0..d {
                for b2 in 0..d {
                    for c in 0..d {
                        let left: C64 = (0..d).map(|x| self.delta[a][x][c] * self.delta[x][b1][b2]).sum();
                        let right: C64 = (0..d).map(|y| self.delta[a][b1][y] * self.delta[y][b2][c]).sum();
                        if (left - right).norm() > tol {
                            return Err(Error::InvalidCoalgebra(format!("{} is not coassociative", self.name)));
                        }
                    }
                }
            }
            for c in 0..d {
                let kron = if a == c { ONE } else { ZERO };
                let l: C64 = (0..d).map(|b| self.eps[b] * self.delta[a][b][c]).sum();
                let r: C64 = (0..d).map(|b| self.eps[b] * self.delta[a][c][b]).sum();
                if (l - kron).norm() > tol || (r - kron).norm() > tol {
                    return Err(Error::InvalidCoalgebra(format!("{} fails the counit law", self.name)));
                }
            }
        }
        Ok(())
    }

    /// Dual of the unital algebra with `e_b e_c = Σ_a mult(b, c, a) e_a` and
    /// unit `Σ unit_a e_a`.
    fn dual_of(name: String, dim: usize, mult: impl Fn(usize, usize, usize) -> C64, unit: Vec<C64>) -> Result<Self> {
        let delta = (0..dim)
            .map(|a| (0..dim).map(|b| (0..dim).map(|c| mult(b, c, a)).collect()).collect())
            .collect();
        Self::new(name, delta, unit)
    }

    fn basis_vector(dim: usize, k: usize) -> Vec<C64> {
        let mut v = vec![ZERO; dim];
        v[k] = ONE;
        v
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).expect("valid")
    }

    /// Dual of the group algebra of `Z/n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::dual_of(
            format!("Z/{n}"),
            n,
            |b, c, a| if (b + c) % n == a { ONE } else { ZERO },
            Self::basis_vector(n, 0),
        )
    }

    /// Dual of `C[t]/t^k`.
    pub fn truncated_poly(k: usize) -> Result<Self> {
        Self::dual_of(
            format!("C[t]/t^{k}"),
            k,
            |b, c, a| if b + c == a { ONE } else { ZERO },
            Self::basis_vector(k, 0),
        )
    }

    /// Dual of `M_k`: basis `e^{ij}` at position `i·k + j`,
    /// `Δ e^{il} = Σ_j e^{ij} ⊗ e^{jl}`, `ε(e^{il}) = δ(i,l)`.
    pub fn matrix(k: usize) -> Result<Self> {
        let d = k * k;
        let unit = (0..d).map(|a| if a / k == a % k { ONE } else { ZERO }).collect();
        Self::dual_of(
            format!("M_{k}"),
            d,
            |b, c, a| {
                let (i, j) = (b / k, b % k);
                let (j2, l) = (c / k, c % k);
                if j == j2 && a == i * k + l {
                    ONE
                } else {
                    ZERO
                }
            },
            unit,
        )
    }

    /// The Leibnitz coalgebra with `p` primitives: `l_0` grouplike,
    /// `Δ l_i = l_0 ⊗ l_i + l_i ⊗ l_0`.
    pub fn leibnitz(p: usize) -> Result<Self> {
        Self::dual_of(
            format!("Leibnitz({p})"),
            p + 1,
            |b, c, a| {
                if (b == 0 && c == a) || (c == 0 && b == a && a != 0) {
                    ONE
                } else {
                    ZERO
                }
            },
            Self::basis_vector(p + 1, 0),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn delta(&self, a: usize, b: usize, c: usize) -> C64 {
        self.delta[a][b][c]
    }

    pub fn eps(&self) -> &[C64] {
        &self.eps
    }

    /// The co-opposite coalgebra, `Δ^op = flip ∘ Δ`.
    pub fn opposite(&self) -> Self {
        let d = self.dim;
        let delta = (0..d)
            .map(|a| (0..d).map(|b| (0..d).map(|c| self.delta[a][c][b]).collect()).collect())
            .collect();
        FiniteCoalgebra { name: format!("{}^op", self.name), dim: d, delta, eps: self.eps.clone() }
    }

    /// Re-expresses the structure in the basis `g_a = Σ_b p[(b, a)] e_b`.
    pub fn change_basis(&self, p: &DMatrix<C64>) -> Result<Self> {
        let d = self.dim;
        if p.nrows() != d || p.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: p.nrows() });
        }
        let q = p
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidCoalgebra("singular change of basis".into()))?;
        let mut delta = vec![vec![vec![ZERO; d]; d]; d];
        for (a, da) in delta.iter_mut().enumerate() {
            for b in 0..d {
                let pb = p[(b, a)];
                if pb == ZERO {
                    continue;
                }
                for c in 0..d {
                    for e in 0..d {
                        let s = pb * self.delta[b][c][e];
                        if s == ZERO {
                            continue;
                        }
                        for (x, row) in da.iter_mut().enumerate() {
                            let sx = s * q[(x, c)];
                            for (y, v) in row.iter_mut().enumerate() {
                                *v += sx * q[(y, e)];
                            }
                        }
                    }
                }
            }
        }
        let eps = (0..d).map(|a| (0..d).map(|b| p[(b, a)] * self.eps[b]).sum()).collect();
        Self::new(format!("{}*", self.name), delta, eps)
    }

    /// `ε^{⊗r}` as a vector on words of length `r`.
    fn counit_power(&self, r: usize) -> DVector<C64> {
        let mut v = DVector::from_element(1, ONE);
        for _ in 0..r {
            v = v.kronecker(&DVector::from_column_slice(&self.eps));
        }
        v
    }

    /// Coefficients of the `k`-fold coproduct of a word, extended
    /// multiplicatively: `Δ(a_1 ⋯ a_k) = Σ coeff · (b_1 ⋯ b_k) ⊗ (c_1 ⋯ c_k)`.
    fn word_coproduct(&self, word: &[usize]) -> Vec<(Vec<usize>, Vec<usize>, C64)> {
        let mut out = vec![(Vec::new(), Vec::new(), ONE)];
        for &a in word {
            let mut next = Vec::new();
            for (bs, cs, k) in &out {
                for b in 0..self.dim {
                    for c in 0..self.dim {
                        let s = self.delta[a][b][c];
                        if s != ZERO {
                            let mut bs = bs.clone();
                            let mut cs = cs.clone();
                            bs.push(b);
                            cs.push(c);
                            next.push((bs, cs, k * s));
                        }
                    }
                }
            }
            out = next;
        }
        out
    }
}

/// Index of a word in the dense basis of length-`len(w)` words.
fn word_index(w: &[usize], d: usize) -> usize {
    w.iter().fold(0, |acc, &a| acc * d + a)
}

fn basis_word(w: &[usize], d: usize) -> DVector<C64> {
    let mut v = DVector::from_element(d.pow(w.len() as u32), ZERO);
    v[word_index(w, d)] = ONE;
    v
}

/// All words of length `r` over `d` letters, lexicographically.
pub fn all_words(d: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..d).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// A realization `x: L → Inv(F)` given by a bilinear form `B` on `L × F`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantMap {
    source: FiniteCoalgebra,
    target: FiniteCoalgebra,
    form: DMatrix<C64>,
    /// `ops[l][(c, a)]`: coefficient of `e_c` in `x(l)(e_a)`.
    ops: Vec<DMatrix<C64>>,
}

impl InvariantMap {
    /// `x(l)(f) = Σ B(l, f') f''`; `form` is `dim L × dim F`.
    pub fn from_form(source: FiniteCoalgebra, target: FiniteCoalgebra, form: DMatrix<C64>) -> Result<Self> {
        if form.nrows() != source.dim() {
            return Err(Error::DimensionMismatch { expected: source.dim(), found: form.nrows() });
        }
        if form.ncols() != target.dim() {
            return Err(Error::DimensionMismatch { expected: target.dim(), found: form.ncols() });
        }
        let d = target.dim();
        let ops = (0..source.dim())
            .map(|l| {
                DMatrix::from_fn(d, d, |c, a| (0..d).map(|b| target.delta[a][b][c] * form[(l, b)]).sum())
            })
            .collect();
        Ok(InvariantMap { source, target, form, ops })
    }

    pub fn source(&self) -> &FiniteCoalgebra {
        &self.source
    }

    pub fn target(&self) -> &FiniteCoalgebra {
        &self.target
    }

    pub fn form(&self) -> &DMatrix<C64> {
        &self.form
    }

    /// Matrix of `x(e_l)` acting on column vectors over the target basis.
    pub fn matrix(&self, l: usize) -> &DMatrix<C64> {
        &self.ops[l]
    }

    /// `y: F → Inv(L)` from `Bᵀ`.
    pub fn transpose(&self) -> InvariantMap {
        InvariantMap::from_form(self.target.clone(), self.source.clone(), self.form.transpose())
            .expect("shapes agree")
    }

    /// Matrices of the extensions `X(l)` on words of length `r`, built by
    /// `X_r(l) = Σ δ[l][b][c] x(b) ⊗ X_{r−1}(c)` from `X_0(l) = ε(l)`.
    fn extension(&self, r: usize) -> Vec<DMatrix<C64>> {
        let dl = self.source.dim();
        let mut cur: Vec<DMatrix<C64>> = self.source.eps.iter().map(|e| DMatrix::from_element(1, 1, *e)).collect();
        for _ in 0..r {
            cur = (0..dl)
                .map(|l| {
                    let size = self.target.dim() * cur[0].nrows();
                    let mut m = DMatrix::from_element(size, size, ZERO);
                    for b in 0..dl {
                        for (s, xc) in self.source.delta[l][b].iter().zip(&cur) {
                            if *s != ZERO {
                                m += self.ops[b].kronecker(xc) * *s;
                            }
                        }
                    }
                    m
                })
                .collect();
        }
        cur
    }

    fn check_word(&self, w: &[usize], z: &[usize]) -> Result<()> {
        let bad = |v: &[usize], d: usize| v.iter().copied().find(|&a| a >= d);
        if let Some(a) = bad(w, self.source.dim()) {
            return Err(Error::IndexOutOfRange { index: a, lo: 0, hi: self.source.dim() - 1 });
        }
        if let Some(a) = bad(z, self.target.dim()) {
            return Err(Error::IndexOutOfRange { index: a, lo: 0, hi: self.target.dim() - 1 });
        }
        Ok(())
    }
}

/// `π_x(w)` applied to the basis word `z`; the result lives on words of
/// length `len(z)`, indexed with the first letter most significant.
pub fn pi_apply(x: &InvariantMap, w: &[usize], z: &[usize]) -> Result<DVector<C64>> {
    x.check_word(w, z)?;
    let ext = x.extension(z.len());
    let mut v = basis_word(z, x.target.dim());
    for &l in w.iter().rev() {
        v = &ext[l] * v;
    }
    Ok(v)
}

/// `⟨u, z⟩ = ε_F ∘ π_x(u)(z)`.
pub fn pairing(x: &InvariantMap, u: &[usize], z: &[usize]) -> Result<C64> {
    let v = pi_apply(x, u, z)?;
    Ok(x.target.counit_power(z.len()).dot(&v))
}

/// `⟨u, v⟩` for every target word `v` of length `r`.
fn pairing_row(x: &InvariantMap, u: &[usize], r: usize) -> Vec<C64> {
    let ext = x.extension(r);
    let mut row = x.target.counit_power(r).transpose();
    for &l in u {
        row *= &ext[l];
    }
    row.iter().copied().collect()
}

/// Both sides of `ε_F ∘ π_x(w)(z) = ε_L ∘ π_y(τz)(τw)`.
pub fn duality_check(x: &InvariantMap, w: &[usize], z: &[usize]) -> Result<(C64, C64)> {
    let lhs = pairing(x, w, z)?;
    let tz: Vec<usize> = z.iter().rev().copied().collect();
    let tw: Vec<usize> = w.iter().rev().copied().collect();
    let rhs = pairing(&x.transpose(), &tz, &tw)?;
    Ok((lhs, rhs))
}

/// Deviations of the two pairing identities
/// `⟨u, z_1 z_2⟩ = Σ ⟨u', z_1⟩⟨u'', z_2⟩` and
/// `⟨u_1 u_2, z⟩ = Σ ⟨u_2, z'⟩⟨u_1, z''⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingDeviation {
    pub product_in_f: f64,
    pub product_in_l: f64,
}

pub fn pairing_check(
    x: &InvariantMap,
    u: &[usize],
    z1: &[usize],
    z2: &[usize],
    u1: &[usize],
    u2: &[usize],
    z: &[usize],
) -> Result<PairingDeviation> {
    let df = x.target.dim();
    x.check_word(u, z1)?;
    x.check_word(u1, z2)?;
    x.check_word(u2, z)?;

    let z12: Vec<usize> = z1.iter().chain(z2).copied().collect();
    let lhs1 = pairing(x, u, &z12)?;
    let mut rhs1 = ZERO;
    for (b, c, k) in x.source.word_coproduct(u) {
        rhs1 += k * pairing(x, &b, z1)? * pairing(x, &c, z2)?;
    }

    let u12: Vec<usize> = u1.iter().chain(u2).copied().collect();
    let lhs2 = pairing(x, &u12, z)?;
    let row2 = pairing_row(x, u2, z.len());
    let row1 = pairing_row(x, u1, z.len());
    let mut rhs2 = ZERO;
    for (b, c, k) in x.target.word_coproduct(z) {
        rhs2 += k * row2[word_index(&b, df)] * row1[word_index(&c, df)];
    }
    Ok(PairingDeviation {
        product_in_f: (lhs1 - rhs1).norm(),
        product_in_l: (lhs2 - rhs2).norm(),
    })
}

/// For a fixed `w`: the largest `|ε_F ∘ π_x(w)(z)|` and `|ε_L ∘ π_y(τz)(τw)|`
/// over every `z` up to `max_len`, and whether they vanish together.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationConsistency {
    pub max_lhs: f64,
    pub max_rhs: f64,
    pub consistent: bool,
}

pub fn relation_consistency(x: &InvariantMap, w: &[usize], max_len: usize) -> Result<RelationConsistency> {
    let y = x.transpose();
    let tw: Vec<usize> = w.iter().rev().copied().collect();
    let (mut max_lhs, mut max_rhs) = (0.0f64, 0.0f64);
    for r in 0..=max_len {
        let lhs_row = pairing_row(x, w, r);
        for z in all_words(x.target.dim(), r) {
            max_lhs = max_lhs.max(lhs_row[word_index(&z, x.target.dim())].norm());
            let tz: Vec<usize> = z.iter().rev().copied().collect();
            max_rhs = max_rhs.max(pairing(&y, &tz, &tw)?.norm());
        }
    }
    let consistent = (max_lhs <= DUALITY_TOL) == (max_rhs <= DUALITY_TOL);
    Ok(RelationConsistency { max_lhs, max_rhs, consistent })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityFailure {
    pub trial: usize,
    pub source: String,
    pub target: String,
    pub w: Vec<usize>,
    pub z: Vec<usize>,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub trials: usize,
    pub max_abs_deviation: f64,
    pub failures: Vec<DualityFailure>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub cases: usize,
    pub max_abs_deviation: f64,
    pub failures: Vec<usize>,
}

/// The coalgebras the random generator draws from, up to dimension `max_dim`.
pub fn catalogue(max_dim: usize) -> Vec<FiniteCoalgebra> {
    let all = [
        FiniteCoalgebra::trivial(),
        FiniteCoalgebra::cyclic(2).unwrap(),
        FiniteCoalgebra::cyclic(3).unwrap(),
        FiniteCoalgebra::truncated_poly(2).unwrap(),
        FiniteCoalgebra::truncated_poly(3).unwrap(),
        FiniteCoalgebra::leibnitz(1).unwrap(),
        FiniteCoalgebra::leibnitz(2).unwrap(),
        FiniteCoalgebra::leibnitz(3).unwrap(),
        FiniteCoalgebra::cyclic(4).unwrap(),
        FiniteCoalgebra::matrix(2).unwrap(),
    ];
    all.into_iter().filter(|c| c.dim() <= max_dim).collect()
}

fn random_c64(rng: &mut impl Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// A catalogue coalgebra, possibly co-opposite, possibly in a random unitary
/// basis. Unitary changes keep structure constants of unit size, so pairings
/// stay small enough for an absolute tolerance to be meaningful.
pub fn random_coalgebra(rng: &mut impl Rng, max_dim: usize) -> FiniteCoalgebra {
    let cat = catalogue(max_dim);
    let mut c = cat[rng.random_range(0..cat.len())].clone();
    if rng.random_bool(0.5) {
        c = c.opposite();
    }
    if rng.random_bool(0.75) {
        let d = c.dim();
        let m = DMatrix::from_fn(d, d, |_, _| random_c64(rng));
        let u = m.qr().q();
        c = c.change_basis(&u).expect("unitary matrices are invertible");
    }
    c
}

/// A random realization between two random coalgebras, with the form scaled
/// to unit spectral norm.
pub fn random_instance(rng: &mut impl Rng, max_dim: usize) -> InvariantMap {
    let l = random_coalgebra(rng, max_dim);
    let f = random_coalgebra(rng, max_dim);
    let mut form = DMatrix::from_fn(l.dim(), f.dim(), |_, _| random_c64(rng));
    let norm = form.clone().singular_values().max();
    if norm > 0.0 {
        form /= C64::new(norm, 0.0);
    }
    InvariantMap::from_form(l, f, form).expect("shapes agree")
}

fn random_word(rng: &mut impl Rng, d: usize, max_len: usize) -> Vec<usize> {
    let n = rng.random_range(0..=max_len);
    (0..n).map(|_| rng.random_range(0..d)).collect()
}

/// Seeded duality trials with dimensions ≤ 3 and word lengths ≤ 4.
pub fn run_duality_trials(trials: usize, seed: u64) -> Result<DualityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = DualityReport { trials, max_abs_deviation: 0.0, failures: Vec::new() };
    for trial in 0..trials {
        let x = random_instance(&mut rng, 3);
        let w = random_word(&mut rng, x.source.dim(), 4);
        let z = random_word(&mut rng, x.target.dim(), 4);
        let (lhs, rhs) = duality_check(&x, &w, &z)?;
        let dev = (lhs - rhs).norm();
        report.max_abs_deviation = report.max_abs_deviation.max(dev);
        if dev.is_nan() || dev > DUALITY_TOL {
            report.failures.push(DualityFailure {
                trial,
                source: x.source.name.clone(),
                target: x.target.name.clone(),
                w,
                z,
                deviation: dev,
            });
        }
    }
    Ok(report)
}

/// Seeded checks of both pairing identities, words of length ≤ 2 on each side.
pub fn run_pairing_trials(cases: usize, seed: u64) -> Result<PairingReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = PairingReport { cases, max_abs_deviation: 0.0, failures: Vec::new() };
    for case in 0..cases {
        let x = random_instance(&mut rng, 3);
        let (dl, df) = (x.source.dim(), x.target.dim());
        let u = random_word(&mut rng, dl, 2);
        let z1 = random_word(&mut rng, df, 2);
        let z2 = random_word(&mut rng, df, 2);
        let u1 = random_word(&mut rng, dl, 2);
        let u2 = random_word(&mut rng, dl, 2);
        let z = random_word(&mut rng, df, 3);
        let d = pairing_check(&x, &u, &z1, &z2, &u1, &u2, &z)?;
        let dev = d.product_in_f.max(d.product_in_l);
        report.max_abs_deviation = report.max_abs_deviation.max(dev);
        if dev.is_nan() || dev > DUALITY_TOL {
            report.failures.push(case);
        }
    }
    Ok(report)
}
