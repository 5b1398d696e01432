//! Seeded property checks over the whole library, summarized for the CLI.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coalgebra::BasisSymbol;
use crate::duality;
use crate::error::Result;
use crate::field::VectorField;
use crate::lie::{self, FlowRequest};
use crate::multiindex::{mi, MultiIndex};
use crate::relations;
use crate::sampling;
use crate::C64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub cases: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl PropertyCheck {
    fn new(name: &str, cases: usize, max_deviation: f64, tolerance: f64) -> Self {
        PropertyCheck {
            name: name.into(),
            cases,
            max_deviation,
            tolerance,
            passed: max_deviation <= tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<PropertyCheck>,
}

/// Outcome of the random path-sum chains.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainStats {
    pub chains: usize,
    pub max_pathsum_deviation: f64,
    /// Largest `|direct| / bound` (0 when the bound is 0 and the value is 0).
    pub max_bound_ratio: f64,
    pub bound_violations: usize,
    pub vanishing_cases: usize,
    pub vanishing_violations: usize,
}

pub fn chain_stats(seed: u64, chains: usize) -> Result<ChainStats> {
    let mut rng = sampling::rng(seed);
    let mut s = ChainStats {
        chains,
        max_pathsum_deviation: 0.0,
        max_bound_ratio: 0.0,
        bound_violations: 0,
        vanishing_cases: 0,
        vanishing_violations: 0,
    };
    for _ in 0..chains {
        let c = sampling::random_chain(&mut rng);
        let d = lie::eps_chain_direct(&c)?;
        let p = lie::eps_chain_pathsum(&c, lie::default_cap(&c))?;
        s.max_pathsum_deviation = s.max_pathsum_deviation.max((d - p).norm());
        let bound = lie::chain_bound(&c);
        if d.norm() > bound * (1.0 + 1e-12) {
            s.bound_violations += 1;
        }
        if bound > 0.0 {
            s.max_bound_ratio = s.max_bound_ratio.max(d.norm() / bound);
        }
        if c.beta.degree() > c.alpha.degree() + c.len() as u64 + 1 {
            s.vanishing_cases += 1;
            if d != C64::new(0.0, 0.0) {
                s.vanishing_violations += 1;
            }
        }
    }
    Ok(s)
}

/// `max |exp_pairing(tol) − exp_pairing(tol/100)|` on `cases` instances with
/// `|t|·m(A) ≤ 0.9`.
pub fn truncation_soundness(seed: u64, cases: usize, tol: f64) -> Result<f64> {
    let mut rng = sampling::rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let (a, t, beta) = sampling::random_exp_case(&mut rng, 0.05, 0.9);
        let coarse = lie::exp_pairing(&a, t, &beta, tol)?;
        let fine = lie::exp_pairing(&a, t, &beta, tol / 100.0)?;
        worst = worst.max((coarse.value - fine.value).norm());
    }
    Ok(worst)
}

/// `max |ε(e^{tD} f_{n+m}) − ε(e^{tD} f_n) ε(e^{tD} f_m)|`.
pub fn character_deviation(seed: u64, cases: usize, tol: f64) -> Result<f64> {
    let mut rng = sampling::rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let (a, t, _) = sampling::random_exp_case(&mut rng, 0.05, 0.8);
        let p = a.p();
        let n = sampling::index_up_to_degree(&mut rng, p, 3);
        let m = sampling::index_up_to_degree(&mut rng, p, 3);
        let e = |k: &MultiIndex| lie::exp_pairing(&a, t, k, tol).map(|r| r.value);
        let nm = n.add(&m)?;
        worst = worst.max((e(&nm)? - e(&n)? * e(&m)?).norm());
    }
    Ok(worst)
}

/// `max |flow(flow(x, t1).y, t2) − flow(x, t1 + t2)|` over cases where all
/// three flows are inside their certified discs.
pub fn semigroup_deviation(seed: u64, cases: usize, tol: f64) -> Result<f64> {
    let mut rng = sampling::rng(seed);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < cases {
        let p = rng.random_range(1..=2);
        let a = sampling::random_field(&mut rng, p, 2, 2);
        let x: Vec<C64> = (0..p).map(|_| sampling::complex_in_square(&mut rng, 0.5)).collect();
        let radius = lie::certified_radius(&a, &x)?;
        let t1 = C64::from_polar(rng.random_range(0.05..0.4) * radius, rng.random_range(0.0..std::f64::consts::TAU));
        let t2 = t1 * rng.random_range(0.1..1.0);
        if (t1 + t2).norm() >= 0.9 * radius {
            continue;
        }
        let first = lie::flow(&FlowRequest::new(a.clone(), x.clone(), t1, tol))?;
        let r2 = lie::certified_radius(&a, &first.y)?;
        if t2.norm() >= 0.9 * r2 {
            continue;
        }
        let two = lie::flow(&FlowRequest::new(a.clone(), first.y, t2, tol))?;
        let one = lie::flow(&FlowRequest::new(a, x, t1 + t2, tol))?;
        for (u, v) in two.y.iter().zip(&one.y) {
            worst = worst.max((u - v).norm());
        }
        done += 1;
    }
    Ok(worst)
}

/// The three fields with closed-form flows used throughout: `(name, A, x0)`.
pub fn closed_form_fields() -> Vec<(&'static str, VectorField, Vec<C64>)> {
    let re = |x: f64| C64::new(x, 0.0);
    vec![
        ("riccati", VectorField::scalar_poly(&[0.0, 0.0, 1.0]), vec![re(0.5)]),
        ("linear", VectorField::scalar_poly(&[0.0, 1.0]), vec![re(1.0)]),
        (
            "rotation",
            VectorField::from_terms(2, [(1, mi(&[0, 1]), re(1.0)), (2, mi(&[1, 0]), re(-1.0))])
                .expect("valid field"),
            vec![re(1.0), re(0.0)],
        ),
    ]
}

/// `max_i |(y_i(t+h) − y_i(t−h))/2h − A^i(y(t))|` with `h = 1e-4 · radius`.
pub fn ode_residual(a: &VectorField, x0: &[C64], t: C64, tol: f64) -> Result<f64> {
    let radius = lie::certified_radius(a, x0)?;
    let h = 1e-4 * radius;
    let at = |s: C64| lie::flow(&FlowRequest::new(a.clone(), x0.to_vec(), s, tol)).map(|r| r.y);
    let plus = at(t + h)?;
    let minus = at(t - h)?;
    let y = at(t)?;
    let rhs = a.eval(&y)?;
    Ok((0..a.p())
        .map(|i| ((plus[i] - minus[i]) / (2.0 * h) - rhs[i]).norm())
        .fold(0.0, f64::max))
}

/// Largest degree-filtration violation count and the largest deviation of
/// the flow from `exp(t·[[M, b], [0, 0]]) [x; 1]` over random affine fields.
pub fn affine_flow_deviation(seed: u64, cases: usize, tol: f64) -> Result<(usize, f64)> {
    let mut rng = sampling::rng(seed);
    let mut violations = 0;
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let p = rng.random_range(1..=3);
        let a = sampling::random_affine_field(&mut rng, p);
        for d in 0..=4u32 {
            for n in MultiIndex::all_up_to_degree(p, d) {
                let image = a.apply_da(&BasisSymbol::row(n))?;
                if image.keys().any(|s| s.lower.degree() > u64::from(d)) {
                    violations += 1;
                }
            }
        }
        let x: Vec<C64> = (0..p).map(|_| C64::new(rng.random_range(-1.0..1.0), 0.0)).collect();
        let t = C64::new(0.6 * lie::certified_radius(&a, &x)?, 0.0);
        let y = lie::flow(&FlowRequest::new(a.clone(), x.clone(), t, tol))?.y;
        let want = affine_exact(&a, &x, t);
        for (u, v) in y.iter().zip(&want) {
            worst = worst.max((u - v).norm());
        }
    }
    Ok((violations, worst))
}

/// Flow of an affine field through the augmented matrix exponential.
pub fn affine_exact(a: &VectorField, x: &[C64], t: C64) -> Vec<C64> {
    let p = a.p();
    let mut aug = DMatrix::from_element(p + 1, p + 1, C64::new(0.0, 0.0));
    for i in 1..=p {
        aug[(i - 1, p)] = a.coeff(i, &MultiIndex::zero(p));
        for j in 1..=p {
            aug[(i - 1, j - 1)] = a.coeff(i, &MultiIndex::unit(p, j).expect("slot in range"));
        }
    }
    let e = (aug * t).exp();
    let mut v = DVector::from_element(p + 1, C64::new(1.0, 0.0));
    for (k, xk) in x.iter().enumerate() {
        v[k] = *xk;
    }
    (e * v).iter().take(p).copied().collect()
}

/// Runs every check at its default size.
pub fn run(seed: u64) -> Result<SuiteSummary> {
    let tol = 1e-9;
    let mut checks = Vec::new();

    let c = chain_stats(seed, 200)?;
    checks.push(PropertyCheck::new("pathsum_equivalence", c.chains, c.max_pathsum_deviation, 1e-10));
    checks.push(PropertyCheck::new("chain_bound", c.chains, c.bound_violations as f64, 0.0));
    checks.push(PropertyCheck::new("vanishing", c.vanishing_cases, c.vanishing_violations as f64, 0.0));

    checks.push(PropertyCheck::new("truncation_soundness", 50, truncation_soundness(seed, 50, tol)?, tol));
    checks.push(PropertyCheck::new("character", 20, character_deviation(seed, 20, tol)?, 10.0 * tol));
    checks.push(PropertyCheck::new("semigroup", 20, semigroup_deviation(seed, 20, tol)?, 10.0 * tol));

    let mut ode = 0.0f64;
    for (_, a, x0) in closed_form_fields() {
        ode = ode.max(ode_residual(&a, &x0, C64::new(0.4, 0.0), 1e-12)?);
    }
    checks.push(PropertyCheck::new("ode_residual", 3, ode, 1e-5));

    let d = duality::run_duality_trials(500, seed)?;
    checks.push(PropertyCheck::new("duality", d.trials, d.max_abs_deviation, duality::DUALITY_TOL));
    let pr = duality::run_pairing_trials(200, seed)?;
    checks.push(PropertyCheck::new("pairing_identities", pr.cases, pr.max_abs_deviation, duality::DUALITY_TOL));

    let r = relations::relations_summary(2, 4)?;
    checks.push(PropertyCheck::new("module_relations", r.pairs_checked, r.max_deviation, relations::RELATION_TOL));
    let rejected = !r.false_witness.ok;
    checks.push(PropertyCheck::new("false_relation_rejected", 1, if rejected { 0.0 } else { 1.0 }, 0.0));
    let exact = r.counit_identity_ok && r.invariance_ok;
    checks.push(PropertyCheck::new("lowering_counit_identity", 1, if exact { 0.0 } else { 1.0 }, 0.0));

    let (violations, dev) = affine_flow_deviation(seed, 10, 1e-12)?;
    checks.push(PropertyCheck::new("degree_filtration", 10, violations as f64, 0.0));
    checks.push(PropertyCheck::new("affine_flow_vs_matrix_exp", 10, dev, 1e-8));

    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteSummary { seed, passed, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_exact_linear() {
        let a = VectorField::scalar_poly(&[0.0, 1.0]);
        let y = affine_exact(&a, &[C64::new(1.0, 0.0)], C64::new(0.4, 0.0));
        assert!((y[0].re - 0.4f64.exp()).abs() < 1e-14);
        let b = VectorField::scalar_poly(&[1.0]);
        let y = affine_exact(&b, &[C64::new(2.0, 0.0)], C64::new(0.25, 0.0));
        assert!((y[0].re - 2.25).abs() < 1e-14);
    }

    #[test]
    fn small_runs_pass() {
        let c = chain_stats(1, 20).unwrap();
        assert!(c.max_pathsum_deviation <= 1e-10 && c.bound_violations == 0 && c.vanishing_violations == 0);
        assert!(truncation_soundness(1, 5, 1e-9).unwrap() <= 1e-9);
        assert!(character_deviation(1, 5, 1e-9).unwrap() <= 1e-8);
        assert!(semigroup_deviation(1, 3, 1e-9).unwrap() <= 1e-8);
    }
}
