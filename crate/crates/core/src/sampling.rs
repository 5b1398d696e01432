//! Seeded generators for random test instances.
//!
//! All randomness goes through [`ChaCha8Rng`] seeded with `seed_from_u64`, so
//! a seed reproduces the same instances on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::VectorField;
use crate::lie::ChainSpec;
use crate::multiindex::MultiIndex;
use crate::C64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_in_square(rng: &mut impl Rng, r: f64) -> C64 {
    C64::new(rng.random_range(-r..=r), rng.random_range(-r..=r))
}

/// A multi-index with every entry in `0..=max_entry`.
pub fn index_in_box(rng: &mut impl Rng, p: usize, max_entry: u32) -> MultiIndex {
    MultiIndex::new((0..p).map(|_| rng.random_range(0..=max_entry)).collect()).expect("p ≥ 1")
}

/// A multi-index of total degree at most `max_degree`.
pub fn index_up_to_degree(rng: &mut impl Rng, p: usize, max_degree: u32) -> MultiIndex {
    let mut left = rng.random_range(0..=max_degree);
    let mut v = vec![0; p];
    for slot in v.iter_mut().take(p - 1) {
        let e = rng.random_range(0..=left);
        *slot = e;
        left -= e;
    }
    v[p - 1] = left;
    MultiIndex::new(v).expect("p ≥ 1")
}

/// Up to `max_terms` monomials of degree ≤ `max_degree` per component, with
/// complex coefficients in the unit square.
pub fn random_field(rng: &mut impl Rng, p: usize, max_degree: u32, max_terms: usize) -> VectorField {
    let mut a = VectorField::zero(p).expect("p ≥ 1");
    for i in 1..=p {
        for _ in 0..rng.random_range(1..=max_terms) {
            let m = index_up_to_degree(rng, p, max_degree);
            a.add_coeff(i, m, complex_in_square(rng, 1.0)).expect("shapes agree");
        }
    }
    a
}

/// `A(z) = b + M z` with real entries in `[-1, 1]`.
pub fn random_affine_field(rng: &mut impl Rng, p: usize) -> VectorField {
    let mut a = VectorField::zero(p).expect("p ≥ 1");
    for i in 1..=p {
        a.add_coeff(i, MultiIndex::zero(p), C64::new(rng.random_range(-1.0..=1.0), 0.0))
            .expect("shapes agree");
        for j in 1..=p {
            let c = C64::new(rng.random_range(-1.0..=1.0), 0.0);
            a.add_coeff(i, MultiIndex::unit(p, j).expect("slot in range"), c)
                .expect("shapes agree");
        }
    }
    a
}

/// `p ≤ 2`, `1 ≤ n ≤ 4`, monomial degrees ≤ 3, `|α|, |β| ≤ 4`.
pub fn random_chain(rng: &mut impl Rng) -> ChainSpec {
    let p = rng.random_range(1..=2);
    let n = rng.random_range(1..=4);
    let fields = (0..n).map(|_| random_field(rng, p, 3, 3)).collect();
    let alpha = index_in_box(rng, p, 4);
    let beta = index_in_box(rng, p, 4);
    ChainSpec::new(fields, alpha, beta).expect("shapes agree")
}

/// An exponential-pairing instance `(A, t, β)` with `|t|·m(A) = r` drawn from
/// `[r_lo, r_hi]`. Every component gets a constant term so the origin is not
/// a fixed point, and `1 ≤ deg β ≤ 3`, so the pairing is not trivially 0 or 1.
pub fn random_exp_case(rng: &mut impl Rng, r_lo: f64, r_hi: f64) -> (VectorField, C64, MultiIndex) {
    let p = rng.random_range(1..=2);
    let mut a = random_field(rng, p, 2, 2);
    for i in 1..=p {
        let c = C64::from_polar(rng.random_range(0.2..1.0), rng.random_range(0.0..std::f64::consts::TAU));
        a.add_coeff(i, MultiIndex::zero(p), c).expect("shapes agree");
    }
    let r = rng.random_range(r_lo..=r_hi);
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    let t = C64::from_polar(r / a.m_norm(), theta);
    let beta = loop {
        let b = index_up_to_degree(rng, p, 3);
        if !b.is_zero() {
            break b;
        }
    };
    (a, t, beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_reproduce() {
        let (mut a, mut b) = (rng(42), rng(42));
        for _ in 0..20 {
            assert_eq!(random_chain(&mut a), random_chain(&mut b));
        }
    }

    #[test]
    fn generated_shapes() {
        let mut r = rng(1);
        for _ in 0..100 {
            let c = random_chain(&mut r);
            assert!((1..=4).contains(&c.len()));
            assert!(c.alpha.sup_norm() <= 4 && c.beta.sup_norm() <= 4);
            assert!(c.fields.iter().all(|a| a.max_degree() <= 3 && !a.is_zero()));
            let m = index_up_to_degree(&mut r, 3, 5);
            assert!(m.degree() <= 5);
            assert!(random_affine_field(&mut r, 2).is_affine());
            let (a, t, _) = random_exp_case(&mut r, 0.1, 0.9);
            let prod = t.norm() * a.m_norm();
            assert!((0.1 - 1e-12..=0.9 + 1e-12).contains(&prod));
        }
    }
}
