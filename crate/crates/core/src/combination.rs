//! Finite complex linear combinations over an ordered key set.

use std::collections::btree_map::{self, BTreeMap};

use crate::{C64, DEFAULT_PRUNE_EPS};

/// A finite linear combination `Σ c_k · k`.
///
/// Coefficients with magnitude below the prune epsilon are dropped after every
/// linear-combination step. The epsilon travels with the value: results of
/// binary operations inherit the left operand's setting.
#[derive(Clone, Debug)]
pub struct Combination<K: Ord> {
    terms: BTreeMap<K, C64>,
    eps: f64,
}

impl<K: Ord + Clone> Default for Combination<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord> PartialEq for Combination<K> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<K: Ord + Clone> Combination<K> {
    pub fn new() -> Self {
        Self::with_prune_eps(DEFAULT_PRUNE_EPS)
    }

    pub fn with_prune_eps(eps: f64) -> Self {
        Combination { terms: BTreeMap::new(), eps }
    }

    pub fn single(key: K) -> Self {
        Self::term(key, C64::new(1.0, 0.0))
    }

    pub fn term(key: K, coeff: C64) -> Self {
        let mut c = Self::new();
        c.add_term(key, coeff);
        c.prune();
        c
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (K, C64)>) -> Self {
        let mut c = Self::new();
        for (k, v) in terms {
            c.add_term(k, v);
        }
        c.prune();
        c
    }

    pub fn prune_eps(&self) -> f64 {
        self.eps
    }

    /// An empty combination sharing this one's prune epsilon.
    pub fn empty_like(&self) -> Self {
        Self::with_prune_eps(self.eps)
    }

    pub fn set_prune_eps(&mut self, eps: f64) {
        self.eps = eps;
        self.prune();
    }

    /// Accumulates without pruning; call [`prune`](Self::prune) once the
    /// batch is complete.
    pub fn add_term(&mut self, key: K, coeff: C64) {
        *self.terms.entry(key).or_insert(C64::new(0.0, 0.0)) += coeff;
    }

    pub fn prune(&mut self) {
        let eps = self.eps;
        self.terms.retain(|_, v| v.norm() > eps || (eps == 0.0 && *v != C64::new(0.0, 0.0)));
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&K, &C64) -> bool) {
        self.terms.retain(|k, v| keep(k, v));
    }

    pub fn coeff(&self, key: &K) -> C64 {
        self.terms.get(key).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, C64> {
        self.terms.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, C64> {
        self.terms.keys()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.empty_like();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * s);
        }
        out.prune();
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(C64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(C64::new(-1.0, 0.0), other)
    }

    /// `self + s · other`.
    pub fn axpy(&self, s: C64, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v * s);
        }
        out.prune();
        out
    }

    /// Largest coefficient magnitude, 0 for the empty combination.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Sum of coefficient magnitudes.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|v| v.norm()).sum()
    }
}

impl<'a, K: Ord> IntoIterator for &'a Combination<K> {
    type Item = (&'a K, &'a C64);
    type IntoIter = btree_map::Iter<'a, K, C64>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn accumulates_and_prunes_dust() {
        let mut v: Combination<u32> = Combination::new();
        v.add_term(1, c(1.0));
        v.add_term(1, c(-1.0 + 1e-17));
        v.add_term(2, c(3.0));
        v.prune();
        assert_eq!(v.len(), 1);
        assert_eq!(v.coeff(&2), c(3.0));
        assert_eq!(v.coeff(&1), c(0.0));
    }

    #[test]
    fn eps_is_configurable_and_inherited() {
        let mut v: Combination<u32> = Combination::with_prune_eps(1e-3);
        v.add_term(1, c(1e-4));
        v.add_term(2, c(1.0));
        v.prune();
        assert_eq!(v.len(), 1);
        let w = v.scale(c(1e-3 * 0.5));
        assert!(w.is_empty());
        let mut exact: Combination<u32> = Combination::with_prune_eps(0.0);
        exact.add_term(7, c(1e-300));
        exact.prune();
        assert_eq!(exact.len(), 1);
    }

    #[test]
    fn linear_ops() {
        let a = Combination::from_terms([(1u32, c(1.0)), (2, c(2.0))]);
        let b = Combination::from_terms([(2u32, c(2.0)), (3, c(1.0))]);
        let d = a.sub(&b);
        assert_eq!(d, Combination::from_terms([(1u32, c(1.0)), (3, c(-1.0))]));
        assert_eq!(a.add(&b).coeff(&2), c(4.0));
        assert_eq!(a.max_abs(), 2.0);
        assert_eq!(a.l1_norm(), 3.0);
    }
}
