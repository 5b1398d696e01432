//! The approximated coalgebra `F_a` with basis symbols `f_n^m`, and the left /
//! right invariant operators obtained by contracting one leg of its formal
//! coproduct `Δ f_n^m = Σ_k f_k^m ⊗ f_n^k` against a banded matrix.
//!
//! Matrix-element convention: `f_n^k(E_a^b) = δ(n,a)·δ(k,b)`, so the entry of an
//! operator `O` at `(row n, col k)` is `f_n^k(O)`. With this convention
//!
//! * the left-invariant action acts on the lower index: `f_n^m ↦ Σ_k O[n,k] f_k^m`;
//! * the right-invariant action acts on the upper index: `f_n^m ↦ Σ_k O[k,m] f_n^k`;
//! * `left(O₁) ∘ left(O₂) = left(O₂ · O₁)` (the left action reverses products),
//!   while `right(O₁) ∘ right(O₂) = right(O₁ · O₂)`.
//!
//! Row modules (fixed upper index) are the modules for the left action.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::combination::Combination;
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::C64;

/// The basis symbol `f_lower^upper`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisSymbol {
    pub lower: MultiIndex,
    pub upper: MultiIndex,
}

impl BasisSymbol {
    pub fn new(lower: MultiIndex, upper: MultiIndex) -> Result<Self> {
        if lower.dim() != upper.dim() {
            return Err(Error::DimensionMismatch {
                expected: lower.dim(),
                found: upper.dim(),
            });
        }
        Ok(BasisSymbol { lower, upper })
    }

    /// `f_n^o`, an element of the row module `M_o`.
    pub fn row(lower: MultiIndex) -> Self {
        let upper = MultiIndex::zero(lower.dim());
        BasisSymbol { lower, upper }
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    /// The counit: contraction of the formal coproduct with the identity.
    pub fn counit(&self) -> C64 {
        if self.lower == self.upper {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }

    /// `f_n^m ∈ F_q` iff `|n| ≤ q` and `|m| ≤ q`.
    pub fn in_fq(&self, q: u32) -> bool {
        self.lower.sup_norm() <= q && self.upper.sup_norm() <= q
    }
}

impl fmt::Debug for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f_{}^{}", self.lower, self.upper)
    }
}

pub type FaVector = Combination<BasisSymbol>;

/// Counit of `F_a` extended linearly.
pub fn counit(v: &FaVector) -> C64 {
    v.iter().map(|(s, c)| c * s.counit()).sum()
}

/// A regular (banded) matrix over multi-index pairs.
///
/// Implementations only need to enumerate one row or one column at a time;
/// the matrices themselves are typically infinite.
pub trait BandedOperator: fmt::Debug + Send + Sync {
    /// Ambient dimension `p` of the row/column multi-indices.
    fn dim(&self) -> usize;

    /// Band width `c`: entries vanish whenever `sup_i |n_i − k_i| > c`.
    fn band(&self) -> u32;

    /// Non-zero entries `(k, O[n,k])` of row `n`.
    fn row(&self, n: &MultiIndex) -> Vec<(MultiIndex, C64)>;

    /// Non-zero entries `(k, O[k,m])` of column `m`.
    fn column(&self, m: &MultiIndex) -> Vec<(MultiIndex, C64)>;

    fn entry(&self, n: &MultiIndex, k: &MultiIndex) -> C64 {
        self.row(n)
            .into_iter()
            .filter(|(j, _)| j == k)
            .map(|(_, c)| c)
            .sum()
    }
}

/// Finite sparse banded matrix with explicit entries.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularOperator {
    dim: usize,
    band: u32,
    rows: BTreeMap<MultiIndex, BTreeMap<MultiIndex, C64>>,
    cols: BTreeMap<MultiIndex, BTreeMap<MultiIndex, C64>>,
}

impl RegularOperator {
    pub fn new(dim: usize, band: u32) -> Self {
        RegularOperator {
            dim,
            band,
            rows: BTreeMap::new(),
            cols: BTreeMap::new(),
        }
    }

    /// Adds `c` to the entry at `(n, k)`.
    pub fn insert(&mut self, n: MultiIndex, k: MultiIndex, c: C64) -> Result<()> {
        for idx in [&n, &k] {
            if idx.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: idx.dim(),
                });
            }
        }
        if n.band_distance(&k) > self.band {
            return Err(Error::BandViolation {
                row: n.to_string(),
                col: k.to_string(),
                band: self.band,
            });
        }
        *self
            .rows
            .entry(n.clone())
            .or_default()
            .entry(k.clone())
            .or_insert(C64::new(0.0, 0.0)) += c;
        *self
            .cols
            .entry(k)
            .or_default()
            .entry(n)
            .or_insert(C64::new(0.0, 0.0)) += c;
        Ok(())
    }

    pub fn with_entries(
        dim: usize,
        band: u32,
        entries: impl IntoIterator<Item = (MultiIndex, MultiIndex, C64)>,
    ) -> Result<Self> {
        let mut op = Self::new(dim, band);
        for (n, k, c) in entries {
            op.insert(n, k, c)?;
        }
        Ok(op)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, &C64)> {
        self.rows
            .iter()
            .flat_map(|(n, r)| r.iter().map(move |(k, c)| (n, k, c)))
    }

    /// Matrix product `self · other`; bands add.
    pub fn matmul(&self, other: &RegularOperator) -> Result<RegularOperator> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut out = RegularOperator::new(self.dim, self.band + other.band);
        for (n, row) in &self.rows {
            for (j, a) in row {
                if let Some(orow) = other.rows.get(j) {
                    for (k, b) in orow {
                        out.insert(n.clone(), k.clone(), a * b)?;
                    }
                }
            }
        }
        Ok(out)
    }
}

impl BandedOperator for RegularOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn band(&self) -> u32 {
        self.band
    }

    fn row(&self, n: &MultiIndex) -> Vec<(MultiIndex, C64)> {
        self.rows
            .get(n)
            .map(|r| r.iter().map(|(k, c)| (k.clone(), *c)).collect())
            .unwrap_or_default()
    }

    fn column(&self, m: &MultiIndex) -> Vec<(MultiIndex, C64)> {
        self.cols
            .get(m)
            .map(|r| r.iter().map(|(k, c)| (k.clone(), *c)).collect())
            .unwrap_or_default()
    }
}

/// The identity matrix on `N^p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Identity {
    pub dim: usize,
}

impl BandedOperator for Identity {
    fn dim(&self) -> usize {
        self.dim
    }

    fn band(&self) -> u32 {
        0
    }

    fn row(&self, n: &MultiIndex) -> Vec<(MultiIndex, C64)> {
        vec![(n.clone(), C64::new(1.0, 0.0))]
    }

    fn column(&self, m: &MultiIndex) -> Vec<(MultiIndex, C64)> {
        vec![(m.clone(), C64::new(1.0, 0.0))]
    }
}

/// `Σ_n n_i · E_n^{n − i(1)}`: the elementary lowering operator in slot `i`
/// (1-based), so that `f_n^k ↦ n_i f_{n−i(1)}^k` under the left action.
#[derive(Clone, Debug, PartialEq)]
pub struct Lowering {
    dim: usize,
    slot: usize,
}

impl Lowering {
    pub fn new(dim: usize, i: usize) -> Result<Self> {
        if i == 0 || i > dim {
            return Err(Error::IndexOutOfRange { index: i, lo: 1, hi: dim });
        }
        Ok(Lowering { dim, slot: i - 1 })
    }
}

impl BandedOperator for Lowering {
    fn dim(&self) -> usize {
        self.dim
    }

    fn band(&self) -> u32 {
        1
    }

    fn row(&self, n: &MultiIndex) -> Vec<(MultiIndex, C64)> {
        let ni = n.entries()[self.slot];
        if ni == 0 {
            return Vec::new();
        }
        let mut k = n.entries().to_vec();
        k[self.slot] -= 1;
        vec![(MultiIndex::new(k).unwrap(), C64::new(f64::from(ni), 0.0))]
    }

    fn column(&self, m: &MultiIndex) -> Vec<(MultiIndex, C64)> {
        let mut n = m.entries().to_vec();
        n[self.slot] += 1;
        let c = f64::from(n[self.slot]);
        vec![(MultiIndex::new(n).unwrap(), C64::new(c, 0.0))]
    }
}

/// A finite linear combination of banded operators.
#[derive(Clone, Debug)]
pub struct OperatorSum {
    dim: usize,
    parts: Vec<(C64, Arc<dyn BandedOperator>)>,
}

impl OperatorSum {
    pub fn new(dim: usize) -> Self {
        OperatorSum { dim, parts: Vec::new() }
    }

    pub fn plus(mut self, coeff: C64, op: Arc<dyn BandedOperator>) -> Result<Self> {
        if op.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: op.dim(),
            });
        }
        self.parts.push((coeff, op));
        Ok(self)
    }

    fn gather(&self, mut f: impl FnMut(&dyn BandedOperator) -> Vec<(MultiIndex, C64)>) -> Vec<(MultiIndex, C64)> {
        let mut acc: BTreeMap<MultiIndex, C64> = BTreeMap::new();
        for (s, op) in &self.parts {
            for (k, c) in f(op.as_ref()) {
                *acc.entry(k).or_insert(C64::new(0.0, 0.0)) += s * c;
            }
        }
        acc.into_iter().filter(|(_, c)| *c != C64::new(0.0, 0.0)).collect()
    }
}

impl BandedOperator for OperatorSum {
    fn dim(&self) -> usize {
        self.dim
    }

    fn band(&self) -> u32 {
        self.parts.iter().map(|(_, op)| op.band()).max().unwrap_or(0)
    }

    fn row(&self, n: &MultiIndex) -> Vec<(MultiIndex, C64)> {
        self.gather(|op| op.row(n))
    }

    fn column(&self, m: &MultiIndex) -> Vec<(MultiIndex, C64)> {
        self.gather(|op| op.column(m))
    }
}

fn check_vector_dim(op: &dyn BandedOperator, v: &FaVector) -> Result<()> {
    if let Some(s) = v.keys().find(|s| s.dim() != op.dim()) {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            found: s.dim(),
        });
    }
    Ok(())
}

/// Left-invariant action: `f_n^m ↦ Σ_k O[n,k] · f_k^m`.
pub fn left_invariant_apply(op: &dyn BandedOperator, v: &FaVector) -> Result<FaVector> {
    check_vector_dim(op, v)?;
    let mut out = v.empty_like();
    for (s, c) in v {
        for (k, o) in op.row(&s.lower) {
            out.add_term(
                BasisSymbol {
                    lower: k,
                    upper: s.upper.clone(),
                },
                c * o,
            );
        }
    }
    out.prune();
    Ok(out)
}

/// Right-invariant action: `f_n^m ↦ Σ_k O[k,m] · f_n^k`.
pub fn right_invariant_apply(op: &dyn BandedOperator, v: &FaVector) -> Result<FaVector> {
    check_vector_dim(op, v)?;
    let mut out = v.empty_like();
    for (s, c) in v {
        for (k, o) in op.column(&s.upper) {
            out.add_term(
                BasisSymbol {
                    lower: s.lower.clone(),
                    upper: k,
                },
                c * o,
            );
        }
    }
    out.prune();
    Ok(out)
}

/// Projection onto `F_q`: drops every term with `|lower| > q` or `|upper| > q`.
pub fn restrict_to_fq(v: &FaVector, q: u32) -> FaVector {
    let mut out = v.clone();
    out.retain(|s, _| s.in_fq(q));
    out
}

#[derive(Serialize, Deserialize)]
struct SymbolTerm {
    lower: MultiIndex,
    upper: MultiIndex,
    re: f64,
    im: f64,
}

impl Serialize for Combination<BasisSymbol> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|(s, c)| SymbolTerm {
            lower: s.lower.clone(),
            upper: s.upper.clone(),
            re: c.re,
            im: c.im,
        }))
    }
}

impl<'de> Deserialize<'de> for Combination<BasisSymbol> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<SymbolTerm>::deserialize(deserializer)?;
        let mut out = FaVector::new();
        for t in terms {
            let s = BasisSymbol::new(t.lower, t.upper).map_err(serde::de::Error::custom)?;
            out.add_term(s, C64::new(t.re, t.im));
        }
        out.prune();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::mi;
    use proptest::prelude::*;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn sym(n: &[u32], m: &[u32]) -> BasisSymbol {
        BasisSymbol::new(mi(n), mi(m)).unwrap()
    }

    fn lowering_explicit(max: u32) -> RegularOperator {
        RegularOperator::with_entries(
            1,
            1,
            (1..=max).map(|n| (mi(&[n]), mi(&[n - 1]), re(f64::from(n)))),
        )
        .unwrap()
    }

    #[test]
    fn counit_examples() {
        assert_eq!(sym(&[2], &[2]).counit(), re(1.0));
        assert_eq!(sym(&[2], &[3]).counit(), re(0.0));
        assert_eq!(sym(&[1, 0], &[1, 0]).counit(), re(1.0));
    }

    #[test]
    fn symbol_dims_must_agree() {
        assert!(BasisSymbol::new(mi(&[1]), mi(&[1, 0])).is_err());
    }

    #[test]
    fn left_apply_lowering() {
        let op = Lowering::new(1, 1).unwrap();
        let v = FaVector::single(sym(&[3], &[0]));
        let out = left_invariant_apply(&op, &v).unwrap();
        assert_eq!(out, FaVector::term(sym(&[2], &[0]), re(3.0)));
        // the explicit finite matrix agrees with the structured operator
        let out2 = left_invariant_apply(&lowering_explicit(10), &v).unwrap();
        assert_eq!(out, out2);
        let zero = left_invariant_apply(&op, &FaVector::single(sym(&[0], &[0]))).unwrap();
        assert!(zero.is_empty());
    }

    #[test]
    fn identity_acts_trivially() {
        let id = Identity { dim: 2 };
        let v = FaVector::term(sym(&[1, 2], &[3, 0]), C64::new(0.5, -1.0));
        assert_eq!(left_invariant_apply(&id, &v).unwrap(), v);
        assert_eq!(right_invariant_apply(&id, &v).unwrap(), v);
    }

    #[test]
    fn right_apply_lowering_contracts_the_column() {
        // Σ_k O[k,3] f_0^k with O[k,k−1] = k: only k = 4 contributes.
        let op = Lowering::new(1, 1).unwrap();
        let v = FaVector::single(sym(&[0], &[3]));
        let out = right_invariant_apply(&op, &v).unwrap();
        assert_eq!(out, FaVector::term(sym(&[0], &[4]), re(4.0)));
        // explicit contraction against the finite matrix
        let explicit = lowering_explicit(10);
        let mut expected = FaVector::new();
        for (n, k, c) in explicit.entries() {
            if *k == mi(&[3]) {
                expected.add_term(sym(&[0], n.entries()), *c);
            }
        }
        expected.prune();
        assert_eq!(out, expected);
        assert!(right_invariant_apply(&op, &FaVector::new()).unwrap().is_empty());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let op = Lowering::new(2, 1).unwrap();
        let v = FaVector::single(sym(&[1], &[0]));
        assert!(left_invariant_apply(&op, &v).is_err());
        assert!(right_invariant_apply(&op, &v).is_err());
    }

    #[test]
    fn band_violations_rejected() {
        let mut op = RegularOperator::new(2, 1);
        assert!(op.insert(mi(&[0, 0]), mi(&[1, 1]), re(1.0)).is_ok());
        assert!(matches!(
            op.insert(mi(&[0, 0]), mi(&[2, 0]), re(1.0)),
            Err(Error::BandViolation { .. })
        ));
    }

    #[test]
    fn restrict_examples() {
        let v = FaVector::from_terms([(sym(&[3], &[0]), re(1.0)), (sym(&[1], &[0]), re(1.0))]);
        assert_eq!(restrict_to_fq(&v, 2), FaVector::single(sym(&[1], &[0])));
        assert_eq!(restrict_to_fq(&v, 10), v);
        assert!(restrict_to_fq(&FaVector::new(), 3).is_empty());
    }

    #[test]
    fn left_composition_reverses_matrix_product() {
        // O1 = lowering, O2 = a raising-type explicit matrix, p = 1.
        let o1 = lowering_explicit(8);
        let o2 = RegularOperator::with_entries(
            1,
            1,
            (0..8).map(|n| (mi(&[n]), mi(&[n + 1]), re(0.5 + f64::from(n)))),
        )
        .unwrap();
        let v = FaVector::from_terms([(sym(&[2], &[1]), re(1.0)), (sym(&[4], &[0]), re(-2.0))]);
        let composed = left_invariant_apply(&o1, &left_invariant_apply(&o2, &v).unwrap()).unwrap();
        let via_21 = left_invariant_apply(&o2.matmul(&o1).unwrap(), &v).unwrap();
        let via_12 = left_invariant_apply(&o1.matmul(&o2).unwrap(), &v).unwrap();
        assert_eq!(composed, via_21);
        assert_ne!(composed, via_12);
        // the right action keeps the order
        let w = FaVector::from_terms([(sym(&[2], &[1]), re(1.0)), (sym(&[4], &[3]), re(-2.0))]);
        let rc = right_invariant_apply(&o1, &right_invariant_apply(&o2, &w).unwrap()).unwrap();
        assert_eq!(rc, right_invariant_apply(&o1.matmul(&o2).unwrap(), &w).unwrap());
    }

    #[test]
    fn serializes_sorted() {
        let v = FaVector::from_terms([(sym(&[3], &[0]), re(1.0)), (sym(&[1], &[2]), C64::new(0.0, 2.0))]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(
            s,
            r#"[{"lower":[1],"upper":[2],"re":0.0,"im":2.0},{"lower":[3],"upper":[0],"re":1.0,"im":0.0}]"#
        );
        let back: FaVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    fn random_op(seed: Vec<(u32, u32, i8, i8)>) -> RegularOperator {
        let mut op = RegularOperator::new(2, 2);
        for (a, b, da, db) in seed {
            let n = mi(&[a, b]);
            let k0 = (i64::from(a) + i64::from(da)).max(0) as u32;
            let k1 = (i64::from(b) + i64::from(db)).max(0) as u32;
            op.insert(n, mi(&[k0, k1]), re(f64::from(da) + 0.25 * f64::from(db)))
                .unwrap();
        }
        op
    }

    fn op_strategy() -> impl Strategy<Value = RegularOperator> {
        prop::collection::vec((0u32..5, 0u32..5, -2i8..=2, -2i8..=2), 0..12).prop_map(random_op)
    }

    fn vec_strategy() -> impl Strategy<Value = FaVector> {
        prop::collection::vec((0u32..5, 0u32..5, 0u32..5, 0u32..5, -3i32..=3), 0..6).prop_map(|ts| {
            FaVector::from_terms(
                ts.into_iter()
                    .map(|(a, b, c, d, w)| (sym(&[a, b], &[c, d]), re(f64::from(w)))),
            )
        })
    }

    fn close(a: &FaVector, b: &FaVector) -> bool {
        a.sub(b).max_abs() <= 1e-12
    }

    proptest! {
        #[test]
        fn sides_commute(o1 in op_strategy(), o2 in op_strategy(), v in vec_strategy()) {
            let lr = left_invariant_apply(&o1, &right_invariant_apply(&o2, &v).unwrap()).unwrap();
            let rl = right_invariant_apply(&o2, &left_invariant_apply(&o1, &v).unwrap()).unwrap();
            prop_assert!(close(&lr, &rl));
        }

        #[test]
        fn actions_are_linear(o in op_strategy(), v in vec_strategy(), w in vec_strategy(), s in -3i32..=3) {
            let s = re(f64::from(s));
            let lhs = left_invariant_apply(&o, &v.axpy(s, &w)).unwrap();
            let rhs = left_invariant_apply(&o, &v).unwrap()
                .axpy(s, &left_invariant_apply(&o, &w).unwrap());
            prop_assert!(close(&lhs, &rhs));
            let lhs = right_invariant_apply(&o, &v.axpy(s, &w)).unwrap();
            let rhs = right_invariant_apply(&o, &v).unwrap()
                .axpy(s, &right_invariant_apply(&o, &w).unwrap());
            prop_assert!(close(&lhs, &rhs));
        }

        #[test]
        fn left_apply_stays_in_band(o in op_strategy(), v in vec_strategy()) {
            let out = left_invariant_apply(&o, &v).unwrap();
            for (s, _) in &out {
                let near = v.keys().any(|t| t.upper == s.upper && t.lower.band_distance(&s.lower) <= o.band());
                prop_assert!(near);
            }
        }
    }
}
