//! Finitely supported analytic vector fields on `C^p` and their realization
//! as left-invariant banded operators.
//!
//! A field `A = (A^1, …, A^p)` with `A^i(z) = Σ_m a^i_m z^m` is realized by
//! `x_A(l_i)(f_n^o) = n_i Σ_m a^i_m f_{n+m−i(1)}^o`, i.e. the banded matrix
//! `Σ_n Σ_m n_i a^i_m E_n^{n+m−i(1)}`. The derivation `D_A = Σ_i X_A(l_i)` acts
//! on row-module symbols exactly like `Σ_i A^i ∂_i` acts on monomials.
//!
//! Infinite power series must be truncated by the caller; everything here is
//! exact for the finite support that is stored.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coalgebra::{BandedOperator, BasisSymbol, FaVector};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::tensor::{Realization, TensorElement};
use crate::C64;

#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    p: usize,
    components: Vec<BTreeMap<MultiIndex, C64>>,
}

impl VectorField {
    /// The zero field on `C^p`.
    pub fn zero(p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::EmptyIndex);
        }
        Ok(VectorField {
            p,
            components: vec![BTreeMap::new(); p],
        })
    }

    /// Builds a field from `(component i (1-based), monomial m, coefficient)`
    /// triples; repeated monomials accumulate.
    pub fn from_terms(
        p: usize,
        terms: impl IntoIterator<Item = (usize, MultiIndex, C64)>,
    ) -> Result<Self> {
        let mut a = Self::zero(p)?;
        for (i, m, c) in terms {
            a.add_coeff(i, m, c)?;
        }
        Ok(a)
    }

    /// One-dimensional field from dense real coefficients `c_0 + c_1 z + …`.
    pub fn scalar_poly(coeffs: &[f64]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(k, c)| (1, MultiIndex::new(vec![k as u32]).unwrap(), C64::new(*c, 0.0)));
        Self::from_terms(1, terms).expect("p = 1")
    }

    pub fn add_coeff(&mut self, i: usize, m: MultiIndex, c: C64) -> Result<()> {
        self.check_component(i)?;
        if m.dim() != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                found: m.dim(),
            });
        }
        let comp = &mut self.components[i - 1];
        let slot = comp.entry(m.clone()).or_insert(C64::new(0.0, 0.0));
        *slot += c;
        if *slot == C64::new(0.0, 0.0) {
            comp.remove(&m);
        }
        Ok(())
    }

    fn check_component(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.p {
            return Err(Error::IndexOutOfRange { index: i, lo: 1, hi: self.p });
        }
        Ok(())
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Coefficients `a^i_m` of component `i` (1-based).
    pub fn component(&self, i: usize) -> Result<&BTreeMap<MultiIndex, C64>> {
        self.check_component(i)?;
        Ok(&self.components[i - 1])
    }

    pub fn coeff(&self, i: usize, m: &MultiIndex) -> C64 {
        self.components
            .get(i.wrapping_sub(1))
            .and_then(|c| c.get(m))
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(BTreeMap::is_empty)
    }

    /// `m(A) = sup_i Σ_m |a^i_m|`.
    pub fn m_norm(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.values().map(|a| a.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Certified radius `1 / m(A)` of the exponential series, infinite for the
    /// zero field.
    pub fn radius(&self) -> f64 {
        let m = self.m_norm();
        if m == 0.0 {
            f64::INFINITY
        } else {
            1.0 / m
        }
    }

    /// Band width of the realizing operators: `max sup_j |(m − i(1))_j|`.
    pub fn band(&self) -> u32 {
        let mut c = 0;
        for (i, comp) in self.components.iter().enumerate() {
            for m in comp.keys() {
                for (j, &e) in m.entries().iter().enumerate() {
                    let d = if j == i { e.abs_diff(1) } else { e };
                    c = c.max(d);
                }
            }
        }
        c
    }

    /// Highest total degree of any supported monomial.
    pub fn max_degree(&self) -> u64 {
        self.components
            .iter()
            .flat_map(|c| c.keys().map(MultiIndex::degree))
            .max()
            .unwrap_or(0)
    }

    /// True when every supported monomial has degree ≤ 1.
    pub fn is_affine(&self) -> bool {
        self.max_degree() <= 1
    }

    fn check_point(&self, z: &[C64]) -> Result<()> {
        if z.len() != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                found: z.len(),
            });
        }
        Ok(())
    }

    /// `A^i(z)`.
    pub fn eval_component(&self, i: usize, z: &[C64]) -> Result<C64> {
        self.check_component(i)?;
        self.check_point(z)?;
        Ok(self.components[i - 1]
            .iter()
            .map(|(m, a)| {
                a * m
                    .entries()
                    .iter()
                    .zip(z)
                    .map(|(&e, zj)| zj.powu(e))
                    .product::<C64>()
            })
            .sum())
    }

    pub fn eval(&self, z: &[C64]) -> Result<Vec<C64>> {
        (1..=self.p).map(|i| self.eval_component(i, z)).collect()
    }

    /// `D_A(f_n^j) = Σ_i n_i Σ_m a^i_m f_{n+m−i(1)}^j`.
    pub fn apply_da(&self, s: &BasisSymbol) -> Result<FaVector> {
        self.apply_da_vec(&FaVector::single(s.clone()))
    }

    /// `D_A` extended linearly to `F_a`.
    pub fn apply_da_vec(&self, v: &FaVector) -> Result<FaVector> {
        let mut out = v.empty_like();
        for (s, c) in v {
            if s.dim() != self.p {
                return Err(Error::DimensionMismatch {
                    expected: self.p,
                    found: s.dim(),
                });
            }
            for (i, comp) in self.components.iter().enumerate() {
                let ni = s.lower.entries()[i];
                if ni == 0 {
                    continue;
                }
                let w = c * f64::from(ni);
                for (m, a) in comp {
                    if let Some(k) = s.lower.raise_lower(m, i) {
                        out.add_term(
                            BasisSymbol {
                                lower: k,
                                upper: s.upper.clone(),
                            },
                            w * a,
                        );
                    }
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// `D_A` as a derivation of `T(F_a)`: `Σ_i X_A(l_i)`.
    pub fn derivation_apply(&self, e: &TensorElement) -> Result<TensorElement> {
        let x = self.realization();
        let mut out = e.empty_like();
        for i in 1..=self.p {
            out = out.add(&x.extend_apply(i, e)?);
        }
        Ok(out)
    }

    /// The banded operator `x_A(l_i)` (1-based component).
    pub fn component_operator(&self, i: usize) -> Result<FieldComponentOperator> {
        self.check_component(i)?;
        Ok(FieldComponentOperator {
            p: self.p,
            slot: i - 1,
            band: self.band(),
            coeffs: self.components[i - 1].iter().map(|(m, a)| (m.clone(), *a)).collect(),
        })
    }

    /// `x_A: L_0 → Invg,r(F_a)` with `x_A(l_0) = id`.
    pub fn realization(&self) -> Realization {
        let gens = (1..=self.p)
            .map(|i| Arc::new(self.component_operator(i).unwrap()) as Arc<dyn BandedOperator>)
            .collect();
        Realization::new(self.p, gens).expect("dimensions agree")
    }

    /// `A_x(z) = A(z + x)`, recentred exactly by binomial expansion.
    pub fn shift(&self, x: &[C64]) -> Result<VectorField> {
        self.check_point(x)?;
        let max_e = self
            .components
            .iter()
            .flat_map(|c| c.keys().map(MultiIndex::sup_norm))
            .max()
            .unwrap_or(0) as usize;
        let binom = pascal(max_e);
        let mut out = VectorField::zero(self.p)?;
        for (i, comp) in self.components.iter().enumerate() {
            for (m, a) in comp {
                // Π_j (z_j + x_j)^{m_j} = Σ_{k ≤ m} Π_j C(m_j,k_j) x_j^{m_j−k_j} z_j^{k_j}
                let bounds: Vec<u32> = m.entries().to_vec();
                for k in box_below(&bounds) {
                    let mut c = *a;
                    for j in 0..self.p {
                        let (mj, kj) = (bounds[j] as usize, k[j] as usize);
                        c *= binom[mj][kj] as f64;
                        c *= x[j].powu((mj - kj) as u32);
                    }
                    if c != C64::new(0.0, 0.0) {
                        out.add_coeff(i + 1, MultiIndex::new(k).unwrap(), c)?;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Pascal's triangle up to row `n`, exact in `u128`.
fn pascal(n: usize) -> Vec<Vec<u128>> {
    let mut rows: Vec<Vec<u128>> = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let mut row = vec![1u128; r + 1];
        for k in 1..r {
            row[k] = rows[r - 1][k - 1] + rows[r - 1][k];
        }
        rows.push(row);
    }
    rows
}

/// All `k` with `0 ≤ k_j ≤ bounds_j`.
fn box_below(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(bounds.len())];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=b).map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    out
}

/// `x_A(l_i)` as a banded matrix with entries
/// `O[n, n+m−i(1)] = n_i a^i_m`.
#[derive(Clone, Debug)]
pub struct FieldComponentOperator {
    p: usize,
    slot: usize,
    band: u32,
    coeffs: Vec<(MultiIndex, C64)>,
}

impl BandedOperator for FieldComponentOperator {
    fn dim(&self) -> usize {
        self.p
    }

    fn band(&self) -> u32 {
        self.band
    }

    fn row(&self, n: &MultiIndex) -> Vec<(MultiIndex, C64)> {
        let ni = n.entries()[self.slot];
        if ni == 0 {
            return Vec::new();
        }
        let mut acc: BTreeMap<MultiIndex, C64> = BTreeMap::new();
        for (m, a) in &self.coeffs {
            if let Some(k) = n.raise_lower(m, self.slot) {
                *acc.entry(k).or_insert(C64::new(0.0, 0.0)) += a * f64::from(ni);
            }
        }
        acc.into_iter().collect()
    }

    fn column(&self, k: &MultiIndex) -> Vec<(MultiIndex, C64)> {
        let mut acc: BTreeMap<MultiIndex, C64> = BTreeMap::new();
        for (m, a) in &self.coeffs {
            if let Some(n) = k.lower_raise(m, self.slot) {
                let ni = n.entries()[self.slot];
                if ni > 0 {
                    *acc.entry(n).or_insert(C64::new(0.0, 0.0)) += a * f64::from(ni);
                }
            }
        }
        acc.into_iter().collect()
    }
}

#[derive(Serialize, Deserialize)]
struct MonomialTerm {
    m: MultiIndex,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct FieldFile {
    p: usize,
    components: Vec<Vec<MonomialTerm>>,
}

impl Serialize for VectorField {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FieldFile {
            p: self.p,
            components: self
                .components
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|(m, a)| MonomialTerm {
                            m: m.clone(),
                            re: a.re,
                            im: a.im,
                        })
                        .collect()
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VectorField {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let file = FieldFile::deserialize(deserializer)?;
        if file.components.len() != file.p {
            return Err(D::Error::custom(format!(
                "field declares p = {} but has {} components",
                file.p,
                file.components.len()
            )));
        }
        let mut a = VectorField::zero(file.p).map_err(D::Error::custom)?;
        for (i, comp) in file.components.into_iter().enumerate() {
            for t in comp {
                a.add_coeff(i + 1, t.m, C64::new(t.re, t.im))
                    .map_err(D::Error::custom)?;
            }
        }
        Ok(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::left_invariant_apply;
    use crate::multiindex::mi;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn rotation() -> VectorField {
        VectorField::from_terms(2, [(1, mi(&[0, 1]), re(1.0)), (2, mi(&[1, 0]), re(-1.0))]).unwrap()
    }

    #[test]
    fn m_norm_examples() {
        assert_eq!(VectorField::scalar_poly(&[0.0, 0.0, 1.0]).m_norm(), 1.0);
        assert_eq!(VectorField::scalar_poly(&[0.0, 3.0, 0.0, -2.0]).m_norm(), 5.0);
        assert_eq!(rotation().m_norm(), 1.0);
        assert_eq!(VectorField::zero(2).unwrap().radius(), f64::INFINITY);
    }

    #[test]
    fn apply_da_examples() {
        let a = VectorField::scalar_poly(&[0.0, 0.0, 1.0]);
        let s = BasisSymbol::new(mi(&[1]), mi(&[0])).unwrap();
        assert_eq!(
            a.apply_da(&s).unwrap(),
            FaVector::single(BasisSymbol::new(mi(&[2]), mi(&[0])).unwrap())
        );
        let s0 = BasisSymbol::new(mi(&[0]), mi(&[5])).unwrap();
        assert!(a.apply_da(&s0).unwrap().is_empty());
        let r = rotation();
        let out = r.apply_da(&BasisSymbol::row(mi(&[1, 0]))).unwrap();
        assert_eq!(out, FaVector::single(BasisSymbol::row(mi(&[0, 1]))));
    }

    #[test]
    fn apply_da_matches_matrix_form() {
        // D_A on symbols equals Σ_i left action of the E_n^{n+m−i(1)} matrices.
        let a = VectorField::from_terms(
            2,
            [
                (1, mi(&[0, 2]), C64::new(0.5, 1.0)),
                (1, mi(&[1, 0]), re(-2.0)),
                (2, mi(&[0, 0]), re(3.0)),
                (2, mi(&[2, 1]), re(0.25)),
            ],
        )
        .unwrap();
        for n in MultiIndex::all_in_box(2, 3) {
            let v = FaVector::single(BasisSymbol::new(n.clone(), mi(&[1, 2])).unwrap());
            let mut via_ops = FaVector::new();
            for i in 1..=2 {
                via_ops = via_ops.add(&left_invariant_apply(&a.component_operator(i).unwrap(), &v).unwrap());
            }
            assert_eq!(a.apply_da_vec(&v).unwrap(), via_ops, "n = {n}");
        }
    }

    #[test]
    fn row_and_column_agree() {
        let a = VectorField::from_terms(
            2,
            [(1, mi(&[0, 2]), re(1.5)), (1, mi(&[2, 0]), re(-1.0)), (2, mi(&[1, 1]), re(2.0))],
        )
        .unwrap();
        for i in 1..=2 {
            let op = a.component_operator(i).unwrap();
            for n in MultiIndex::all_in_box(2, 4) {
                for (k, c) in op.row(&n) {
                    assert!(n.band_distance(&k) <= op.band());
                    let back: C64 = op
                        .column(&k)
                        .into_iter()
                        .filter(|(r, _)| *r == n)
                        .map(|(_, v)| v)
                        .sum();
                    assert_eq!(back, c);
                }
            }
        }
    }

    #[test]
    fn shift_examples() {
        let a = VectorField::scalar_poly(&[0.0, 0.0, 1.0]);
        let s = a.shift(&[re(0.5)]).unwrap();
        assert_eq!(s, VectorField::scalar_poly(&[0.25, 1.0, 1.0]));
        assert_eq!(a.shift(&[re(0.0)]).unwrap(), a);
        let c = VectorField::from_terms(1, [(1, mi(&[0]), C64::new(2.0, -1.0))]).unwrap();
        assert_eq!(c.shift(&[C64::new(3.0, 4.0)]).unwrap(), c);
        assert!(a.shift(&[re(1.0), re(2.0)]).is_err());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(VectorField::scalar_poly(&[0.0, 0.0, 1.0]).eval_component(1, &[re(3.0)]).unwrap(), re(9.0));
        assert_eq!(rotation().eval_component(2, &[re(1.0), re(0.0)]).unwrap(), re(-1.0));
        assert_eq!(VectorField::scalar_poly(&[0.0, 3.0, 0.0, -2.0]).eval_component(1, &[re(1.0)]).unwrap(), re(1.0));
        assert!(rotation().eval_component(3, &[re(1.0), re(0.0)]).is_err());
    }

    #[test]
    fn band_of_fields() {
        assert_eq!(VectorField::scalar_poly(&[0.0, 0.0, 1.0]).band(), 1);
        assert_eq!(VectorField::scalar_poly(&[1.0]).band(), 1);
        assert_eq!(VectorField::scalar_poly(&[0.0, 1.0]).band(), 0);
        assert_eq!(rotation().band(), 1);
    }

    #[test]
    fn field_file_roundtrip() {
        let s = r#"{ "p": 2, "components": [ [ {"m":[0,1], "re":1.0, "im":0.0} ], [ {"m":[1,0], "re":-1.0, "im":0.0} ] ] }"#;
        let a: VectorField = serde_json::from_str(s).unwrap();
        assert_eq!(a, rotation());
        let back: VectorField = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);
        let bad = r#"{ "p": 2, "components": [ [ {"m":[0,1], "re":1.0, "im":0.0} ] ] }"#;
        assert!(serde_json::from_str::<VectorField>(bad).is_err());
    }

    fn random_field(rng: &mut impl Rng, p: usize) -> VectorField {
        let mut a = VectorField::zero(p).unwrap();
        for i in 1..=p {
            for _ in 0..rng.random_range(0..4) {
                let m: Vec<u32> = (0..p).map(|_| rng.random_range(0..=3)).collect();
                let c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                a.add_coeff(i, MultiIndex::new(m).unwrap(), c).unwrap();
            }
        }
        a
    }

    fn random_point(rng: &mut impl Rng, p: usize, r: f64) -> Vec<C64> {
        (0..p)
            .map(|_| C64::new(rng.random_range(-r..r), rng.random_range(-r..r)))
            .collect()
    }

    #[test]
    fn shift_evaluates_translated_field() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = rng.random_range(1..=2);
            let a = random_field(&mut rng, p);
            let x = random_point(&mut rng, p, 1.0);
            let ax = a.shift(&x).unwrap();
            for _ in 0..100 {
                let z = random_point(&mut rng, p, 1.0);
                let zx: Vec<C64> = z.iter().zip(&x).map(|(a, b)| a + b).collect();
                for i in 1..=p {
                    let lhs = ax.eval_component(i, &z).unwrap();
                    let rhs = a.eval_component(i, &zx).unwrap();
                    let scale = 1.0 + rhs.norm();
                    assert!((lhs - rhs).norm() <= 1e-12 * scale * 10.0, "{lhs} vs {rhs}");
                }
            }
            // m_norm of the shift matches a recomputation from its coefficients
            let direct = (1..=p)
                .map(|i| ax.component(i).unwrap().values().map(|c| c.norm()).sum::<f64>())
                .fold(0.0, f64::max);
            assert!(ax.m_norm().is_finite());
            assert_eq!(ax.m_norm(), direct);
        }
    }

    #[test]
    fn shift_composes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let p = rng.random_range(1..=2);
            let a = random_field(&mut rng, p);
            let x = random_point(&mut rng, p, 1.0);
            let y = random_point(&mut rng, p, 1.0);
            let xy: Vec<C64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            let lhs = a.shift(&x).unwrap().shift(&y).unwrap();
            let rhs = a.shift(&xy).unwrap();
            for i in 1..=p {
                let keys: std::collections::BTreeSet<_> = lhs
                    .component(i)
                    .unwrap()
                    .keys()
                    .chain(rhs.component(i).unwrap().keys())
                    .cloned()
                    .collect();
                for m in keys {
                    assert!((lhs.coeff(i, &m) - rhs.coeff(i, &m)).norm() <= 1e-12 * 50.0);
                }
            }
        }
    }

    #[test]
    fn affine_fields_preserve_degree_filtration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let p = rng.random_range(1..=3);
            let mut a = VectorField::zero(p).unwrap();
            for i in 1..=p {
                a.add_coeff(i, MultiIndex::zero(p), re(rng.random_range(-1.0..1.0))).unwrap();
                for j in 1..=p {
                    a.add_coeff(i, MultiIndex::unit(p, j).unwrap(), re(rng.random_range(-1.0..1.0)))
                        .unwrap();
                }
            }
            assert!(a.is_affine());
            for d in 0..=4u32 {
                for n in MultiIndex::all_up_to_degree(p, d) {
                    let out = a.apply_da(&BasisSymbol::row(n)).unwrap();
                    assert!(out.keys().all(|s| s.lower.degree() <= u64::from(d)));
                }
            }
        }
        // a quadratic field breaks it
        let q = VectorField::scalar_poly(&[0.0, 0.0, 1.0]);
        let out = q.apply_da(&BasisSymbol::row(mi(&[1]))).unwrap();
        assert!(out.keys().any(|s| s.lower.degree() > 1));
    }

    proptest! {
        #[test]
        fn apply_da_is_linear(c in -3i32..=3, n1 in 0u32..4, n2 in 0u32..4) {
            let a = rotation();
            let s1 = FaVector::single(BasisSymbol::row(mi(&[n1, n2])));
            let s2 = FaVector::single(BasisSymbol::row(mi(&[n2, n1 + 1])));
            let c = re(f64::from(c));
            let lhs = a.apply_da_vec(&s1.axpy(c, &s2)).unwrap();
            let rhs = a.apply_da_vec(&s1).unwrap().axpy(c, &a.apply_da_vec(&s2).unwrap());
            prop_assert!(lhs.sub(&rhs).max_abs() <= 1e-12);
        }
    }
}
