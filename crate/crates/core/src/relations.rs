//! Induced relations on the row module `M_o`.
//!
//! An element `z ∈ T(F_a)` is a relation for the lowering realization `x_0`
//! when `ε_F ∘ π_{x_0}(w)(z) = 0` for every word `w`. Since the lowerings
//! commute, sorted monomial words `d_1^{n_1} ⋯ d_p^{n_p}` suffice; words
//! longer than the total degree of `z` pair to zero, so a finite cap certifies
//! membership.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coalgebra::{left_invariant_apply, BandedOperator, BasisSymbol, FaVector};
use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::multiindex::MultiIndex;
use crate::tensor::{counit_t, Realization, TensorElement, TensorWord};
use crate::C64;

/// Values at or below this magnitude count as zero.
pub const RELATION_TOL: f64 = 1e-12;

/// A candidate relation together with the word-length cap used to certify it.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationWitness {
    element: TensorElement,
    max_word_len: usize,
}

impl RelationWitness {
    /// Rejects elements with a factor outside `M_o`.
    pub fn new(element: TensorElement, max_word_len: usize) -> Result<Self> {
        for w in element.keys() {
            if let Some(s) = w.factors().iter().find(|s| !s.upper.is_zero()) {
                return Err(Error::NotInModule(format!("{s:?}")));
            }
        }
        Ok(RelationWitness { element, max_word_len })
    }

    /// `f_α^o ⊗ f_β^o − f_{α+β}^o` at the cap `deg α + deg β + 2`.
    pub fn module_relation(alpha: &MultiIndex, beta: &MultiIndex) -> Result<Self> {
        let cap = (alpha.degree() + beta.degree() + 2) as usize;
        Self::new(module_relation(alpha, beta)?, cap)
    }

    pub fn element(&self) -> &TensorElement {
        &self.element
    }

    pub fn max_word_len(&self) -> usize {
        self.max_word_len
    }

    fn dim(&self) -> Option<usize> {
        self.element.keys().find_map(TensorWord::dim)
    }
}

/// `f_α^o ⊗ f_β^o − f_{α+β}^o`.
pub fn module_relation(alpha: &MultiIndex, beta: &MultiIndex) -> Result<TensorElement> {
    let sum = alpha.add(beta)?;
    let pair = TensorWord::new(vec![BasisSymbol::row(alpha.clone()), BasisSymbol::row(beta.clone())])?;
    let single = TensorWord::new(vec![BasisSymbol::row(sum)])?;
    Ok(TensorElement::from_terms([(pair, C64::new(1.0, 0.0)), (single, C64::new(-1.0, 0.0))]))
}

/// Which words to pair against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordSet {
    /// Sorted words only; enough when the generators commute.
    Monomial,
    /// Every word over the generators.
    All,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub ok: bool,
    pub max_deviation: f64,
    /// Generator indices of the word with the largest deviation, first letter
    /// outermost; `None` when nothing deviates.
    pub worst_word: Option<Vec<usize>>,
    pub words_checked: usize,
}

/// Renders a word such as `[1, 1, 2]` as `d1 d1 d2`; the empty word as `1`.
pub fn format_word(w: &[usize]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|i| format!("d{i}")).collect::<Vec<_>>().join(" ")
}

/// Checks against the lowering realization with sorted monomial words.
pub fn check_relation(z: &RelationWitness) -> Result<RelationReport> {
    match z.dim() {
        None => check_relation_with(&Realization::lowering(1), z, WordSet::Monomial),
        Some(p) => check_relation_with(&Realization::lowering(p), z, WordSet::Monomial),
    }
}

/// `max_w |ε_F ∘ π_x(w)(z)|` over words up to the witness cap.
pub fn check_relation_with(x: &Realization, z: &RelationWitness, words: WordSet) -> Result<RelationReport> {
    let mut report = RelationReport {
        ok: true,
        max_deviation: 0.0,
        worst_word: None,
        words_checked: 0,
    };
    let mut word = Vec::new();
    let top = x.primitives();
    walk(x, &z.element, z.max_word_len, top, words, &mut word, &mut report)?;
    report.ok = report.max_deviation <= RELATION_TOL;
    Ok(report)
}

/// Depth-first over words, built from the innermost letter outwards so each
/// prefix application is shared. `word` holds letters innermost first.
fn walk(
    x: &Realization,
    state: &TensorElement,
    budget: usize,
    max_letter: usize,
    words: WordSet,
    word: &mut Vec<usize>,
    report: &mut RelationReport,
) -> Result<()> {
    report.words_checked += 1;
    let dev = counit_t(state).norm();
    if dev > report.max_deviation {
        report.max_deviation = dev;
        report.worst_word = Some(word.iter().rev().copied().collect());
    }
    if budget == 0 || state.is_empty() {
        return Ok(());
    }
    let hi = match words {
        WordSet::Monomial => max_letter,
        WordSet::All => x.primitives(),
    };
    for l in 1..=hi {
        let next = x.extend_apply(l, state)?;
        word.push(l);
        walk(x, &next, budget - 1, l, words, word, report)?;
        word.pop();
    }
    Ok(())
}

/// All sorted words `d_1^{n_1} ⋯ d_p^{n_p}` with `Σ n_i ≤ max_len`, as
/// generator index lists.
pub fn monomial_words(p: usize, max_len: usize) -> Vec<Vec<usize>> {
    MultiIndex::all_up_to_degree(p, max_len as u32)
        .into_iter()
        .map(|n| {
            n.entries()
                .iter()
                .enumerate()
                .flat_map(|(i, &e)| std::iter::repeat_n(i + 1, e as usize))
                .collect()
        })
        .collect()
}

/// `x(l_i) f_o^o = 0` and `x(l_i) f_{j(1)}^o = δ(i,j) f_o^o` for all `i, j`.
pub fn generator_conditions(x: &Realization) -> Result<bool> {
    let p = x.dim();
    if x.primitives() != p {
        return Ok(false);
    }
    let o = MultiIndex::zero(p);
    let fo = FaVector::single(BasisSymbol::row(o.clone()));
    for i in 1..=p {
        let op = x.generator(i)?;
        if left_invariant_apply(op.as_ref(), &fo)?.max_abs() > RELATION_TOL {
            return Ok(false);
        }
        for j in 1..=p {
            let fj = FaVector::single(BasisSymbol::row(MultiIndex::unit(p, j)?));
            let got = left_invariant_apply(op.as_ref(), &fj)?;
            let want = if i == j { fo.clone() } else { FaVector::new() };
            if got.sub(&want).max_abs() > RELATION_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff `alternative` meets the generator conditions and every module
/// relation with `deg α, deg β ≤ 3` passes against all words up to its cap.
/// Used to confirm that perturbations of the lowering realization fail.
pub fn uniqueness_probe(alternative: &Realization) -> Result<bool> {
    if !generator_conditions(alternative)? {
        return Ok(false);
    }
    let p = alternative.dim();
    let indices = MultiIndex::all_up_to_degree(p, 3);
    for a in &indices {
        for b in &indices {
            let z = RelationWitness::module_relation(a, b)?;
            if !check_relation_with(alternative, &z, WordSet::All)?.ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff every generator image maps `F_q` into itself under the left
/// action, for each `q` listed.
pub fn invariance_check(x: &Realization, q_list: &[u32]) -> Result<bool> {
    let p = x.dim();
    for i in 1..=x.primitives() {
        let op: &Arc<dyn BandedOperator> = x.generator(i)?;
        for &q in q_list {
            for n in MultiIndex::all_in_box(p, q) {
                if op
                    .row(&n)
                    .iter()
                    .any(|(k, c)| k.sup_norm() > q && c.norm() > 0.0)
                {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `ε_F(d^n f_α^o)` with `d^n = d_1^{n_1} ⋯ d_p^{n_p}`, in exact integer
/// arithmetic.
pub fn counit_of_lowering_power(n: &MultiIndex, alpha: &MultiIndex) -> Result<u128> {
    if n.dim() != alpha.dim() {
        return Err(Error::DimensionMismatch { expected: alpha.dim(), found: n.dim() });
    }
    let mut c: u128 = 1;
    for (&ni, &ai) in n.entries().iter().zip(alpha.entries()) {
        let mut a = ai;
        for _ in 0..ni {
            if a == 0 {
                return Ok(0);
            }
            c *= u128::from(a);
            a -= 1;
        }
        if a != 0 {
            return Ok(0);
        }
    }
    Ok(c)
}

/// The module map `T(M_o) → M_o`, `f_{n_1}^o ⊗ ⋯ ⊗ f_{n_r}^o ↦ f_{n_1+⋯+n_r}^o`
/// and `1 ↦ f_o^o`.
pub fn reduce_to_module(e: &TensorElement, p: usize) -> Result<FaVector> {
    let mut out = FaVector::with_prune_eps(e.prune_eps());
    for (w, c) in e {
        let mut n = MultiIndex::zero(p);
        for s in w.factors() {
            if !s.upper.is_zero() {
                return Err(Error::NotInModule(format!("{s:?}")));
            }
            n = n.add(&s.lower)?;
        }
        out.add_term(BasisSymbol::row(n), *c);
    }
    out.prune();
    Ok(out)
}

/// `max_i ‖reduce(X_A(l_i)(f_α ⊗ f_β − f_{α+β}))‖_∞`; zero when `x_A`
/// preserves the module relations.
pub fn relation_preservation_defect(a: &VectorField, alpha: &MultiIndex, beta: &MultiIndex) -> Result<f64> {
    let z = module_relation(alpha, beta)?;
    let x = a.realization();
    let mut worst = 0.0f64;
    for i in 1..=a.p() {
        let image = x.extend_apply(i, &z)?;
        worst = worst.max(reduce_to_module(&image, a.p())?.max_abs());
    }
    Ok(worst)
}

/// Summary behind `check relations`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationsSummary {
    pub p: usize,
    pub maxdeg: u32,
    pub pairs_checked: usize,
    pub all_relations_ok: bool,
    pub max_deviation: f64,
    pub false_witness: RelationReport,
    pub false_witness_word: String,
    pub counit_identity_ok: bool,
    pub invariance_ok: bool,
}

impl RelationsSummary {
    pub fn passed(&self) -> bool {
        self.all_relations_ok && !self.false_witness.ok && self.counit_identity_ok && self.invariance_ok
    }
}

/// Checks every module relation with `deg α, deg β ≤ maxdeg`, rejects the
/// false witness `f_1 ⊗ f_1 − f_1`, verifies `ε(d^n f_α) = δ(n,α) α!` for
/// `|α|, |n| ≤ maxdeg + 2`, and the invariance of `F_q` for `q ≤ maxdeg`.
pub fn relations_summary(p: usize, maxdeg: u32) -> Result<RelationsSummary> {
    if p == 0 {
        return Err(Error::EmptyIndex);
    }
    let indices = MultiIndex::all_up_to_degree(p, maxdeg);
    let mut pairs = 0;
    let mut all_ok = true;
    let mut max_dev = 0.0f64;
    for a in &indices {
        for b in &indices {
            let r = check_relation(&RelationWitness::module_relation(a, b)?)?;
            pairs += 1;
            all_ok &= r.ok;
            max_dev = max_dev.max(r.max_deviation);
        }
    }

    let e1 = MultiIndex::unit(p, 1)?;
    let f1 = BasisSymbol::row(e1.clone());
    let witness = TensorElement::from_terms([
        (TensorWord::new(vec![f1.clone(), f1.clone()])?, C64::new(1.0, 0.0)),
        (TensorWord::new(vec![f1])?, C64::new(-1.0, 0.0)),
    ]);
    let false_witness = check_relation(&RelationWitness::new(witness, 4)?)?;
    let false_witness_word = false_witness.worst_word.as_deref().map(format_word).unwrap_or_default();

    let mut counit_ok = true;
    let big = MultiIndex::all_up_to_degree(p, maxdeg + 2);
    for n in &big {
        for a in &big {
            let want = if n == a { a.factorial() } else { 0 };
            counit_ok &= counit_of_lowering_power(n, a)? == want;
        }
    }

    let qs: Vec<u32> = (0..=maxdeg).collect();
    let invariance_ok = invariance_check(&Realization::lowering(p), &qs)?;

    Ok(RelationsSummary {
        p,
        maxdeg,
        pairs_checked: pairs,
        all_relations_ok: all_ok,
        max_deviation: max_dev,
        false_witness,
        false_witness_word,
        counit_identity_ok: counit_ok,
        invariance_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::{Lowering, OperatorSum, RegularOperator};
    use crate::multiindex::mi;
    use crate::tensor;
    use rand::{Rng, SeedableRng};

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn false_witness() -> TensorElement {
        let f1 = BasisSymbol::row(mi(&[1]));
        TensorElement::from_terms([
            (TensorWord::new(vec![f1.clone(), f1.clone()]).unwrap(), re(1.0)),
            (TensorWord::new(vec![f1]).unwrap(), re(-1.0)),
        ])
    }

    #[test]
    fn module_relation_passes() {
        let z = RelationWitness::new(module_relation(&mi(&[2]), &mi(&[1])).unwrap(), 5).unwrap();
        let r = check_relation(&z).unwrap();
        assert!(r.ok, "{r:?}");
    }

    #[test]
    fn false_relation_is_rejected_at_d_squared() {
        let r = check_relation(&RelationWitness::new(false_witness(), 5).unwrap()).unwrap();
        assert!(!r.ok);
        assert_eq!(r.max_deviation, 2.0);
        assert_eq!(r.worst_word, Some(vec![1, 1]));
        assert_eq!(format_word(r.worst_word.as_deref().unwrap()), "d1 d1");
    }

    #[test]
    fn zero_witness_is_ok() {
        let r = check_relation(&RelationWitness::new(TensorElement::new(), 5).unwrap()).unwrap();
        assert!(r.ok);
        assert_eq!(r.max_deviation, 0.0);
    }

    #[test]
    fn witness_outside_module_is_refused() {
        let s = BasisSymbol::new(mi(&[1]), mi(&[1])).unwrap();
        let e = tensor::from_fa(&FaVector::single(s));
        assert!(matches!(RelationWitness::new(e, 3), Err(Error::NotInModule(_))));
    }

    #[test]
    fn all_small_relations_pass() {
        for p in 1..=2 {
            for a in MultiIndex::all_up_to_degree(p, 4) {
                for b in MultiIndex::all_up_to_degree(p, 4) {
                    let r = check_relation(&RelationWitness::module_relation(&a, &b).unwrap()).unwrap();
                    assert!(r.ok, "{a} {b}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn monomial_words_match_sorted_enumeration() {
        let w = monomial_words(2, 2);
        assert_eq!(w.len(), 6);
        assert!(w.contains(&vec![]) && w.contains(&vec![1, 2]) && w.contains(&vec![2, 2]));
        assert!(w.iter().all(|x| x.windows(2).all(|p| p[0] <= p[1])));
        // the walk visits exactly these words
        let z = RelationWitness::module_relation(&mi(&[1, 1]), &mi(&[1, 1])).unwrap();
        let r = check_relation_with(&Realization::lowering(2), &RelationWitness::new(z.element().clone(), 2).unwrap(), WordSet::Monomial)
            .unwrap();
        assert_eq!(r.words_checked, w.len());
    }

    #[test]
    fn counit_identity_exact() {
        for p in 1..=2 {
            let all = MultiIndex::all_up_to_degree(p, 6);
            for n in &all {
                for a in &all {
                    let want = if n == a { a.factorial() } else { 0 };
                    assert_eq!(counit_of_lowering_power(n, a).unwrap(), want, "{n} {a}");
                }
            }
        }
        // agrees with the floating point realization
        let x = Realization::lowering(2);
        let a = mi(&[2, 3]);
        let f = tensor::from_fa(&FaVector::single(BasisSymbol::row(a.clone())));
        let v = x.apply_word(&[1, 1, 2, 2, 2], &f).unwrap();
        assert_eq!(tensor::counit_t(&v), re(12.0));
    }

    fn arc(op: impl BandedOperator + 'static) -> Arc<dyn BandedOperator> {
        Arc::new(op)
    }

    #[test]
    fn uniqueness_probe_accepts_lowering_only() {
        assert!(uniqueness_probe(&Realization::lowering(1)).unwrap());
        assert!(uniqueness_probe(&Realization::lowering(2)).unwrap());

        let eps = 1e-3;
        let mut bump = RegularOperator::new(1, 0);
        bump.insert(mi(&[2]), mi(&[2]), re(1.0)).unwrap();
        let perturbed = OperatorSum::new(1)
            .plus(re(1.0), arc(Lowering::new(1, 1).unwrap()))
            .unwrap()
            .plus(re(eps), arc(bump))
            .unwrap();
        let alt = Realization::new(1, vec![arc(perturbed)]).unwrap();
        assert!(generator_conditions(&alt).unwrap());
        assert!(!uniqueness_probe(&alt).unwrap());
        // the violation: f_1 ⊗ f_1 − f_2 at word d³ deviates by 2ε
        let z = RelationWitness::module_relation(&mi(&[1]), &mi(&[1])).unwrap();
        let r = check_relation_with(&alt, &z, WordSet::All).unwrap();
        assert!((r.max_deviation - 2.0 * eps).abs() < 1e-12, "{r:?}");
        assert_eq!(r.worst_word, Some(vec![1, 1, 1]));

        let doubled = OperatorSum::new(1).plus(re(2.0), arc(Lowering::new(1, 1).unwrap())).unwrap();
        let alt = Realization::new(1, vec![arc(doubled)]).unwrap();
        assert!(!generator_conditions(&alt).unwrap());
        assert!(!uniqueness_probe(&alt).unwrap());
    }

    #[test]
    fn invariance_examples() {
        assert!(invariance_check(&Realization::lowering(2), &[0, 1, 2, 5]).unwrap());
        let sq = VectorField::scalar_poly(&[0.0, 0.0, 1.0]).realization();
        assert!(!invariance_check(&sq, &[3]).unwrap());
        assert!(invariance_check(&Realization::new(2, vec![]).unwrap(), &[3]).unwrap());
    }

    #[test]
    fn reduce_examples() {
        let z = module_relation(&mi(&[1, 2]), &mi(&[0, 1])).unwrap();
        assert!(reduce_to_module(&z, 2).unwrap().is_empty());
        let one = reduce_to_module(&tensor::unit(), 3).unwrap();
        assert_eq!(one, FaVector::single(BasisSymbol::row(MultiIndex::zero(3))));
    }

    #[test]
    fn vector_fields_preserve_relations() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let p = rng.random_range(1..=2);
            let mut a = VectorField::zero(p).unwrap();
            for i in 1..=p {
                for _ in 0..3 {
                    let m: Vec<u32> = (0..p).map(|_| rng.random_range(0..=3)).collect();
                    let c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    a.add_coeff(i, MultiIndex::new(m).unwrap(), c).unwrap();
                }
            }
            let al: Vec<u32> = (0..p).map(|_| rng.random_range(0..=3)).collect();
            let be: Vec<u32> = (0..p).map(|_| rng.random_range(0..=3)).collect();
            let d = relation_preservation_defect(&a, &MultiIndex::new(al).unwrap(), &MultiIndex::new(be).unwrap())
                .unwrap();
            assert!(d <= 1e-12, "{d}");
        }
    }

    #[test]
    fn summary_for_small_sizes() {
        let s = relations_summary(2, 2).unwrap();
        assert!(s.passed(), "{s:?}");
        assert_eq!(s.pairs_checked, 36);
        assert_eq!(s.false_witness_word, "d1 d1");
    }
}
