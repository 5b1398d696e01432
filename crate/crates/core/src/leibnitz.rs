//! The Leibnitz coalgebra `L_0 = span(l_0, l_1, …, l_p)` with `l_0` grouplike
//! and every `l_i` (`i ≥ 1`) primitive:
//!
//! ```text
//! Δ l_0 = l_0 ⊗ l_0          ε(l_0) = 1
//! Δ l_i = l_0 ⊗ l_i + l_i ⊗ l_0   ε(l_i) = 0
//! ```
//!
//! It is the dual of an algebra with unit `k_0` and `k_i · k_j = 0`; that
//! algebra is not reified here. Words over several tagged copies `L_A` model
//! the direct sum `⊕_A L_A`, with the grouplike `l_0` shared between copies.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

fn check_generator(p: usize, g: usize) -> Result<()> {
    if g > p {
        return Err(Error::IndexOutOfRange { index: g, lo: 0, hi: p });
    }
    Ok(())
}

/// `Δ(l_g)` as a list of tensor pairs, each with coefficient one.
pub fn coproduct(p: usize, g: usize) -> Result<Vec<(usize, usize)>> {
    check_generator(p, g)?;
    Ok(if g == 0 {
        vec![(0, 0)]
    } else {
        vec![(0, g), (g, 0)]
    })
}

pub fn counit(p: usize, g: usize) -> Result<C64> {
    check_generator(p, g)?;
    Ok(if g == 0 {
        C64::new(1.0, 0.0)
    } else {
        C64::new(0.0, 0.0)
    })
}

/// The iterated coproduct of `l_g` into `slots` tensor factors.
///
/// For `slots = 0` this is the counit: one empty term when `g = 0`, none
/// otherwise. For a primitive it places `l_g` in one slot and `l_0` in all
/// others.
pub fn iterated_coproduct(p: usize, g: usize, slots: usize) -> Result<Vec<Vec<usize>>> {
    check_generator(p, g)?;
    if slots == 0 {
        return Ok(if g == 0 { vec![Vec::new()] } else { Vec::new() });
    }
    if g == 0 {
        return Ok(vec![vec![0; slots]]);
    }
    Ok((0..slots)
        .map(|j| {
            let mut t = vec![0; slots];
            t[j] = g;
            t
        })
        .collect())
}

/// An element of `L_0` in the basis `(l_0, …, l_p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeibnitzElem {
    coeffs: Vec<C64>,
}

impl LeibnitzElem {
    pub fn zero(p: usize) -> Self {
        LeibnitzElem {
            coeffs: vec![C64::new(0.0, 0.0); p + 1],
        }
    }

    pub fn generator(p: usize, g: usize) -> Result<Self> {
        check_generator(p, g)?;
        let mut e = Self::zero(p);
        e.coeffs[g] = C64::new(1.0, 0.0);
        Ok(e)
    }

    pub fn from_coeffs(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyIndex);
        }
        Ok(LeibnitzElem { coeffs })
    }

    pub fn p(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn counit(&self) -> C64 {
        self.coeffs[0]
    }

    /// `Δ` extended linearly, as a map from basis pairs to coefficients.
    pub fn coproduct(&self) -> BTreeMap<(usize, usize), C64> {
        let p = self.p();
        let mut out = BTreeMap::new();
        for (g, c) in self.coeffs.iter().enumerate() {
            if *c == C64::new(0.0, 0.0) {
                continue;
            }
            for pair in coproduct(p, g).expect("index in range") {
                *out.entry(pair).or_insert(C64::new(0.0, 0.0)) += c;
            }
        }
        out.retain(|_, c| *c != C64::new(0.0, 0.0));
        out
    }
}

/// One letter of a word in `T(⊕_A L_A)`: the summand tag and the generator
/// index. The grouplike `l_0` carries no tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(String, usize)", into = "(String, usize)")]
pub struct Letter {
    tag: String,
    index: usize,
}

impl Letter {
    pub fn new(tag: impl Into<String>, index: usize) -> Self {
        let tag = if index == 0 { String::new() } else { tag.into() };
        Letter { tag, index }
    }

    pub fn unit() -> Self {
        Letter::new("", 0)
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn is_grouplike(&self) -> bool {
        self.index == 0
    }
}

impl From<(String, usize)> for Letter {
    fn from((tag, index): (String, usize)) -> Self {
        Letter::new(tag, index)
    }
}

impl From<Letter> for (String, usize) {
    fn from(l: Letter) -> Self {
        (l.tag, l.index)
    }
}

/// A word in the tensor algebra over one or several Leibnitz summands. The
/// empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GeneratorWord {
    letters: Vec<Letter>,
}

impl GeneratorWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        GeneratorWord { letters }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `l_i^n` in a single summand.
    pub fn power(tag: &str, i: usize, n: usize) -> Self {
        GeneratorWord {
            letters: vec![Letter::new(tag, i); n],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &GeneratorWord) -> GeneratorWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        GeneratorWord { letters }
    }

    /// The anti-automorphism `τ` reversing letter order.
    pub fn reversed(&self) -> GeneratorWord {
        GeneratorWord {
            letters: self.letters.iter().rev().cloned().collect(),
        }
    }

    /// Counit extended multiplicatively: 1 iff every letter is `l_0`.
    pub fn counit(&self) -> C64 {
        if self.letters.iter().all(Letter::is_grouplike) {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }

    /// Drops `l_0` letters. Under any realization `l_0` acts as the identity,
    /// so this is the image of the word in the realized algebra.
    pub fn strip_grouplike(&self) -> GeneratorWord {
        GeneratorWord {
            letters: self
                .letters
                .iter()
                .filter(|l| !l.is_grouplike())
                .cloned()
                .collect(),
        }
    }

    /// `Δ` extended as an algebra morphism `T(L) → T(L) ⊗ T(L)`.
    ///
    /// Each primitive letter goes either left or right with `l_0` in the other
    /// slot, so the result has `2^(#primitives)` terms before collection.
    pub fn coproduct(&self) -> BTreeMap<(GeneratorWord, GeneratorWord), u64> {
        let mut acc: BTreeMap<(GeneratorWord, GeneratorWord), u64> = BTreeMap::new();
        acc.insert((GeneratorWord::empty(), GeneratorWord::empty()), 1);
        for letter in &self.letters {
            let mut next = BTreeMap::new();
            for ((a, b), c) in acc {
                let splits: Vec<(Letter, Letter)> = if letter.is_grouplike() {
                    vec![(Letter::unit(), Letter::unit())]
                } else {
                    vec![(Letter::unit(), letter.clone()), (letter.clone(), Letter::unit())]
                };
                for (x, y) in splits {
                    let mut a2 = a.clone();
                    a2.letters.push(x);
                    let mut b2 = b.clone();
                    b2.letters.push(y);
                    *next.entry((a2, b2)).or_insert(0) += c;
                }
            }
            acc = next;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
    }

    #[test]
    fn coproduct_examples() {
        assert_eq!(coproduct(2, 0).unwrap(), vec![(0, 0)]);
        assert_eq!(coproduct(2, 1).unwrap(), vec![(0, 1), (1, 0)]);
        assert!(coproduct(2, 3).is_err());
        assert_eq!(counit(2, 0).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(counit(2, 2).unwrap(), C64::new(0.0, 0.0));
        assert!(counit(1, 2).is_err());
    }

    /// Brute-force `(Δ ⊗ id) ∘ Δ` expansion as an oracle for the iterated
    /// coproduct.
    fn expand(p: usize, g: usize, slots: usize) -> BTreeMap<Vec<usize>, u64> {
        let mut acc: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        acc.insert(vec![g], 1);
        for _ in 1..slots {
            let mut next = BTreeMap::new();
            for (t, c) in acc {
                for (a, b) in coproduct(p, t[0]).unwrap() {
                    let mut t2 = vec![a, b];
                    t2.extend_from_slice(&t[1..]);
                    *next.entry(t2).or_insert(0) += c;
                }
            }
            acc = next;
        }
        acc
    }

    #[test]
    fn iterated_coproduct_matches_expansion() {
        for p in 1..=3 {
            for g in 0..=p {
                for slots in 1..=5 {
                    let mut direct: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
                    for t in iterated_coproduct(p, g, slots).unwrap() {
                        *direct.entry(t).or_insert(0) += 1;
                    }
                    assert_eq!(direct, expand(p, g, slots), "p={p} g={g} slots={slots}");
                }
            }
        }
        let three = iterated_coproduct(1, 1, 3).unwrap();
        assert_eq!(three, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(iterated_coproduct(1, 0, 0).unwrap(), vec![Vec::<usize>::new()]);
        assert!(iterated_coproduct(1, 1, 0).unwrap().is_empty());
    }

    #[test]
    fn coassociative_and_counital() {
        for p in 1..=3 {
            for g in 0..=p {
                // (Δ⊗id)Δ vs (id⊗Δ)Δ
                let mut left: BTreeMap<(usize, usize, usize), u32> = BTreeMap::new();
                let mut right = BTreeMap::new();
                for (a, b) in coproduct(p, g).unwrap() {
                    for (a1, a2) in coproduct(p, a).unwrap() {
                        *left.entry((a1, a2, b)).or_insert(0) += 1;
                    }
                    for (b1, b2) in coproduct(p, b).unwrap() {
                        *right.entry((a, b1, b2)).or_insert(0) += 1;
                    }
                }
                assert_eq!(left, right);
                // (ε⊗id)Δ = id = (id⊗ε)Δ
                let elem = LeibnitzElem::generator(p, g).unwrap();
                let mut l = LeibnitzElem::zero(p);
                let mut r = LeibnitzElem::zero(p);
                for ((a, b), c) in elem.coproduct() {
                    l.coeffs[b] += counit(p, a).unwrap() * c;
                    r.coeffs[a] += counit(p, b).unwrap() * c;
                }
                assert_eq!(l, elem);
                assert_eq!(r, elem);
            }
        }
    }

    #[test]
    fn word_counit() {
        let w = GeneratorWord::new(vec![Letter::new("A", 1), Letter::unit()]);
        assert_eq!(w.counit(), C64::new(0.0, 0.0));
        assert_eq!(GeneratorWord::empty().counit(), C64::new(1.0, 0.0));
        assert_eq!(GeneratorWord::power("A", 0, 3).counit(), C64::new(1.0, 0.0));
    }

    #[test]
    fn binomial_coproduct_of_powers() {
        for n in 0..=6usize {
            let d = GeneratorWord::power("A", 1, n);
            let mut reduced: BTreeMap<(usize, usize), u64> = BTreeMap::new();
            for ((a, b), c) in d.coproduct() {
                let (a, b) = (a.strip_grouplike(), b.strip_grouplike());
                assert!(a.letters().iter().chain(b.letters()).all(|l| l.index() == 1));
                *reduced.entry((a.len(), b.len())).or_insert(0) += c;
            }
            let expected: BTreeMap<(usize, usize), u64> = (0..=n)
                .map(|k| ((k, n - k), binomial(n as u64, k as u64)))
                .collect();
            assert_eq!(reduced, expected, "n = {n}");
        }
    }

    #[test]
    fn grouplike_is_shared_across_summands() {
        assert_eq!(Letter::new("A", 0), Letter::new("B", 0));
        assert_ne!(Letter::new("A", 1), Letter::new("B", 1));
    }

    #[test]
    fn words_serialize_as_pairs() {
        let w = GeneratorWord::new(vec![Letter::new("A", 1), Letter::new("B", 2)]);
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"[["A",1],["B",2]]"#);
        assert_eq!(serde_json::from_str::<GeneratorWord>(&s).unwrap(), w);
        assert_eq!(w.reversed().letters()[0], Letter::new("B", 2));
    }
}
