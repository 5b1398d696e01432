//! Finite elements of the tensor algebra `T(F_a)` and the extension of a
//! left-invariant realization of the Leibnitz coalgebra to operators on it.
//!
//! Given `x(l_i)` for the primitive generators (and `x(l_0) = id`), the
//! extension `X(l)` is the unique linear map with `X(l)(1) = ε(l)·1`,
//! `X(l)(f) = x(l)(f)` and `X(l)(w₁·w₂) = Σ X(l')(w₁)·X(l'')(w₂)`. For the
//! Leibnitz coproduct this makes `X(l_i)` a derivation: it acts on one tensor
//! factor at a time. Word length is preserved.
//!
//! Only the left-invariant side is implemented. The right-invariant version
//! is the same construction on the opposite coalgebra.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coalgebra::{BandedOperator, BasisSymbol, FaVector, Lowering};
use crate::combination::Combination;
use crate::error::{Error, Result};
use crate::leibnitz::GeneratorWord;
use crate::multiindex::MultiIndex;
use crate::C64;

/// A tensor word `f₁ ⊗ f₂ ⊗ … ⊗ f_r`; the empty word is the unit `1`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorWord(Vec<BasisSymbol>);

impl TensorWord {
    pub fn new(factors: Vec<BasisSymbol>) -> Result<Self> {
        if let Some(first) = factors.first() {
            if let Some(bad) = factors.iter().find(|s| s.dim() != first.dim()) {
                return Err(Error::DimensionMismatch {
                    expected: first.dim(),
                    found: bad.dim(),
                });
            }
        }
        Ok(TensorWord(factors))
    }

    pub fn unit() -> Self {
        TensorWord(Vec::new())
    }

    pub fn factors(&self) -> &[BasisSymbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.0.first().map(BasisSymbol::dim)
    }

    pub fn counit(&self) -> C64 {
        self.0.iter().map(BasisSymbol::counit).product()
    }

    pub fn concat(&self, other: &TensorWord) -> TensorWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        TensorWord(v)
    }

    /// `τ`: reverse the factor order.
    pub fn reversed(&self) -> TensorWord {
        TensorWord(self.0.iter().rev().cloned().collect())
    }
}

impl fmt::Debug for TensorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (j, s) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, "⊗")?;
            }
            write!(f, "{s:?}")?;
        }
        Ok(())
    }
}

pub type TensorElement = Combination<TensorWord>;

/// Embeds `F_a` into `T(F_a)` as length-one words.
pub fn from_fa(v: &FaVector) -> TensorElement {
    let mut out = TensorElement::with_prune_eps(v.prune_eps());
    for (s, c) in v {
        out.add_term(TensorWord(vec![s.clone()]), *c);
    }
    out.prune();
    out
}

/// The element `1` of `T(F_a)`.
pub fn unit() -> TensorElement {
    TensorElement::single(TensorWord::unit())
}

fn common_dim(e: &TensorElement) -> Result<Option<usize>> {
    let mut dim = None;
    for w in e.keys() {
        if let Some(d) = w.dim() {
            match dim {
                None => dim = Some(d),
                Some(d0) if d0 != d => {
                    return Err(Error::DimensionMismatch { expected: d0, found: d })
                }
                _ => {}
            }
        }
    }
    Ok(dim)
}

/// Bilinear concatenation product.
pub fn product(a: &TensorElement, b: &TensorElement) -> Result<TensorElement> {
    if let (Some(da), Some(db)) = (common_dim(a)?, common_dim(b)?) {
        if da != db {
            return Err(Error::DimensionMismatch { expected: da, found: db });
        }
    }
    let mut out = a.empty_like();
    for (u, cu) in a {
        for (v, cv) in b {
            out.add_term(u.concat(v), cu * cv);
        }
    }
    out.prune();
    Ok(out)
}

/// `ε_F` on `T(F_a)`: the algebra morphism with `ε(1) = 1`.
pub fn counit_t(e: &TensorElement) -> C64 {
    e.iter().map(|(w, c)| c * w.counit()).sum()
}

/// Applies `op` on the left to factor `j` of every word, leaving the others
/// untouched.
fn apply_at_all_positions(op: &dyn BandedOperator, e: &TensorElement) -> TensorElement {
    let mut out = e.empty_like();
    for (w, c) in e {
        for (j, s) in w.0.iter().enumerate() {
            for (k, o) in op.row(&s.lower) {
                let mut factors = w.0.clone();
                factors[j] = BasisSymbol {
                    lower: k,
                    upper: s.upper.clone(),
                };
                out.add_term(TensorWord(factors), c * o);
            }
        }
    }
    out.prune();
    out
}

/// A left-invariant realization `x: L_0 → Invg,r(F_a)` of a Leibnitz
/// coalgebra: `x(l_0) = id` and `x(l_i)` given by a banded operator for each
/// primitive generator `i = 1..=generators.len()`.
#[derive(Clone, Debug)]
pub struct Realization {
    dim: usize,
    generators: Vec<Arc<dyn BandedOperator>>,
}

impl Realization {
    pub fn new(dim: usize, generators: Vec<Arc<dyn BandedOperator>>) -> Result<Self> {
        if let Some(bad) = generators.iter().find(|g| g.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Realization { dim, generators })
    }

    /// The elementary lowering realization `x_0(l_i)(f_n^k) = n_i f_{n−i(1)}^k`.
    pub fn lowering(p: usize) -> Self {
        let generators = (1..=p)
            .map(|i| Arc::new(Lowering::new(p, i).expect("slot in range")) as Arc<dyn BandedOperator>)
            .collect();
        Realization { dim: p, generators }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of primitive generators.
    pub fn primitives(&self) -> usize {
        self.generators.len()
    }

    /// `x(l_i)` for `i ≥ 1`.
    pub fn generator(&self, i: usize) -> Result<&Arc<dyn BandedOperator>> {
        if i == 0 || i > self.generators.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                lo: 1,
                hi: self.generators.len(),
            });
        }
        Ok(&self.generators[i - 1])
    }

    fn check(&self, e: &TensorElement) -> Result<()> {
        if let Some(d) = common_dim(e)? {
            if d != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: d,
                });
            }
        }
        Ok(())
    }

    /// `X(l)(e)` for the generator with index `l` (`0` is the grouplike).
    pub fn extend_apply(&self, l: usize, e: &TensorElement) -> Result<TensorElement> {
        self.check(e)?;
        if l == 0 {
            return Ok(e.clone());
        }
        let op = self.generator(l)?;
        Ok(apply_at_all_positions(op.as_ref(), e))
    }

    /// `π_x(w)(e)` with `π_x(l_a l_b …) = X(l_a) ∘ X(l_b) ∘ …`: the first
    /// letter is outermost, so letters are applied from last to first.
    pub fn apply_word(&self, word: &[usize], e: &TensorElement) -> Result<TensorElement> {
        let mut cur = e.clone();
        for &l in word.iter().rev() {
            cur = self.extend_apply(l, &cur)?;
        }
        Ok(cur)
    }
}

/// Realizations of several Leibnitz summands `L_A`, keyed by tag, acting on a
/// common `T(F_a)`. Together they realize `⊕_A L_A`.
#[derive(Clone, Debug, Default)]
pub struct RealizationFamily {
    members: BTreeMap<String, Realization>,
}

impl RealizationFamily {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, tag: impl Into<String>, x: Realization) {
        self.members.insert(tag.into(), x);
    }

    pub fn get(&self, tag: &str) -> Option<&Realization> {
        self.members.get(tag)
    }

    pub fn apply_word(&self, word: &GeneratorWord, e: &TensorElement) -> Result<TensorElement> {
        let mut cur = e.clone();
        for letter in word.letters().iter().rev() {
            if letter.is_grouplike() {
                continue;
            }
            let x = self.members.get(letter.tag()).ok_or_else(|| {
                Error::Parse(format!("no realization registered for tag {:?}", letter.tag()))
            })?;
            cur = x.extend_apply(letter.index(), &cur)?;
        }
        Ok(cur)
    }
}

#[derive(Serialize, Deserialize)]
struct SymbolRef {
    lower: MultiIndex,
    upper: MultiIndex,
}

#[derive(Serialize, Deserialize)]
struct WordTerm {
    word: Vec<SymbolRef>,
    re: f64,
    im: f64,
}

impl Serialize for Combination<TensorWord> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|(w, c)| WordTerm {
            word: w
                .0
                .iter()
                .map(|s| SymbolRef {
                    lower: s.lower.clone(),
                    upper: s.upper.clone(),
                })
                .collect(),
            re: c.re,
            im: c.im,
        }))
    }
}

impl<'de> Deserialize<'de> for Combination<TensorWord> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<WordTerm>::deserialize(deserializer)?;
        let mut out = TensorElement::new();
        for t in terms {
            let factors = t
                .word
                .into_iter()
                .map(|s| BasisSymbol::new(s.lower, s.upper))
                .collect::<Result<Vec<_>>>()
                .map_err(serde::de::Error::custom)?;
            let w = TensorWord::new(factors).map_err(serde::de::Error::custom)?;
            out.add_term(w, C64::new(t.re, t.im));
        }
        out.prune();
        Ok(out)
    }
}
