//! Multi-indices over `N^p`.
//!
//! Rows and columns of every operator in the crate are labelled by
//! [`MultiIndex`] values. Storage is dense: `p` stays small in practice and the
//! derived `Ord` gives the lexicographic order used for all map keys.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyIndex);
        }
        Ok(MultiIndex(entries))
    }

    /// The origin `o = (0, …, 0)`.
    pub fn zero(p: usize) -> Self {
        assert!(p >= 1, "ambient dimension must be at least 1");
        MultiIndex(vec![0; p])
    }

    /// `i(1)`: a one in slot `i` (1-based), zeros elsewhere.
    pub fn unit(p: usize, i: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::EmptyIndex);
        }
        if i == 0 || i > p {
            return Err(Error::IndexOutOfRange { index: i, lo: 1, hi: p });
        }
        let mut v = vec![0; p];
        v[i - 1] = 1;
        Ok(MultiIndex(v))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `deg(a) = Σ a_i`.
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    /// `|a| = sup_i a_i`.
    pub fn sup_norm(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    fn check_dim(&self, other: &MultiIndex) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.check_dim(other)?;
        Ok(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Componentwise difference, or `None` when some component would go
    /// negative (the corresponding term vanishes).
    pub fn sub_checked(&self, other: &MultiIndex) -> Result<Option<MultiIndex>> {
        self.check_dim(other)?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex))
    }

    /// `self + plus − i(1)` for a 0-based slot, `None` if it leaves `N^p`.
    /// Dimensions are assumed equal.
    pub(crate) fn raise_lower(&self, plus: &MultiIndex, slot: usize) -> Option<MultiIndex> {
        let mut v: Vec<u32> = self.0.iter().zip(&plus.0).map(|(a, b)| a + b).collect();
        v[slot] = v[slot].checked_sub(1)?;
        Some(MultiIndex(v))
    }

    /// `self − plus + i(1)`: the inverse of [`raise_lower`](Self::raise_lower).
    pub(crate) fn lower_raise(&self, plus: &MultiIndex, slot: usize) -> Option<MultiIndex> {
        let mut v = self.0.clone();
        v[slot] += 1;
        for (a, b) in v.iter_mut().zip(&plus.0) {
            *a = a.checked_sub(*b)?;
        }
        Some(MultiIndex(v))
    }

    /// Band metric `sup_i |a_i − b_i|`.
    pub fn band_distance(&self, other: &MultiIndex) -> u32 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.abs_diff(*b))
            .max()
            .unwrap_or(0)
    }

    /// `a! = Π a_i!`, exact.
    pub fn factorial(&self) -> u128 {
        self.0
            .iter()
            .map(|&e| (1..=u128::from(e)).product::<u128>())
            .product()
    }

    /// All multi-indices of dimension `p` with `sup_norm ≤ cap`, in
    /// lexicographic order.
    pub fn all_in_box(p: usize, cap: u32) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(p)];
        for _ in 0..p {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=cap).map(move |e| {
                        let mut v = prefix.clone();
                        v.push(e);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// All multi-indices of dimension `p` with `degree ≤ max_degree`.
    pub fn all_up_to_degree(p: usize, max_degree: u32) -> Vec<MultiIndex> {
        Self::all_in_box(p, max_degree)
            .into_iter()
            .filter(|m| m.degree() <= u64::from(max_degree))
            .collect()
    }
}

impl TryFrom<Vec<u32>> for MultiIndex {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        MultiIndex::new(v)
    }
}

impl From<MultiIndex> for Vec<u32> {
    fn from(m: MultiIndex) -> Self {
        m.0
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Shorthand used throughout the tests and examples. Panics on an empty slice.
pub fn mi(entries: &[u32]) -> MultiIndex {
    MultiIndex::new(entries.to_vec()).expect("non-empty multi-index")
}
