//! Realized bialgebras of analytic vector fields on `C^p`.
//!
//! The approximated coalgebra `F_a` of banded invariant matrices carries the
//! realization of a Leibnitz coalgebra, and Lie-series flows, path sums and
//! induced relations are computed from it.

pub mod cli;
pub mod coalgebra;
pub mod duality;
pub mod combination;
pub mod error;
pub mod field;
pub mod leibnitz;
pub mod lie;
pub mod multiindex;
pub mod relations;
pub mod sampling;
pub mod suite;
pub mod tensor;

pub use error::{Error, Result};

/// Complex scalars used throughout.
pub type C64 = num_complex::Complex64;

/// Coefficients at or below this magnitude are dropped by [`combination::Combination::prune`].
pub const DEFAULT_PRUNE_EPS: f64 = 1e-15;
