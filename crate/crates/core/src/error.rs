use thiserror::Error;

/// Errors raised by the realization machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("multi-indices need at least one component")]
    EmptyIndex,

    #[error("index {index} out of range {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },

    #[error("entry ({row}, {col}) lies outside band {band}")]
    BandViolation { row: String, col: String, band: u32 },

    #[error("|t|·m = {product:.6} ≥ 1: outside the certified disc, radius {radius:.12}")]
    Domain { product: f64, radius: f64 },

    #[error("band-reachable intermediate index {index} exceeds cap {cap}")]
    CapTooSmall { index: String, cap: u32 },

    #[error("tolerance {tol:e} not reached within order cap {cap}")]
    OrderCapExceeded { tol: f64, cap: usize },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("relation witness has a factor with non-zero upper index {0}")]
    NotInModule(String),

    #[error("invalid coalgebra: {0}")]
    InvalidCoalgebra(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
