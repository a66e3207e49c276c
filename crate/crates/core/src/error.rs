//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported family/rank combination: {0}")]
    UnsupportedFamily(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("inconsistent root data: {0}")]
    InconsistentRootData(String),

    #[error("not a subalgebra: bracket closure residual {residual:.3e}")]
    NotSubalgebra { residual: f64 },

    #[error("isotypic eigen-split ambiguous: eigenvalue gap {gap:.3e}")]
    AmbiguousEigenSplit { gap: f64 },

    #[error("degenerate flag: {0}")]
    DegenerateFlag(String),

    #[error("curvature formula inapplicable: {condition} residual {residual:.3e} exceeds {tolerance:.1e}")]
    PreconditionViolated {
        condition: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("fundamental tensor not positive definite: {0}")]
    ConvexityViolation(String),

    #[error("wrong norm shape: {0}")]
    WrongNormShape(String),

    #[error("vector has a nonzero h-component (norm {0:.3e})")]
    NotInM(f64),

    #[error("last summand is not a valid m_s: {0}")]
    InvalidLastSummand(String),

    #[error("fixture integrity: {0}")]
    FixtureMismatch(String),

    #[error("unknown case id: {0}")]
    UnknownCase(String),

    #[error("parse error in {file} line {line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
