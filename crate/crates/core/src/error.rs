use thiserror::Error;

/// Errors surfaced by the library.
///
/// Invariant failures inside the construction engine are reported as
/// [`Error::Internal`] so callers can tell them apart from ordinary
/// precondition failures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground set size {n} exceeds the supported maximum of {max}")]
    GroundSetTooLarge { n: usize, max: usize },

    #[error("invalid ground set size {0}")]
    InvalidGroundSet(usize),

    #[error("invalid level set: {0}")]
    InvalidLevels(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("solution references a vector that is not a type of this system: {0}")]
    UnknownType(String),

    #[error("limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("not factorable: {0}")]
    NotFactorable(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid input factorization: {0}")]
    InvalidFactorization(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
