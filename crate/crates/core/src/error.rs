use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation was called with incompatible shapes.
    #[error("{op}: dimension mismatch, expected {expected}, got {actual}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A constructor or generator spec violated its invariants.
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// A factorization input was numerically rank deficient.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// `A*b` is numerically zero, so the scaling factor cannot be
    /// estimated (b is orthogonal to the range of A, or A = 0).
    #[error("scale undefined: A*b is numerically zero")]
    UndefinedScale,

    /// Every probe vector landed in the null space of a non-zero matrix,
    /// so verification could not reach a verdict. Retry with more probes.
    #[error("verification inconclusive: all {0} probes gave Az ~ 0 for a non-zero A")]
    InconclusiveVerdict(usize),

    /// The oracle's SVD driver failed to converge.
    #[error("SVD oracle failed to converge (driver info = {0})")]
    OracleFailure(i32),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(op: &'static str, expected: usize, actual: usize) -> Self {
        Error::DimensionMismatch {
            op,
            expected,
            actual,
        }
    }
}
