//! Crate-wide error type. Errors are reserved for genuinely invalid
//! requests or for internal identities failing; values that are merely
//! outside the verified range are reported through flags, not errors.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable count mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("series is not nilpotent: {0}")]
    NotNilpotent(String),

    #[error("exact division failed: {0}")]
    NotDivisible(String),

    #[error("symmetry violation: {0}")]
    SymmetryViolation(String),

    #[error("unstable or empty case: {0}")]
    Unstable(String),

    #[error("removable singularity hit head-on: {0}")]
    Singular(String),

    #[error("constraint system inconsistent: {0}")]
    Inconsistent(String),

    #[error("invalid request: {0}")]
    InvalidRequest(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("numerical integration failed: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
