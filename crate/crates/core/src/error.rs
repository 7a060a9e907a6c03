//! Error type shared across the crate.
//!
//! Checker verdicts (PASS/FAIL/WARN) are not errors; they live in
//! [`crate::report`]. Errors are reserved for malformed inputs and for
//! operations whose preconditions are violated.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("variable set mismatch: expected {expected}, got {got}")]
    VarMismatch { expected: String, got: String },

    #[error("could not find {wanted} admissible sample points within {tried} attempts; the avoid set is over-constrained")]
    SampleExhausted { wanted: usize, tried: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid structure constants: {0}")]
    StructureConstants(String),

    #[error("structure constants are not nilpotent of class <= 4")]
    NotNilpotent,

    #[error("check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
