use thiserror::Error;

/// Errors produced by bundle parsing, validation and the cohomology engine.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("exterior index p = {p} out of range for P^{n}")]
    AtomOutOfRange { p: i64, n: usize },

    #[error("multiplicity must be positive")]
    NonPositiveMultiplicity,

    #[error("arity mismatch: expected {expected} factors, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("cohomological degree {i} out of range 0..={max}")]
    DegreeOutOfRange { i: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty twist grid: {0}")]
    EmptyGrid(String),

    #[error("computation too large: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
