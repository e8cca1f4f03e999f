//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid signal data: {0}")]
    InvalidSignal(String),

    #[error("measurement scheme mismatch: expected {expected}, got {got}")]
    SchemeMismatch { expected: String, got: String },

    #[error("underdetermined system: need M >= 2N-1 measurements, got M={m} for N={n}")]
    Underdetermined { m: usize, n: usize },

    #[error("enumeration over length {n} exceeds the cap of {cap} (raise the cap explicitly to proceed)")]
    EnumerationCap { n: usize, cap: usize },

    #[error("solver diverged: non-finite iterate at iteration {iter}")]
    Divergence { iter: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
