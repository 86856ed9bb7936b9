use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the analyzer.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("variable count {0} out of range (1..={max})", max = crate::bellcore::MAX_VARS)]
    VarCountOutOfRange(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for n = {n}")]
    InvalidVariable { index: usize, n: usize },

    #[error("mode index {index} out of range 1..={max}")]
    InvalidMode { index: usize, max: usize },

    #[error("matrix is not unitary: max |UU^† - I| = {deviation:e} exceeds {tolerance:e}")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("signature table covers {found} of {expected} Bell labels")]
    IncompleteTable { expected: usize, found: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("failed to parse apparatus file {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, LabError>;
