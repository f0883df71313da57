use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("non-Hermitian input: imaginary residue {0:e} in phase density")]
    NonHermitian(f64),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("operation requires an oscillator state")]
    NotOscillator,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
