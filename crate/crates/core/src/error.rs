use thiserror::Error;

/// Errors produced by the quarklet library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("matrix is not invertible over Laurent polynomials: {0}")]
    NotInvertible(String),

    #[error("internal construction failure: {0}")]
    Construction(String),

    #[error("grid is not closed under halving: missing xi/2 = {0}")]
    GridNotHalvingClosed(f64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
