use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid basis configuration: {0}")]
    InvalidConfig(String),

    #[error("t = {t} lies outside [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },

    #[error("quadrature order must be at least 1")]
    ZeroQuadratureOrder,

    #[error("index ({i}, {j}) out of range for a {m}x{m} unit matrix")]
    UnitIndex { i: usize, j: usize, m: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("function evaluation failed at t = {t} ({context}): {message}")]
    FunctionEval {
        context: String,
        t: f64,
        message: String,
    },

    #[error("singular matrix: pivot {pivot:e} at index {index} is below threshold {threshold:e}")]
    Singular {
        index: usize,
        pivot: f64,
        threshold: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
