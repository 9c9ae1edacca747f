use thiserror::Error;

use crate::simplex::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate composition: components sum to zero")]
    DegenerateComposition,
    #[error("negative component at index {index}: {value}")]
    NegativeComponent { index: usize, value: f64 },
    #[error("non-finite component at index {index}")]
    NonFinite { index: usize },
    #[error("composition needs at least 2 components, got {0}")]
    TooFewComponents(usize),
    #[error("components sum to {0}, not 1")]
    NotClosed(f64),
    #[error("invalid dataset: {0}")]
    InvalidDataset(ValidationReport),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("alpha must lie in [-1, 1], got {0}")]
    AlphaOutOfRange(f64),
    #[error("alpha must be positive with zeros in the data (got alpha = {0})")]
    AlphaWithZeros(f64),
    #[error("zero variance column {0}")]
    ZeroVarianceColumn(usize),
    #[error("{what} must be at least {min}, got {got}")]
    TooSmall { what: &'static str, min: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("{path}: row {row}, column {column}: {message}")]
    Parse {
        path: String,
        row: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical machinery rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NotPositiveDefinite | Error::Numeric(_))
    }
}
