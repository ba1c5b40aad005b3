use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid penalty parameters: {0}")]
    InvalidPenalty(String),

    #[error("penalty argument must be {expected}, got {value}")]
    Domain { expected: &'static str, value: f64 },

    #[error("operation not supported for {0}")]
    Unsupported(&'static str),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("column {0} has zero norm")]
    ZeroNormColumn(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("solver diverged: {0}")]
    Divergence(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("{0}")]
    Tuning(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("{0}")]
    Metrics(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
