use thiserror::Error;

/// Errors raised by the library. Each variant maps to one failure family
/// so callers (the CLI in particular) can choose exit codes by kind.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("divergent integral: {0}")]
    Divergence(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("degenerate angle increment at n = {n}")]
    DegenerateAngle { n: usize },
    #[error("range error: {0}")]
    Range(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("hypothesis violated ({which}) at j = {witness}: ratio {ratio:.4e}")]
    Hypothesis { which: String, witness: usize, ratio: f64 },
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by numeric caps (truncation or solver limits).
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::Cap(_))
    }
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

pub type Result<T> = std::result::Result<T, Error>;
