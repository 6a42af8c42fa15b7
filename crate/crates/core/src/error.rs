use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix has no rows or no columns")]
    EmptyMatrix,

    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },

    /// Zero-based reviewer/paper indices of the offending score.
    #[error("score at ({row}, {col}) is {value}, outside [0, 1]")]
    OutOfRange { row: usize, col: usize, value: f64 },

    /// One-based line and column, as a text editor would show them.
    #[error("parse error at line {line}, column {col}: {message}")]
    Parse { line: usize, col: usize, message: String },

    #[error("weight ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("{what}: expected length {expected}, found {found}")]
    DimensionMismatch { what: &'static str, expected: usize, found: usize },

    #[error("bidding model and reviewer gain do not share a position factor")]
    NotDecomposable,

    #[error("{what} too large: {size} exceeds limit {limit}")]
    TooLarge { what: &'static str, size: usize, limit: usize },

    #[error("{what} = {value} must be divisible by {divisor}")]
    Divisibility { what: &'static str, value: usize, divisor: usize },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("analytic optimum is only defined for the noiseless community model")]
    NoiselessOnly,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }

    /// True for failures of the filesystem rather than of the inputs.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io(_) => true,
            Error::Csv(e) => e.is_io_error(),
            _ => false,
        }
    }
}
