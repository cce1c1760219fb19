use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0}: input set is empty")]
    EmptyInput(&'static str),

    #[error("m + n must be at least 1")]
    ZeroFold,

    #[error("degenerate pair: perpendicular bisector of a point with itself")]
    DegeneratePair,

    #[error("{op}: need at least {need} points, got {got}")]
    TooFewPoints { op: &'static str, need: usize, got: usize },

    #[error("weighted bisector map is empty")]
    EmptyMap,

    #[error("{what} size {size} exceeds cap {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },

    #[error("bisector map does not belong to this point set (W_total {got}, expected {expected})")]
    MismatchedInputs { got: u64, expected: u64 },

    #[error("invalid family parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
