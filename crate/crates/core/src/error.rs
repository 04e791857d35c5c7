use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An exhaustive computation would exceed a configured enumeration limit.
    #[error("capability limit exceeded: {what} needs {requested}, limit is {limit}")]
    Capability {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("object kind mismatch: expected {expected}, got {actual}")]
    KindMismatch {
        expected: &'static str,
        actual: &'static str,
    },

    #[error("weighted input where an unweighted graph is required (k = {0})")]
    WeightedInput(u8),

    /// p11 p00 = p10 p01: every labelling of a structure is equally likely.
    #[error("degenerate model: p11*p00 == p10*p01")]
    DegenerateModel,

    #[error("zero-probability entry: {0}")]
    ZeroEntry(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn is_capability(&self) -> bool {
        matches!(self, Error::Capability { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
