//! Error type shared across the crate.

/// Errors produced by graph construction, optimization, and I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A function argument violated its precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Logarithm requested at (or within tolerance of) the rotation-angle
    /// branch cut, where the principal branch is ambiguous.
    #[error("log map near the pi branch cut (rotation angle {angle} rad)")]
    BranchAmbiguity { angle: f64 },

    /// A factor referenced a variable key that is not in the graph.
    #[error("key {0} not found in graph")]
    KeyNotFound(u64),

    /// Linear-algebra failure (indefinite system, failed factorization).
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// Graph or solver configuration is unusable (e.g. missing gauge prior).
    #[error("configuration error: {0}")]
    Configuration(String),

    /// Operation required graph connectivity that does not hold.
    #[error("graph topology error: {0}")]
    Topology(String),

    /// Text-format parse failure, with 1-based line number.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A frame/odometry stream violated its ordering contract.
    #[error("invalid stream: {0}")]
    InvalidStream(String),

    /// Timestamp lookup outside the covered range.
    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
