use thiserror::Error;

/// Errors produced by the solvers, oracles and text formats.
///
/// `NoPath` is an outcome rather than a malfunction; callers that need to
/// tell the two apart (the scenario runner maps it to its own exit code)
/// can match on it directly.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("no path between the requested endpoints")]
    NoPath,

    #[error("no edge {from} -> {to}")]
    MissingEdge { from: usize, to: usize },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("negative edge cost {cost} on {from} -> {to}")]
    NegativeWeight { from: usize, to: usize, cost: f64 },

    #[error("enumeration limit exceeded: max_hops {max_hops} > {limit}")]
    LimitExceeded { max_hops: usize, limit: usize },

    #[error("step limit of {0} exceeded")]
    StepLimit(usize),

    #[error("corrupt pointer field: {0}")]
    CorruptPointerField(String),

    #[error("no fixed point reached after {0} steps")]
    NoFixedPoint(usize),

    #[error("invalid update: {0}")]
    InvalidUpdate(String),

    #[error("tube extraction failed: {0}")]
    TubeExtractionFailed(String),

    #[error("no tube formed within {0} steps")]
    NoTube(usize),

    #[error("unsupported frame format: {0}")]
    UnsupportedFormat(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
