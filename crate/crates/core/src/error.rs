//! Error types shared by all modules.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The operation does not support the given domain shape.
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    /// A map produced points outside the domain beyond the allowed slack.
    #[error("range error: {count} points escape the domain (first at index {first_index}, by {max_excess:.3e})")]
    RangeError {
        count: usize,
        first_index: usize,
        max_excess: f64,
    },

    /// An iterative solver failed to reach its tolerance.
    #[error("solver failure in {stage}: residual {residual:.3e} after {iterations} iterations (target {target:.3e})")]
    SolverFailure {
        stage: String,
        residual: f64,
        iterations: usize,
        target: f64,
    },

    /// A declared invariant was violated by the data handed in.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// A field file is malformed or truncated.
    #[error("corrupt file {path}: {reason}")]
    CorruptFile { path: String, reason: String },

    /// A downstream stage failed; carries the stage name for context.
    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Wrap an error with the name of the pipeline stage that produced it.
    pub fn in_stage(self, stage: impl Into<String>) -> Self {
        Error::Stage {
            stage: stage.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
