use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("invariant violated ({invariant}): {detail}")]
    Validation { invariant: String, detail: String },

    #[error("operator is not positive semidefinite; witness vector {witness:?} gives <Tx|x> = {value}")]
    NotPositive { witness: Vec<String>, value: String },

    #[error("union did not stabilize within {budget} iterations (non-terminating near 0)")]
    NonTerminating {
        budget: usize,
        partial: crate::arith::IntervalSet,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn validation(invariant: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Validation {
            invariant: invariant.into(),
            detail: detail.into(),
        }
    }
}
