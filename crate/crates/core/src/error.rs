use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, SbmError>;

#[derive(Debug, Error)]
pub enum SbmError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A formula was evaluated outside the range where it is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative solver hit its iteration cap. `last_estimate` is the
    /// value it had reached.
    #[error("no convergence after {iterations} iterations (last estimate {last_estimate})")]
    Convergence { iterations: usize, last_estimate: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl SbmError {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        SbmError::InvalidParameter(msg.into())
    }
}
