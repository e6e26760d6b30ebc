use std::io;

use thiserror::Error;

/// Errors produced by the numerical kernels.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} is outside the supported range [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// A computation needs more of some resource (sieve limit, zeta range)
    /// than the current configuration provides.
    #[error("capacity exceeded: {resource} must be at least {required} (have {available})")]
    Capacity {
        resource: &'static str,
        required: f64,
        available: f64,
    },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl LabError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        LabError::InvalidArgument(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        LabError::Numeric(msg.into())
    }
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
