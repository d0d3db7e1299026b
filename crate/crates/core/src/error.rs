use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Index outside the domain of a sequence (index 0, or past the end of a
    /// finite table).
    #[error("index {index} is outside the sequence domain{}", .limit.map(|l| format!(" (valid: 1..={l})")).unwrap_or_default())]
    Domain { index: u64, limit: Option<u64> },

    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("{what} exceeds the 64-bit signed index range")]
    Range { what: String },

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// The requested identity or quantity is not defined for the given block,
    /// e.g. the block is empty.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("precondition failed at index {index}: value {value} is negative")]
    Negative { index: u64, value: f64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by invalid user input rather than by runtime
    /// conditions (I/O, parse failures, out-of-range evaluation).
    pub fn is_parameter_error(&self) -> bool {
        matches!(self, Error::Parameter { .. } | Error::Negative { .. })
    }
}
