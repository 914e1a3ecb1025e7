use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
///
/// The variants are coarse on purpose: callers (the CLI in particular) map
/// them onto exit statuses, so the kind matters more than the payload.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Inputs violate an operation's preconditions.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// The instance is beyond the enumeration or search limits.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// Malformed text input; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A time or node budget ran out before the computation finished.
    #[error("budget exhausted: {0}")]
    Budget(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    /// Stable lowercase name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parameter(_) => "parameter",
            Error::Capacity(_) => "capacity",
            Error::Parse { .. } => "parse",
            Error::Budget(_) => "budget",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
