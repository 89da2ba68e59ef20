//! Shared error type for the crate.

use std::fmt;

/// Error returned by every fallible operation in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the operation's domain. The message names the
    /// offending value.
    Domain(String),
    /// A numeric routine failed to deliver its accuracy contract
    /// (e.g. a continued fraction hit its iteration cap).
    Numeric(String),
    /// An ingested or simulated offset is exactly zero, so the left/right
    /// side of the throw is undefined.
    ZeroOffset { trial: u64 },
    /// A record in an ingested file could not be parsed.
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Numeric(m) => write!(f, "numeric error: {m}"),
            Error::ZeroOffset { trial } => {
                write!(f, "offset is exactly zero at trial {trial}: side of the throw is undefined")
            }
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
