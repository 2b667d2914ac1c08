use thiserror::Error;

/// Errors raised by the library.
///
/// Nothing here is ever a "wrong answer": an operation that cannot decide
/// exactly within its configured limits returns [`Error::Capacity`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands from different groups, invalid elements, malformed input.
    #[error("usage error: {0}")]
    Usage(String),
    /// A mathematical precondition of the operation is not met.
    #[error("domain error: {0}")]
    Domain(String),
    /// An exactness-labelled operation would exceed a configured cap.
    #[error("capacity exceeded: {what} is {got}, cap is {cap}")]
    Capacity { what: String, got: u64, cap: u64 },
    /// Infeasible generator or algorithm parameters.
    #[error("configuration error: {0}")]
    Config(String),
    /// The operation does not support this group family.
    #[error("unsupported group: {0}")]
    UnsupportedSpec(String),
    /// An iteration guard tripped; every guarded loop has a termination
    /// argument, so this signals a bug.
    #[error("iteration guard tripped: {0}")]
    GuardTrip(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn capacity(what: impl Into<String>, got: usize, cap: usize) -> Self {
        Error::Capacity {
            what: what.into(),
            got: got as u64,
            cap: cap as u64,
        }
    }
}
