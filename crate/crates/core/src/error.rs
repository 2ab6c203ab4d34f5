use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A caller broke a documented precondition (dimension mismatch, bad range, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A requested bidegree lies outside what a resolution or module can answer.
    #[error("window error: {message} (safe bound: {safe_bound})")]
    Window { message: String, safe_bound: i64 },

    /// The requested computation is too large for the configured budget.
    #[error("resource limit: {0}")]
    Resource(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// An internal consistency check failed; this indicates a bug.
    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub(crate) fn arg_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
