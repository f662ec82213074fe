use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured cap (k, n, N, palette, s, ...) was exceeded.
    #[error("cap exceeded: {0}")]
    Cap(String),

    /// A witness failed its independent recheck. This always signals a bug.
    #[error("recheck failed: {0}")]
    Recheck(String),

    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
