use thiserror::Error;

/// Errors produced by the library.
///
/// The variants map onto the CLI exit codes: `Domain` and `Usage` are
/// validation failures (exit 2), `Solver`, `Precision` and `Overflow` are
/// numerical failures (exit 3), `Io` is exit 4.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid argument combination or malformed request.
    #[error("usage error: {0}")]
    Usage(String),

    /// A root finder failed; carries bracket diagnostics.
    #[error("solver error: {0}")]
    Solver(String),

    /// Requested quantity is below the achievable arithmetic noise floor.
    #[error("precision error: {0}")]
    Precision(String),

    /// Evaluation would overflow doubles.
    #[error("overflow: {0}")]
    Overflow(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
