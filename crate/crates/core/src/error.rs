//! Error type shared by all modules.

use num_complex::Complex;

/// Errors surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Matrix or vector dimensions are inconsistent with the operation.
    #[error("shape error: {0}")]
    Shape(String),

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configurable resource cap (qubit count, recursion depth) was exceeded.
    #[error("resource limit: {0}")]
    Resource(String),

    /// The operation only supports a restricted parameter regime.
    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    /// The equal-magnitude kernel search exhausted its iteration budget.  The
    /// plain null-space basis found along the way is carried for diagnosis.
    #[error("search failed: {message}")]
    SearchFailed {
        message: String,
        null_space: Vec<Vec<Complex<f64>>>,
    },

    /// A protocol-level residual check failed; the report carries diagnostics.
    #[error("protocol failure: {0}")]
    Protocol(String),

    /// File or serialization problem at the interface layer.
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
