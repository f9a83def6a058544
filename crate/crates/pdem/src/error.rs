//! Error type shared by all solver modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Construction or call arguments violate a precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested quantity is undefined for this problem or position
    /// (wrong boundary kind, turning point on the path, argument range).
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method exhausted its budget without reaching tolerance,
    /// or a search found nothing to converge to.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// The problem is structurally outside what this method can handle.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
