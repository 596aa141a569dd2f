use thiserror::Error;

/// Errors reported by construction and certification operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes are incompatible.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// An argument is outside the supported range.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A value fails its structural invariant (hermiticity, normalization, ...).
    #[error("validation failed: {0}")]
    Validation(String),
    /// The requested operation is not available for this configuration.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    /// A documented precondition does not hold for the supplied data.
    #[error("precondition not met: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
