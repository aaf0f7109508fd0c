use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A state failed one of its structural invariants (norm, hermiticity,
    /// trace, positivity).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Operand dimensions are incompatible or outside the supported set.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A tensor product would exceed the three-qubit working space.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A qubit index is out of range or repeated.
    #[error("index error: {0}")]
    Index(String),

    /// The requested parameter combination is outside the supported set.
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    /// A scalar parameter is outside its allowed range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
