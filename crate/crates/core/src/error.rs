use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar parameter lies outside the domain of the formula (e.g. a nonpositive variance).
    #[error("domain error: {0}")]
    Domain(String),

    /// Operands are incompatible: dimension mismatch, wrong measure tag, different grids.
    #[error("argument error: {0}")]
    Argument(String),

    /// A grid or transform layout is not admissible.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// The request exceeds what the dense representation supports.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// The result would not meet the discretization's accuracy guarantees.
    #[error("accuracy error: {0}")]
    Accuracy(String),

    /// The combination of inputs has no implementation.
    #[error("capability error: {0}")]
    Capability(String),

    /// A precondition on the input (e.g. positivity of a measure) is violated.
    #[error("precondition error: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(format!($($arg)*)))
    };
}
pub(crate) use bail;
