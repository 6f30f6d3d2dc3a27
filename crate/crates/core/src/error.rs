use thiserror::Error;

/// Failure categories shared by every module.
///
/// Each variant maps to exactly one CLI exit code (see `Error::exit_code`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-contract input (shapes, singular matrices, bad flags).
    #[error("validation error: {0}")]
    Validation(String),
    /// Precision exhaustion, iteration caps, numerically singular systems.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// A partial action was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A rational representation with non-positive determinant.
    #[error("orientation error: {0}")]
    Orientation(String),
    /// An invariant the algorithms guarantee was violated.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Domain(_) | Error::Orientation(_) => 1,
            Error::Numeric(_) | Error::Internal(_) => 2,
        }
    }

    pub fn category(&self) -> &'static str {
        match self {
            Error::Validation(_) => "validation",
            Error::Numeric(_) => "numeric",
            Error::Domain(_) => "domain",
            Error::Orientation(_) => "orientation",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! validation {
    ($($arg:tt)*) => { $crate::error::Error::Validation(format!($($arg)*)) };
}
macro_rules! numeric {
    ($($arg:tt)*) => { $crate::error::Error::Numeric(format!($($arg)*)) };
}
pub(crate) use numeric;
pub(crate) use validation;
