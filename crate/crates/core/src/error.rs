use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An operation was applied outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A configured memory or enumeration budget would be exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// Two independent computations that must agree did not.
    #[error("internal consistency failure: {0}")]
    Internal(String),
    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
    /// An inverse root of an L-polynomial fell outside both admissible bands.
    #[error("root certification failed: {0}")]
    Certification(String),
    /// A log-derivative was requested at a zero of the L-function.
    #[error("pole: {0}")]
    Pole(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure {
    ($cond:expr, $variant:ident, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::$variant(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
