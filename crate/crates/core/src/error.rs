use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("dimension {d} is not supported: {reason}")]
    UnsupportedDimension { d: u64, reason: &'static str },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search space of {size:.3e} exceeds budget {limit:.3e}; {hint}")]
    Budget {
        size: f64,
        limit: f64,
        hint: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
