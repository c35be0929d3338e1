use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaError {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("p = {0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not p-integral: {0}")]
    NotIntegral(String),
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error("precision failure: {0}")]
    Precision(String),
    #[error("singular hypersurface: {0}")]
    Singular(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

pub type Result<T> = std::result::Result<T, ZetaError>;
