use thiserror::Error;

/// Errors produced across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid encoding: {0}")]
    InvalidEncoding(String),

    #[error("cannot divide: dividend valuation {dividend} is below divisor valuation {divisor}")]
    DivisionValuation { dividend: usize, divisor: usize },

    #[error("division by a series with no known nonzero coefficient")]
    DivisionByZero,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("fixed-point map did not stabilise at order {order}")]
    ContractionViolation { order: usize },

    #[error("series precision dropped to {got}, order {wanted} was requested")]
    Precision { wanted: usize, got: usize },

    #[error("coefficient of x^{index} is not an integer: {value}")]
    NonInteger { index: usize, value: String },

    #[error("oracle fallback for Av({basis}) needs size {requested}, above the limit {limit}; supply its generating function manually")]
    ResourceLimit {
        basis: String,
        requested: usize,
        limit: usize,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
