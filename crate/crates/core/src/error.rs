use thiserror::Error;

/// Errors raised by field construction, parsing, analysis and scanning.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("field order {p}^{n} exceeds the supported maximum of 2^31 elements")]
    FieldTooLarge { p: u64, n: u32 },

    #[error("invalid modulus: {0}")]
    BadModulus(String),

    #[error("modulus {modulus} is reducible: it has the factor {factor}")]
    ReducibleModulus { modulus: String, factor: String },

    #[error("{m} does not divide {n}")]
    NotDivisor { m: u64, n: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("size guard exceeded: {0}")]
    TooLarge(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("malformed report: {0}")]
    Report(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}
