use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole at s = {0}")]
    Pole(String),

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("vector is not primitive: {0:?}")]
    NotPrimitive(Vec<i64>),

    #[error("ill-conditioned: {0}")]
    IllConditioned(String),

    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),

    #[error("enumeration budget exceeded: {0}")]
    TooLarge(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("integer overflow in exact arithmetic: {0}")]
    Overflow(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("cache checksum mismatch for key {0}")]
    ChecksumMismatch(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
