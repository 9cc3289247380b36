use thiserror::Error;

/// Errors raised across the workbench.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("modulus {0:?} is reducible over GF({1})")]
    ReducibleModulus(Vec<u32>, u32),
    #[error("element {0} does not belong to a field of order {1}")]
    ForeignElement(u32, u32),
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("operation requires characteristic 2, field has characteristic {0}")]
    NotCharacteristicTwo(u32),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("points are linearly dependent: {0}")]
    Dependent(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("inexact division")]
    InexactDivision,
    #[error("search guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
