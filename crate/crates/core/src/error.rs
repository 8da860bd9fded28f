use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("polynomial {0:?} is not a monic irreducible polynomial of the required degree")]
    NotIrreducible(Vec<u32>),
    #[error("field of order {0} exceeds the supported maximum")]
    FieldTooLarge(u64),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("value {0} is not an element of the field")]
    NotAnElement(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("the zero code has no weight profile")]
    ZeroCode,
    #[error("k ≤ m required (got k = {k}, m = {m})")]
    KExceedsM { k: usize, m: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("guard `{guard}` exceeded: requested {requested}, limit {limit}")]
    GuardExceeded {
        guard: &'static str,
        requested: u128,
        limit: u128,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
