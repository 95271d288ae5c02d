use thiserror::Error;

/// Errors raised by polynomial arithmetic, the cyclotomic tables and the
/// block engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient overflow")]
    Overflow,
    #[error("division by the zero polynomial")]
    DivideByZero,
    #[error("inexact division: nonzero remainder")]
    InexactDivision,
    #[error("divisor is not monic")]
    NonMonicDivisor,
    #[error("degree {degree} is not below the window length {window}")]
    DegreeTooLarge { degree: usize, window: usize },
    #[error("rotation amount {shift} is outside 0..{window}")]
    RotationOutOfRange { shift: usize, window: usize },
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("argument must be positive")]
    NonPositive,
    #[error("{n} exceeds the configured cap {cap}")]
    CapExceeded { n: u64, cap: u64 },
    #[error("NotSquarefree: {0} is not square-free")]
    NotSquarefree(u64),
    #[error("NotOdd: {0} is not odd")]
    NotOdd(u64),
    #[error("NotPrime: {0} is not prime")]
    NotPrime(u64),
    #[error("PrimeNotLarger: prime {p} must exceed m = {m}")]
    PrimeNotLarger { m: u64, p: u64 },
    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("polynomial has degree {found:?}, expected {expected}")]
    DegreeMismatch { expected: usize, found: Option<usize> },
}

pub type Result<T> = std::result::Result<T, Error>;
