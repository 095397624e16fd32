use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An operation that needs the factorization was called without one.
    #[error("operation requires the oracle factorization")]
    OracleRequired,

    /// A gcd computation exposed a proper divisor of the modulus.
    #[error("nontrivial divisor revealed: {0}")]
    FactorRevealed(BigUint),

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("lattice basis is linearly dependent")]
    DegenerateLattice,

    #[error("retry budget of {0} draws exhausted")]
    BudgetExhausted(usize),

    #[error("oracle prime {0} exceeds the point-counting limit")]
    OracleTooLarge(BigUint),

    #[error("inconsistent state: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
