use thiserror::Error;

/// Errors raised by the construction and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Arguments outside the domain of a number-theoretic function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{0} is not prime")]
    NotPrime(i64),

    /// Parameters that make a formula degenerate (zero denominator and the like).
    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("invalid branch assignment: {0}")]
    InvalidAssignment(String),

    /// A partition problem with no positive solutions at this q.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A caller-visible scan limit was reached before the goal was met.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
