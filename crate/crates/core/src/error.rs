use thiserror::Error;

/// Every failure the library can report. The CLI maps variants onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,

    #[error("monomial arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),

    #[error("monomial quotient requested but the divisor does not divide")]
    NotDivisible,

    #[error("operands live in different ring contexts")]
    ContextMismatch,

    #[error("operation needs a nonzero polynomial")]
    ZeroPolynomial,

    #[error("at most {max} variables are supported, got {got}")]
    TooManyVariables { max: usize, got: usize },

    /// An input violates a stated precondition (non-homogeneous generator,
    /// ideal not m-primary, I not contained in K, ...).
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),

    /// A configurable limit (pair reductions, chain length, table size) was hit.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    /// A proved identity or inequality failed on a concrete instance.
    #[error("internal defect: {0}")]
    Defect(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
