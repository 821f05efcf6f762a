use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is neither 0 nor a prime")]
    NotPrime(u64),
    #[error("denominator of {value} is divisible by {p}")]
    DenominatorNotInvertible { value: String, p: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse coefficient {0:?}")]
    BadCoefficient(String),
    #[error("operands live over different fields (characteristic {left} vs {right})")]
    FieldMismatch { left: u64, right: u64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cone is not strictly convex: {0}")]
    NotStrictlyConvex(String),
    #[error("invalid semigroup: {0}")]
    InvalidSemigroup(String),
    #[error("exponent {0:?} is not in the semigroup")]
    NotInSemigroup(Vec<i64>),
    #[error("invalid term order: {0}")]
    InvalidOrder(String),
    #[error("zero polynomial has no leading term or weight degree")]
    ZeroPolynomial,
    #[error("weight {0} does not pair integrally with the support")]
    NonIntegralWeight(String),
    #[error("operation needs dimension 2, semigroup has dimension {0}")]
    DimensionUnsupported(usize),
    #[error("cone of the marked basis has empty interior")]
    EmptyInterior,
    #[error("fan sweep exceeded its step budget of {0}")]
    NonTermination(usize),
    #[error("cone is regular; no witness exists")]
    RegularCone,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("parity error: {0}")]
    ParityError(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
