use thiserror::Error;

/// Errors raised by the library.
///
/// `TheoremViolation` and `Internal` are never expected on correct input;
/// they carry enough context to reproduce the failure.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("mixed-field input: expected {expected}, found {found}")]
    MixedField { expected: String, found: String },
    #[error("{0} is not a prime")]
    InvalidPrime(u64),
    #[error("the zero linear form does not define a hyperplane")]
    ZeroForm,
    #[error("duplicate hyperplane {0}")]
    DuplicateHyperplane(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("|m| = 0: D(A,0) is all of Der(S) and has no canonical lower-degree basis")]
    EmptyMultiplicity,
    #[error("multiplicity is balanced; use the degree-scan solver")]
    Balanced,
    #[error("multiplicity is not in a finite component: {0}")]
    NotInFiniteComponent(String),
    #[error("hyperplane index {index} out of range (|A| = {len})")]
    HyperplaneIndex { index: usize, len: usize },
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("THEOREM VIOLATION: {0}")]
    TheoremViolation(String),
    #[error("region too large: {points} points exceeds budget {budget}")]
    RegionTooLarge { points: u128, budget: u128 },
    #[error("operation requires a field of characteristic zero, got {0}")]
    NotRational(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated (solver bug): {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
