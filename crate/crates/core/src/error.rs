use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed system document: {0}")]
    MalformedDocument(String),

    #[error("polynomial {index}: negative exponent {value}")]
    NegativeExponent { index: usize, value: i64 },

    #[error("polynomial {index}: exponent of length {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("polynomial {index}: empty support")]
    EmptySupport { index: usize },

    #[error("polynomial {index}: duplicate exponent {exponent:?}")]
    DuplicateExponent { index: usize, exponent: Vec<i64> },

    #[error("polynomial {index}: zero coefficient at exponent {exponent:?}")]
    ZeroCoefficient { index: usize, exponent: Vec<i64> },

    #[error("invalid number {0:?}")]
    InvalidNumber(String),

    #[error("data vector: {0}")]
    InvalidData(String),

    #[error("system has no polynomials")]
    EmptySystem,

    #[error("zero polynomial has no Newton polytope")]
    ZeroPolynomial,

    #[error("empty point set")]
    EmptyPointSet,

    #[error("ambient dimension mismatch: expected {expected}, found {found}")]
    AmbientMismatch { expected: usize, found: usize },

    #[error("weight vector is zero")]
    ZeroWeight,

    #[error("expected {expected} polytopes or supports, found {found}")]
    CountMismatch { expected: usize, found: usize },

    #[error("exponent arithmetic overflowed")]
    ExponentOverflow,

    #[error("mixed-cell enumeration found no fine lifting after {attempts} attempts (last lifting seed {last_seed})")]
    LiftingBudgetExhausted { attempts: usize, last_seed: u64 },

    #[error("polynomial {index} is not divisible by the product of all x-variables")]
    NotHatForm { index: usize },

    #[error("weight vector does not expose a mixed-with-origin face")]
    WrongCase,

    #[error("weight vector has zero x-part; no kernel certificate exists")]
    ZeroXWeight,

    #[error("coordinate {index} is zero")]
    ZeroCoordinate { index: usize },

    #[error("system is not square: {equations} equations in {variables} variables")]
    NotSquare { equations: usize, variables: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Coarse classification used to map failures to process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input or usage.
    Input,
    /// A computation did not reach a trustworthy result.
    Anomaly,
    /// An internal consistency check failed.
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Internal(_) => ErrorClass::Internal,
            Error::LiftingBudgetExhausted { .. } => ErrorClass::Anomaly,
            _ => ErrorClass::Input,
        }
    }
}
