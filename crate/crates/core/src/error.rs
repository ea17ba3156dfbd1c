use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("scalar {0} is not p-integral")]
    NonIntegral(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("series is identically zero")]
    ZeroSeries,
    #[error("leading term is singular")]
    SingularLeadingTerm,
    #[error("characteristic polynomial does not split over Q (irreducible factor of degree {0})")]
    NonSplitSpectrum(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("grading violation: {0}")]
    GradingViolation(String),
    #[error("associativity fails on ({0}, {1}, {2})")]
    AssociativityFailure(usize, usize, usize),
    #[error("unit fails: {0}")]
    UnitFailure(String),
    #[error("malformed ring data: {0}")]
    MalformedRing(String),
    #[error("degree {0} slice is empty")]
    EmptySlice(i64),
    #[error("degree window is empty or reversed")]
    WindowTooNarrow,
    #[error("not a cocycle")]
    NotACocycle,
    #[error("cocycle has odd degree {0}")]
    OddDegree(i64),
    #[error("malformed complex: {0}")]
    MalformedComplex(String),
    #[error("configuration exceeds hard cap: {0}")]
    CapExceeded(String),
}
