use thiserror::Error;

/// Errors surfaced by the arithmetic, field and census layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("range too large: {what} = {value} exceeds the cap {cap}")]
    RangeTooLarge { what: &'static str, value: u128, cap: u128 },
    #[error("invalid range: lo {lo} > hi {hi}")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("unsupported cyclotomic index {0} (tables cover 1..=12)")]
    UnsupportedIndex(u32),
    #[error("largest prime factor is undefined for 1")]
    UndefinedForUnit,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("field mismatch between operands")]
    FieldMismatch,
    #[error("zero element has no multiplicative order or norm")]
    ZeroElement,
    #[error("prime {0} is excluded for this polynomial")]
    ExcludedPrime(u64),
    #[error("group order {given} does not match field size minus one ({expected})")]
    GroupOrderMismatch { given: u128, expected: u128 },
    #[error("{ell} does not divide the group order {order}")]
    NonDivisor { ell: u128, order: u128 },
    #[error("search space {size} exceeds the cap {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
