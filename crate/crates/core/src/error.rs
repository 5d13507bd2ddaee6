use thiserror::Error;

use crate::linalg::SupportSet;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} does not fit in 32 bits")]
    OrderOverflow { p: u32, m: u32 },
    #[error("modulus must be monic of degree {expected}, got {got:?}")]
    BadModulus { expected: u32, got: Vec<u32> },
    #[error("modulus {0:?} is reducible")]
    ReducibleModulus(Vec<u32>),
    #[error("value {value} is not an element of a field of order {order}")]
    NotAnElement { value: u64, order: u32 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero has no inverse")]
    InverseOfZero,
    #[error("{q} is not the order of a subfield of GF({order})")]
    NotASubfield { q: u32, order: u32 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("support indices must be strictly increasing")]
    UnsortedSupport,

    #[error("generator has rank {rank} but {rows} rows")]
    NotFullRank { rank: usize, rows: usize },
    #[error("code is not a subcode of the reference code")]
    NotSubcode,
    #[error("requested dimension {k} exceeds available dimension {max}")]
    DimensionTooLarge { k: usize, max: usize },
    #[error("locality profile does not fit length {n}: {reason}")]
    LocalityShape { n: usize, reason: String },
    #[error("coding vector must be nonzero")]
    ZeroCodingVector,

    #[error("field of order {q} is too small: need more than {needed} elements")]
    FieldTooSmall { q: u32, needed: u32 },
    #[error("stripe count {m} is smaller than twice the sparsity {eps}")]
    TooFewStripes { m: usize, eps: usize },
    #[error("no certified construction after {tries} tries (latest first violation: {witness:?})")]
    TriesExhausted { tries: usize, witness: Option<SupportSet> },
    #[error("extension property fails on {0}")]
    ExtensionPropertyViolated(SupportSet),
    #[error("sandwich necessary condition fails on core {0}")]
    SandwichConditionFails(SupportSet),
    #[error("construction produced a code that fails its certificate at {0:?}")]
    CertificateFailed(Option<SupportSet>),

    #[error("matrix is not a striped block-diagonal matrix")]
    NotStriped,
    #[error("no preimage of weight at most {w_max} for the received syndrome")]
    NoPreimage { w_max: usize },
    #[error("no {size}-core exists (rank {rank})")]
    NoCore { size: usize, rank: usize },
    #[error("subset scan of {subsets} sets exceeds the budget of {budget}")]
    BudgetExceeded { subsets: u128, budget: u128 },
    #[error("regime not covered: {0}")]
    UncoveredRegime(String),
}
