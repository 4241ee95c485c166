use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("minimal polynomial must have degree >= 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("minimal polynomial is not squarefree (zero discriminant)")]
    ZeroDiscriminant,
    #[error("minimal polynomial is not irreducible: {0}")]
    NotIrreducible(String),
    #[error("elements belong to different number fields")]
    FieldMismatch,
    #[error("element has {got} coefficients, field degree is {expected}")]
    WrongLength { expected: usize, got: usize },

    #[error("no totally split prime found below {ceiling}")]
    SearchLimitExceeded { ceiling: u64 },
    #[error("invalid prime {p}: {reason}")]
    InvalidPrime { p: u64, reason: String },

    #[error("field degree {degree} does not equal r + 1 = {expected}")]
    DegreeMismatch { degree: usize, expected: u32 },
    #[error("prime {0} is not totally split in the field")]
    NotSplit(u64),
    #[error("invalid code parameters: {0}")]
    InvalidParams(String),
    #[error("not a good split code (margin {margin})")]
    NotGood { margin: BigRational },
    #[error("no set of ideals exceeds the norm bound")]
    Unsatisfiable,
    #[error("M_l = {0} is below 2; increase l")]
    MTooSmall(BigInt),

    #[error("payload of {bits} bits exceeds capacity of {capacity} bits")]
    CapacityExceeded { bits: u64, capacity: u64 },
    #[error("group {group} has {present} usable symbols, need {needed}")]
    InsufficientLocalData { group: usize, present: usize, needed: usize },
    #[error("solvable groups cover {covered}, which does not exceed M^(s+1) = {needed}")]
    InsufficientGlobalData { covered: BigInt, needed: BigInt },
    #[error("codeword is inconsistent: {0}")]
    Inconsistent(String),
    #[error("decoded coefficient is outside [0, M^(s+1))")]
    OutOfRange,
    #[error("malformed codeword: {0}")]
    Malformed(String),

    #[error("{count} messages exceeds the enumeration limit {limit}")]
    TooLarge { count: BigInt, limit: u64 },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("serialization: {0}")]
    Serde(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
