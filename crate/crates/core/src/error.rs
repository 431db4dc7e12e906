use thiserror::Error;

/// Errors raised by the field, matrix, enumeration and search layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {0} exceeds 65536")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields (q={left} vs q={right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("entry {value} is not an element of GF({q})")]
    InvalidEntry { value: u64, q: u32 },
    #[error("matrix rows have unequal lengths")]
    NotRectangular,
    #[error("matrix has rank {rank} but {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),
    #[error("the first {0} columns are linearly dependent")]
    NotSystematizable(usize),
    #[error("matrix is not in systematic form (I_k | R)")]
    NotSystematic,
    #[error("code length {n} exceeds what GF({q}) supports")]
    LengthExceedsField { n: usize, q: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("index {index} out of range for {what} (size {size})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },
    #[error("guard `{guard}` exceeded: needs {required}, limit is {limit}")]
    TooLarge {
        guard: &'static str,
        required: u64,
        limit: u64,
    },
    #[error("target is not in the column space of the matrix")]
    TargetUnreachable,
    #[error("target is the zero vector")]
    ZeroTarget,
    #[error("rates differ: {k1}/{n1} vs {k2}/{n2}")]
    RateMismatch { k1: usize, n1: usize, k2: usize, n2: usize },
    #[error("trial exceeded the draw cap of {0}")]
    DrawCapExceeded(u64),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
