use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("invalid digit {digit:?} for radix {radix}")]
    InvalidDigit { digit: char, radix: u32 },
    #[error("radix {0} is out of range")]
    InvalidRadix(u64),
    #[error("value is negative")]
    NegativeValue,
    #[error("block {block} is outside [0, {limit})")]
    NonCanonicalBlock { block: i64, limit: i64 },
    #[error("digit {digit} is out of range for radix {radix}")]
    DigitOutOfRange { digit: i64, radix: u32 },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("radix mismatch: {left} vs {right}")]
    RadixMismatch { left: u32, right: u32 },
    #[error("operation requires radix 2, got {0}")]
    RadixNotBinary(u32),
    #[error("scissor decomposition requires a <= b, got {a} > {b}")]
    OrderViolation { a: i64, b: i64 },
    #[error("segment length {segment} makes block radix {radix}^{segment} too wide")]
    SegmentTooWide { radix: u32, segment: usize },
    #[error("split arity must be at least 2, got {0}")]
    InvalidArity(usize),
    #[error("threshold must be at least 1")]
    InvalidThreshold,
    #[error("need at least {needed} records, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("algorithm {algorithm} cannot multiply these operands: {reason}")]
    Unsupported {
        algorithm: &'static str,
        reason: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
