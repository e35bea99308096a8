use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("truncated series caps differ: {0} vs {1}")]
    CapMismatch(usize, usize),

    #[error("series has zero constant term and cannot be inverted")]
    NotInvertible,

    #[error("truncation cap {cap} is below the required {required}")]
    CapTooSmall { cap: usize, required: usize },

    #[error("invalid complete intersection: {0}")]
    InvalidIntersection(String),

    #[error("dimension {0} is odd; only even dimensions are supported here")]
    OddDimension(u32),

    #[error("dimension {m} is out of range: {reason}")]
    DimensionOutOfRange { m: u32, reason: String },

    #[error("repeated node value {0} in lambda configuration")]
    RepeatedLambda(String),

    #[error("lambda configuration has {got} entries, expected {expected}")]
    LambdaCount { got: usize, expected: usize },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("lambda values collide modulo {p}: {detail}; retry with a larger prime or a different lambda")]
    LambdaCollision { p: u64, detail: String },

    #[error("scan of {points} points exceeds budget {budget}; use a smaller prime or smaller m")]
    BudgetExceeded { points: u128, budget: u128 },

    #[error("point is not on the variety")]
    NotOnVariety,

    #[error("insertion index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("no admissible linear forms found modulo {p} after {attempts} draws")]
    NoGenericForms { p: u64, attempts: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}
