use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in GF(2^{m})")]
    DivisionByZero { m: u32 },

    #[error("field degree {0} is outside the supported range 1..=16")]
    UnsupportedDegree(u32),

    #[error("reduction polynomial {poly:#b} is not an irreducible polynomial of degree {m}")]
    InvalidReductionPolynomial { m: u32, poly: u32 },

    #[error("value {value} is not an element of GF(2^{m})")]
    InvalidElement { m: u32, value: u32 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("power-sum witness needs a set containing a nonzero element")]
    DegenerateWitnessSet,

    #[error("no odd k <= {size} gives a nonzero power sum")]
    NoPowerSumWitness { size: usize },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("plan size {required} bits exceeds the configured cap of {cap}")]
    SizeCapExceeded { required: u128, cap: u128 },

    #[error("work cap exceeded: {required} subset evaluations required, cap is {cap}")]
    WorkCapExceeded { required: u128, cap: u128 },

    #[error("item index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("plan carries no usable field metadata")]
    MissingFieldMetadata,

    #[error("malformed plan: {0}")]
    MalformedPlan(String),

    #[error("malformed bit string: {0:?}")]
    MalformedBits(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
