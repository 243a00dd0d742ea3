use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precision mismatch: {0} vs {1}")]
    PrecisionMismatch(u32, u32),

    #[error("invalid precision {prec} (allowed 1..={max})")]
    InvalidPrecision { prec: u32, max: u32 },

    #[error("value {value:#x} does not fit in precision {prec}")]
    OutOfRange { value: u64, prec: u32 },

    #[error("not a unit")]
    NotUnit,

    #[error("division by zero")]
    DivisionByZero,

    #[error("inexact division")]
    InexactDivision,

    #[error("insufficient precision: need more than {need} coefficients, have {have}")]
    InsufficientPrecision { need: u32, have: u32 },

    #[error("H undefined at 0")]
    HUndefinedAtZero,

    #[error("precondition: {0}")]
    Precondition(String),

    #[error("coefficients are not 1-Lipschitz")]
    NotLipschitz,

    #[error("malformed cycle data: {0}")]
    MalformedCycleData(String),

    #[error("malformed table: {0}")]
    MalformedTable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
