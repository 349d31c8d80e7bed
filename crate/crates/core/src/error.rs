use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("row {row} is not tropical: {detail}")]
    NonTropicalRow { row: usize, detail: String },
    #[error("point lies outside the cone or fan: {0}")]
    OutsideCone(String),
    #[error("function {function} is not linear on cone {cone:?}")]
    NotLinearOnCone { cone: Vec<usize>, function: usize },
    #[error("degenerate random draw: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
