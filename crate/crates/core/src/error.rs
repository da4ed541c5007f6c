use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("value must be non-zero")]
    Zero,
    #[error("value must be odd, got {0}")]
    Even(String),
    #[error("polynomial syntax error at byte {pos}: {msg}")]
    PolySyntax { pos: usize, msg: String },
    #[error("duplicate exponent {0} in polynomial")]
    DuplicateExponent(u64),
    #[error("invalid decimal string {0:?}")]
    InvalidDecimal(String),
    #[error("{value} is not divisible by 2^{shift}")]
    NotDivisible { value: String, shift: u64 },
    #[error("subtraction underflow")]
    Underflow,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("identity violated: {0}")]
    Identity(String),
    #[error("node {0} is not in the graph")]
    UnknownNode(String),
    #[error("path from {0} is truncated before reaching 1")]
    TruncatedPath(String),
    #[error("worker count must be positive")]
    ZeroWorkers,
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
