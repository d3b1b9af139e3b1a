use thiserror::Error;

use crate::frame::World;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("world {index} is out of range for a frame with {size} worlds")]
    WorldOutOfRange { index: World, size: usize },

    #[error("a frame needs at least one world")]
    EmptyFrame,

    #[error("frames are limited to {limit} worlds, got {size}")]
    TooLarge { size: usize, limit: usize },

    #[error("relation is not reflexive-transitive: pair ({0}, {1}) is missing")]
    NotClosed(World, World),

    #[error("frame is not rooted")]
    NotRooted,

    #[error("frame is not a rooted S4.1-frame")]
    NotS41,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("size {size} exceeds the configured ceiling of {ceiling}")]
    CeilingExceeded { size: usize, ceiling: usize },

    #[error("validity check needs 2^{bits} valuations, over the budget of {budget}")]
    BudgetExceeded { bits: u32, budget: u64 },

    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("collapse block {block} is invalid: {reason}")]
    BadBlock { block: usize, reason: String },

    #[error("malformed JSON: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
