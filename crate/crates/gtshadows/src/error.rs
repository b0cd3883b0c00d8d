use thiserror::Error;

use crate::braidq::RelationViolation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bad permutation: {0}")]
    BadPerm(String),

    #[error("bad word: {0}")]
    BadWord(String),

    #[error("symbol {symbol} is not in the {alphabet} alphabet")]
    AlphabetMismatch { symbol: String, alphabet: String },

    #[error("unassigned symbol {0} in substitution")]
    UnassignedSymbol(String),

    #[error("bad subgroup spec: {0}")]
    BadSpec(String),

    #[error("spec violates {} defining relation instance(s); first: {}", .0.len(), .0[0])]
    InvalidSpec(Vec<RelationViolation>),

    #[error("element cap {cap} exceeded after {reached} elements")]
    CapExceeded { cap: usize, reached: usize },

    #[error("{0}")]
    NotApplicable(String),
}
