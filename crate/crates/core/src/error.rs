use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at token `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("strand mismatch: expected {expected} strands, found {found}")]
    StrandMismatch { expected: usize, found: usize },

    #[error("generator x_{index} out of range for {strands} strands")]
    GeneratorOutOfRange { index: usize, strands: usize },

    #[error("closure is a link, not a knot (cycle type {cycle_type:?})")]
    NotAKnot { cycle_type: Vec<usize> },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("split diagram: column {0} never occurs in the braid word")]
    SplitDiagram(usize),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("report error: {0}")]
    Report(String),
}

pub type Result<T> = std::result::Result<T, Error>;
