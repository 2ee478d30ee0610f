use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, PantherError>;

#[derive(Debug, Error)]
pub enum PantherError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: edge weight must be strictly positive, got {weight}")]
    NonPositiveWeight { line: usize, weight: f64 },

    #[error("vertex id {id} out of range (graph has {vertex_count} vertices)")]
    VertexOutOfRange { id: usize, vertex_count: usize },

    #[error("unknown vertex label {0:?}")]
    UnknownLabel(String),

    #[error("self-similarity query for vertex {0} is not supported")]
    SelfQuery(usize),

    #[error("invalid sampling budget: {0}")]
    InvalidBudget(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exact enumeration would visit ~{estimate:.3e} paths, over the {limit:.0e} budget")]
    OracleTooLarge { estimate: f64, limit: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("bad binary file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
