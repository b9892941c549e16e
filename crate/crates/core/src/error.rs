use thiserror::Error;

use crate::tom::AxiomReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("entry {position} is empty")]
    EmptyEntry { position: usize },
    #[error("letter {letter} is outside 1..={d}")]
    OutOfRange { letter: usize, d: usize },
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("parameter mismatch: ({n1},{d1}) vs ({n2},{d2})")]
    ParameterMismatch {
        n1: usize,
        d1: usize,
        n2: usize,
        d2: usize,
    },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("{a} is not componentwise contained in {b}")]
    NotSubset { a: String, b: String },
    #[error("{0} is not a member of the collection")]
    NotMember(String),
    #[error("{0} is not a total type")]
    NotTotal(String),
    #[error("collection is not a tropical oriented matroid")]
    NotATom(Box<AxiomReport>),
    #[error("cell {0} is not full-dimensional")]
    NotFullDim(String),
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operation requires d = 3, got d = {0}")]
    UnsupportedDimension(usize),
    #[error("invalid subdivision: {0}")]
    InvalidSubdivision(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
