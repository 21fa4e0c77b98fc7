use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("basepoint must have exactly one child, found {0}")]
    BasepointDegree(usize),
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("tree is not subdivided for {strands} strands")]
    InsufficientSubdivision { strands: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cell budget exceeded: estimated {estimate} cells, budget {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
