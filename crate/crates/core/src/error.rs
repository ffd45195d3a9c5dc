use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: negative weight {weight}")]
    NegativeWeight { line: usize, weight: f64 },
    #[error("line {line}: vertex index {index} out of range for n = {n}")]
    IndexOutOfRange { line: usize, index: usize, n: usize },
    #[error("line {line}: duplicate pair ({u}, {v})")]
    DuplicatePair { line: usize, u: usize, v: usize },
    #[error("empty graph: total weight of g is zero")]
    ZeroTotal,
    #[error("empty demand graph")]
    EmptyDemand,
    #[error("weight matrix is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("invalid weight at ({0}, {1})")]
    InvalidWeight(usize, usize),
    #[error("vertex count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("instance too large for oracle: n = {n} exceeds {max}")]
    TooLarge { n: usize, max: usize },
    #[error("no cut separates any demand")]
    NoFeasibleCut,
    #[error("demand graph is not rank-1 (max deviation {deviation:e})")]
    NotRankOne { deviation: f64 },
    #[error("degenerate pencil: demand Laplacian vanishes")]
    DegeneratePencil,
    #[error("constant vector has no threshold cut")]
    ConstantVector,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("embedding retry budget exhausted after {attempts} attempts")]
    EmbeddingBudget { attempts: usize },
    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    /// Solver-side failures as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::Solver(_) | Error::EmbeddingBudget { .. } | Error::Verification(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
