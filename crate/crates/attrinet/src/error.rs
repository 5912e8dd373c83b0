use thiserror::Error;

/// Errors surfaced by model construction, theory solvers, generation and sampling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero or non-positive entry: {0}")]
    ZeroEntry(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("gamma must be 0 or 1, got {0}")]
    BadGamma(f64),
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("operation requires the tree case (all out-degrees one)")]
    NotTreeCase,
    #[error("fringe tree too large: size {size} exceeds cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("seed graph is empty")]
    EmptySeed,
    #[error("weight measure nu is required for the weighted model")]
    MissingNu,
    #[error("branching process population exceeded cap {0}")]
    ExplosionGuard(usize),
    #[error("graph is not a birth-ordered DAG: {0}")]
    CycleDetected(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("linear system is singular")]
    SingularSystem,
    #[error("validity conditions fail: {0}")]
    ConditionFailed(String),
    #[error("parameter hashes do not match: {0}")]
    HashMismatch(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
