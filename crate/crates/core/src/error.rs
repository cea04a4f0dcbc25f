use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown graph name `{0}`")]
    UnknownGraph(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("graph has {n} vertices, enumeration limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("graph is not vertex- and edge-transitive")]
    NotTransitive,
    #[error("value {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("eigenvalue iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("not a projection: residual {0:e}")]
    NotProjection(f64),
    #[error("correlation violates {what}: residual {residual:e}")]
    Invalid { what: &'static str, residual: f64 },
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
