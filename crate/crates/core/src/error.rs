use thiserror::Error;

/// Errors raised by tree construction, point handling and the verifiers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("tree description has no vertices")]
    EmptyTree,
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("edge {u}-{v} has non-positive or non-finite weight {w}")]
    NonPositiveWeight { u: String, v: String, w: f64 },
    #[error("edge {u}-{v} closes a cycle")]
    CycleDetected { u: String, v: String },
    #[error("tree is disconnected: {edges} edges for {vertices} vertices")]
    Disconnected { vertices: usize, edges: usize },
    #[error("no edge joins `{0}` and `{1}`")]
    NoSuchEdge(String, String),
    #[error("point is not on the tree: {0}")]
    PointNotOnTree(String),
    #[error("{what} = {value} is out of range")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("distance matrix is not symmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("distinct points {i} and {j} are mapped to coincident images")]
    Collapsed { i: usize, j: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
