use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),

    #[error("graph has {0} vertices, more than the supported maximum of {max}", max = crate::graph::MAX_VERTICES)]
    TooManyVertices(usize),

    #[error("edge ({0}, {1}) is already present")]
    EdgeExists(usize, usize),

    #[error("edge ({0}, {1}) is not present")]
    MissingEdge(usize, usize),

    #[error("operation requires a non-empty graph")]
    EmptyGraph,

    #[error("operation requires a connected graph")]
    Disconnected,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partition is not equitable: block {block} sees block {other} with differing counts")]
    NotEquitable { block: usize, other: usize },

    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("integer overflow while computing a characteristic polynomial")]
    Overflow,

    #[error("polynomial has no real root")]
    NoRealRoot,

    #[error("malformed graph6 string: {0}")]
    Graph6(String),

    #[error("malformed pattern `{0}`")]
    Pattern(String),

    #[error("m = {m} is outside the exhaustive enumeration range {lo}..={hi}")]
    OutsideEnvelope { m: usize, lo: usize, hi: usize },

    #[error("cache mismatch for key {key}: stored max_rho {stored}, recomputed {fresh}")]
    CacheMismatch { key: String, stored: f64, fresh: f64 },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("serialization error: {0}")]
    Serde(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
