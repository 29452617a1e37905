use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain [{min}, {max}]: min must be strictly below max")]
    InvalidDomain { min: f64, max: f64 },

    #[error("value {value} lies outside the domain [{min}, {max}]")]
    OutOfDomain { value: f64, min: f64, max: f64 },

    #[error("triangle ({left}, {vertex}, {right}) violates left <= vertex <= right")]
    InvalidTriangle { left: f64, vertex: f64, right: f64 },

    #[error("vertices must be non-decreasing (vertex {index} = {value} follows {previous})")]
    UnsortedVertices { index: usize, value: f64, previous: f64 },

    #[error("vertex {index} = {value} lies outside the domain [{min}, {max}]")]
    VertexOutOfDomain { index: usize, value: f64, min: f64, max: f64 },

    #[error("input has {got} components, model expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("no samples supplied")]
    EmptySamples,

    #[error("length mismatch: {predictions} predictions vs {targets} targets")]
    LengthMismatch { predictions: usize, targets: usize },

    #[error("grid needs at least 2 points per axis, got {0}")]
    InvalidGridSize(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("operation counting requires an instrumented scalar type")]
    InstrumentationDisabled,

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
