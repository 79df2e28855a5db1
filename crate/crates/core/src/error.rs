use thiserror::Error;

/// Errors raised while building or decoding maps.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("pseudo-double wheel needs an even face count >= 6, got {0}")]
    BadFaceCount(usize),
    #[error("dart {0} appears {1} times in the rotation system")]
    DartMultiplicity(usize, usize),
    #[error("odd number of darts ({0})")]
    OddDarts(usize),
    #[error("vertex {0} has an empty rotation")]
    IsolatedVertex(usize),
    #[error("map is not connected")]
    Disconnected,
    #[error("Euler characteristic is {0}, expected 2")]
    NotSpherical(i64),
    #[error("adjacency is not symmetric between {0} and {1}")]
    Asymmetric(usize, usize),
    #[error("graph is not simple at vertex {0}")]
    NotSimple(usize),
    #[error("vertex id {0} out of range")]
    VertexOutOfRange(usize),
    #[error("planar code: {0}")]
    PlanarCode(String),
}

/// Errors raised by chart construction and decoding.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("corner at dart {0} is undecorated")]
    Undecorated(usize),
    #[error("face {face} does not match the tile shape: {why}")]
    TileShape { face: usize, why: String },
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("chart decode: {0}")]
    Decode(String),
}

/// Errors raised while loading pattern definitions.
#[derive(Debug, Error)]
pub enum PatternError {
    #[error("pattern json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("pattern io: {0}")]
    Io(#[from] std::io::Error),
    #[error("pattern {name}: {why}")]
    Invalid { name: String, why: String },
}

/// Errors raised by the numeric geometry.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("no tile closes with angles {0:?}")]
    NoTile([f64; 4]),
    #[error("realization fails to close: residual {residual:.3e} first at edge {edge:?}")]
    Closure { residual: f64, edge: Option<usize> },
    #[error("realization does not reproduce the map: {0}")]
    Combinatorics(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("no closing parameters found in the feasible region")]
    NoParameters,
    #[error(transparent)]
    Chart(#[from] ChartError),
}
