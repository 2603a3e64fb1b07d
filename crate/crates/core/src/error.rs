//! Error type shared by every module in the crate.

use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An edge-list line did not split into `layer<TAB>source<TAB>target`.
    #[error("line {line}: expected `layer<TAB>source<TAB>target`, found {found} field(s)")]
    MalformedLine { line: usize, found: usize },

    /// An edge-list line declared an edge from a node to itself.
    #[error("line {line}: self-loop on node {label:?}")]
    SelfLoop { line: usize, label: String },

    /// A weighted-graph or partition file record could not be parsed.
    #[error("line {line}: {msg}")]
    MalformedRecord { line: usize, msg: String },

    #[error("unknown layer {0:?}")]
    UnknownLayer(String),

    #[error("unknown node label {0:?}")]
    UnknownNode(String),

    /// A self-loop was handed to a graph builder.
    #[error("self-loop on node {0:?}")]
    SelfEdge(String),

    /// Pair similarity was requested for a node against itself.
    #[error("similarity of node {0:?} with itself is undefined")]
    SelfPair(String),

    #[error("least-squares fit needs at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("operation requires at least {min} layer(s), got {got}")]
    TooFewLayers { got: usize, min: usize },

    #[error("line fit is not finite (k={k}, b={b})")]
    NonFiniteFit { k: f64, b: f64 },

    /// A fit with negative slope reached the rate function; the sorted-input
    /// contract guarantees k >= -1e-12, so this signals an unsorted fit.
    #[error("negative slope {0} from an unsorted fit")]
    NegativeSlope(f64),

    #[error("edge {a:?}-{b:?} has invalid weight {weight}")]
    BadWeight { a: String, b: String, weight: f64 },

    #[error("layer {layer:?} has invalid weight {weight}; weights must be positive")]
    InvalidWeight { layer: String, weight: f64 },

    #[error("layer weight map is empty")]
    EmptyWeights,

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("partition does not cover node {0:?}")]
    UncoveredNode(String),

    #[error("exhaustive search is limited to {max} nodes, graph has {got}")]
    TooManyNodes { got: usize, max: usize },

    #[error("node index {0} assigned to more than one community")]
    DuplicateAssignment(usize),

    #[error("essentiality community is empty")]
    EmptyCommunity,

    #[error("partition has no communities")]
    EmptyPartition,

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
