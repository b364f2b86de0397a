//! Error types shared across the crate.

use thiserror::Error;

/// Errors from graph construction and structural queries.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node id {id} out of range for graph with {node_count} nodes")]
    InvalidNodeId { id: usize, node_count: usize },

    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(usize),

    #[error("graph is empty")]
    EmptyGraph,
}

/// Errors from dataset and file loading.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed line {line} in {file}: {reason}")]
    MalformedLine {
        file: String,
        line: usize,
        reason: String,
    },

    #[error("node {node} referenced outside its graph's indicator range (graph {graph})")]
    NodeOutOfRange { node: usize, graph: usize },

    #[error("graph indicator is not monotonically non-decreasing at line {line}")]
    NonMonotonicIndicator { line: usize },

    #[error("invalid json: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Errors from path-set compression.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompressError {
    #[error("cannot compress an empty path set")]
    EmptyInput,

    #[error("paths do not share the same start and end node")]
    MismatchedEndpoints,
}

/// Errors from flattening a graph to text.
#[derive(Debug, Error)]
pub enum FlattenError {
    #[error(transparent)]
    Graph(#[from] GraphError),

    #[error(transparent)]
    Compress(#[from] CompressError),

    #[error("invalid flatten options: {0}")]
    InvalidOptions(String),

    #[error("bundle and dag come from different graphs")]
    MismatchedProvenance,
}
