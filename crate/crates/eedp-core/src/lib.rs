//! End-to-End DAG-Path (EEDP) graph flattening.
//!
//! Turns a graph into a textual description built around its main backbone
//! paths: a BFS-based DAG construction picks out endpoint nodes (zero
//! in-degree or zero out-degree), all simple paths of the original graph
//! between endpoint pairs are extracted, optionally merged into a compact
//! generalized-list form, and concatenated with an adjacency list. The crate
//! also ships the classic baseline flatteners (adjacency matrix/list, edge
//! list, ego-graph, walk sequences, GML, GraphML, natural language) and the
//! edge-prediction benchmark machinery used to compare them.

pub mod benchmark;
pub mod compress;
pub mod dag;
pub mod error;
pub mod flatten;
pub mod graph;
pub mod paths;
pub mod tu;

pub use benchmark::{
    dataset_stats, generate_merged_like, grade_cp, grade_dp, sample_cases, BenchmarkSet,
    DatasetStats, Task, TestCase,
};
pub use compress::{compress, expand, render, CompressedPathTree, Segment};
pub use dag::{build_eedp_dag, endpoints, is_acyclic, Dag, EndpointSet};
pub use error::{CompressError, FlattenError, GraphError, LoadError};
pub use flatten::{flatten, FlattenMethod, FlattenOptions, FlattenedGraph};
pub use graph::{Graph, HopBucket, NodeId, SimplePaths};
pub use paths::{extract_paths, DagPathMask, PathBundle, PathLimits};
pub use tu::{load_tu_dataset, write_tu_dataset};
