//! Backbone path extraction: all simple paths of the ORIGINAL graph
//! between endpoint pairs, grouped per ordered pair.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dag::{Dag, EndpointSet};
use crate::error::FlattenError;
use crate::graph::{all_simple_paths, Graph, NodeId};

/// Truncation limits for path extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathLimits {
    /// Maximum arcs per path; `None` means `node_count - 1` (no pruning).
    pub max_len: Option<usize>,
    /// Maximum paths per endpoint pair.
    pub per_pair: usize,
    /// Global cap across all pairs.
    pub total: usize,
}

impl Default for PathLimits {
    fn default() -> Self {
        PathLimits {
            max_len: None,
            per_pair: 10_000,
            total: 100_000,
        }
    }
}

/// All extracted end-to-end simple paths, grouped by ordered endpoint pair.
///
/// Keys are `(start, end)` with `start != end`, both members of the
/// endpoint set; groups are nonempty and duplicate-free; paths are valid
/// simple paths of the original graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathBundle {
    pub groups: BTreeMap<(NodeId, NodeId), Vec<Vec<NodeId>>>,
    /// True when any per-pair or global cap truncated enumeration.
    pub overflow: bool,
    pub graph_fingerprint: u64,
}

#[derive(Serialize, Deserialize)]
struct BundlePairJson {
    start: NodeId,
    end: NodeId,
    paths: Vec<Vec<NodeId>>,
}

#[derive(Serialize, Deserialize)]
struct BundleJson {
    pairs: Vec<BundlePairJson>,
    overflow: bool,
}

impl PathBundle {
    /// Total number of paths across all groups.
    pub fn path_count(&self) -> usize {
        self.groups.values().map(Vec::len).sum()
    }

    /// JSON dump: `{"pairs": [{"start": a, "end": b, "paths": [...]}], "overflow": bool}`.
    pub fn to_json(&self) -> String {
        let pairs = self
            .groups
            .iter()
            .map(|(&(start, end), paths)| BundlePairJson {
                start,
                end,
                paths: paths.clone(),
            })
            .collect();
        serde_json::to_string(&BundleJson {
            pairs,
            overflow: self.overflow,
        })
        .expect("bundle json is always serializable")
    }

    /// Parse a JSON dump produced by [`PathBundle::to_json`]. The
    /// fingerprint of the originating graph is not stored in the dump.
    pub fn from_json(s: &str) -> Result<PathBundle, crate::error::LoadError> {
        let j: BundleJson = serde_json::from_str(s)?;
        let mut groups = BTreeMap::new();
        for pair in j.pairs {
            groups.insert((pair.start, pair.end), pair.paths);
        }
        Ok(PathBundle {
            groups,
            overflow: j.overflow,
            graph_fingerprint: 0,
        })
    }
}

/// Per-path flags marking which bundle paths also lie entirely in the DAG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DagPathMask {
    /// Parallel to `PathBundle::groups`: same keys, one flag per path.
    pub flags: BTreeMap<(NodeId, NodeId), Vec<bool>>,
}

/// Extract every group of simple paths between ordered endpoint pairs.
///
/// Pairs are enumerated ascending; extraction runs over the original
/// graph, not the DAG, so paths using arcs the orientation dropped still
/// appear. Empty groups are omitted. Truncation shows up in `overflow`
/// rather than as an error.
pub fn extract_paths(g: &Graph, ends: &EndpointSet, limits: PathLimits) -> PathBundle {
    let max_len = limits.max_len.unwrap_or(g.node_count().saturating_sub(1));
    let mut groups = BTreeMap::new();
    let mut overflow = false;
    let mut remaining = limits.total;
    'outer: for &a in &ends.endpoints {
        for &b in &ends.endpoints {
            if a == b {
                continue;
            }
            if remaining == 0 {
                overflow = true;
                break 'outer;
            }
            let cap = limits.per_pair.min(remaining);
            let res = all_simple_paths(g, a, b, max_len, cap)
                .expect("endpoint ids are valid by construction");
            overflow |= res.overflow;
            remaining -= res.paths.len();
            if !res.paths.is_empty() {
                groups.insert((a, b), res.paths);
            }
        }
    }
    PathBundle {
        groups,
        overflow,
        graph_fingerprint: g.fingerprint(),
    }
}

/// Mark the paths whose arcs are all present in the DAG.
pub fn classify_dag_paths(bundle: &PathBundle, dag: &Dag) -> Result<DagPathMask, FlattenError> {
    if bundle.graph_fingerprint != dag.graph_fingerprint() {
        return Err(FlattenError::MismatchedProvenance);
    }
    let flags = bundle
        .groups
        .iter()
        .map(|(&key, paths)| {
            let marks = paths
                .iter()
                .map(|p| p.windows(2).all(|w| dag.has_arc(w[0], w[1])))
                .collect();
            (key, marks)
        })
        .collect();
    Ok(DagPathMask { flags })
}
