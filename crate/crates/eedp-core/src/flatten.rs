//! Textual graph representations: the end-to-end DAG-path format with its
//! ablation variants, plus the nine baseline flatteners.
//!
//! All templates are centralized here; every method is a pure function of
//! `(graph, options, seed)` and yields byte-identical text on repeated
//! calls.

pub mod parse;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compress::{compress, render, render_uncompressed};
use crate::dag::{build_eedp_dag, endpoints};
use crate::error::FlattenError;
use crate::graph::{Graph, NodeId};
use crate::paths::{classify_dag_paths, extract_paths, PathLimits};

/// Every fixed text fragment the flatteners emit, in one place so the
/// formats can be revised without touching logic. The parsers in
/// [`parse`] consume the same constants.
pub mod templates {
    /// Header line above the backbone-path section of the EEDP text.
    pub const PATHS_HEADER: &str = "Main paths:";
    /// Header line above the adjacency-list section of the EEDP text.
    pub const ADJLIST_HEADER: &str = "Adjacency list:";
    /// Node-range line above the adjacency matrix.
    pub const MATRIX_NODES_PREFIX: &str = "Nodes: ";
    /// Node-range line for a graph without nodes.
    pub const MATRIX_NODES_EMPTY: &str = "Nodes: none";
    /// Prefix of each ego-graph line.
    pub const EGO_NODE_PREFIX: &str = "node ";
    /// Pieces of the one-sentence-per-arc form.
    pub const NATURAL_FROM: &str = "There is a directed edge from node ";
    pub const NATURAL_TO: &str = " to node ";
    pub const NATURAL_END: &str = ".";
    pub const NATURAL_EMPTY: &str = "The graph has no edges.";
}

pub use templates::{ADJLIST_HEADER, PATHS_HEADER};

/// Every supported flattening method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlattenMethod {
    Eedp,
    EedpNoAdjlist,
    /// Paths dropped entirely; identical to [`FlattenMethod::AdjList`].
    EedpNoPaths,
    /// Adjacency list dropped and DAG-subset paths filtered out.
    EedpNoAdjlistNoDagPaths,
    AdjMatrix,
    AdjList,
    EdgeList,
    EgoGraph,
    WalkSeq,
    Gml,
    GraphMl,
    Natural,
}

impl FlattenMethod {
    pub const ALL: [FlattenMethod; 12] = [
        FlattenMethod::Eedp,
        FlattenMethod::EedpNoAdjlist,
        FlattenMethod::EedpNoPaths,
        FlattenMethod::EedpNoAdjlistNoDagPaths,
        FlattenMethod::AdjMatrix,
        FlattenMethod::AdjList,
        FlattenMethod::EdgeList,
        FlattenMethod::EgoGraph,
        FlattenMethod::WalkSeq,
        FlattenMethod::Gml,
        FlattenMethod::GraphMl,
        FlattenMethod::Natural,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FlattenMethod::Eedp => "eedp",
            FlattenMethod::EedpNoAdjlist => "eedp-no-adjlist",
            FlattenMethod::EedpNoPaths => "eedp-no-paths",
            FlattenMethod::EedpNoAdjlistNoDagPaths => "eedp-no-adjlist-no-dagpaths",
            FlattenMethod::AdjMatrix => "adj-matrix",
            FlattenMethod::AdjList => "adj-list",
            FlattenMethod::EdgeList => "edge-list",
            FlattenMethod::EgoGraph => "ego-graph",
            FlattenMethod::WalkSeq => "walk-seq",
            FlattenMethod::Gml => "gml",
            FlattenMethod::GraphMl => "graphml",
            FlattenMethod::Natural => "natural",
        }
    }

    pub fn from_name(name: &str) -> Option<FlattenMethod> {
        FlattenMethod::ALL.iter().copied().find(|m| m.name() == name)
    }
}

/// Knobs for the EEDP pipeline and the seeded baselines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlattenOptions {
    /// Merge each endpoint pair's paths into the generalized-list form.
    pub compress_paths: bool,
    /// Append the adjacency-list section.
    pub include_adjlist: bool,
    /// Include the backbone-path section.
    pub include_paths: bool,
    /// Drop paths that also lie in the DAG (ablation).
    pub drop_dag_paths: bool,
    /// Seed for walk-sequence generation.
    pub walk_seed: u64,
    /// Maximum nodes per walk sequence.
    pub walk_max_len: usize,
    /// DAG construction start node.
    pub dag_start: NodeId,
    /// Per-pair path cap.
    pub max_paths_per_pair: usize,
    /// Global path cap.
    pub max_paths_total: usize,
}

impl Default for FlattenOptions {
    fn default() -> Self {
        FlattenOptions {
            compress_paths: false,
            include_adjlist: true,
            include_paths: true,
            drop_dag_paths: false,
            walk_seed: 0,
            walk_max_len: 5,
            dag_start: 0,
            max_paths_per_pair: PathLimits::default().per_pair,
            max_paths_total: PathLimits::default().total,
        }
    }
}

impl FlattenOptions {
    fn validate(&self) -> Result<(), FlattenError> {
        if !self.include_paths && self.drop_dag_paths {
            return Err(FlattenError::InvalidOptions(
                "drop_dag_paths requires include_paths".to_string(),
            ));
        }
        if self.walk_max_len == 0 {
            return Err(FlattenError::InvalidOptions(
                "walk_max_len must be positive".to_string(),
            ));
        }
        Ok(())
    }

    fn limits(&self) -> PathLimits {
        PathLimits {
            max_len: None,
            per_pair: self.max_paths_per_pair,
            total: self.max_paths_total,
        }
    }
}

/// A graph rendered to text by one method.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlattenedGraph {
    pub method: FlattenMethod,
    pub text: String,
    /// Heuristic token count of `text`; harness tokenizers may recount.
    pub token_count: usize,
    pub compressed: bool,
    pub graph_fingerprint: u64,
}

/// Byte-length/4 token estimate (rounded up), used when no tokenizer is
/// configured.
pub fn heuristic_token_count(text: &str) -> usize {
    text.len().div_ceil(4)
}

impl FlattenedGraph {
    fn new(method: FlattenMethod, text: String, compressed: bool, g: &Graph) -> FlattenedGraph {
        FlattenedGraph {
            method,
            token_count: heuristic_token_count(&text),
            text,
            compressed,
            graph_fingerprint: g.fingerprint(),
        }
    }
}

/// Dispatch a method name to its flattener, normalizing ablation options.
pub fn flatten(
    g: &Graph,
    method: FlattenMethod,
    opts: &FlattenOptions,
) -> Result<FlattenedGraph, FlattenError> {
    let mut o = opts.clone();
    match method {
        FlattenMethod::Eedp => {
            o.include_adjlist = true;
            o.include_paths = true;
            o.drop_dag_paths = false;
        }
        FlattenMethod::EedpNoAdjlist => {
            o.include_adjlist = false;
            o.include_paths = true;
            o.drop_dag_paths = false;
        }
        FlattenMethod::EedpNoPaths => {
            o.include_adjlist = true;
            o.include_paths = false;
            o.drop_dag_paths = false;
        }
        FlattenMethod::EedpNoAdjlistNoDagPaths => {
            o.include_adjlist = false;
            o.include_paths = true;
            o.drop_dag_paths = true;
        }
        _ => {}
    }
    let mut flat = match method {
        FlattenMethod::Eedp
        | FlattenMethod::EedpNoAdjlist
        | FlattenMethod::EedpNoPaths
        | FlattenMethod::EedpNoAdjlistNoDagPaths => flatten_eedp(g, &o)?,
        FlattenMethod::AdjMatrix => flatten_adj_matrix(g),
        FlattenMethod::AdjList => flatten_adj_list(g),
        FlattenMethod::EdgeList => flatten_edge_list(g),
        FlattenMethod::EgoGraph => flatten_ego_graph(g),
        FlattenMethod::WalkSeq => flatten_walk_sequence_with(g, o.walk_seed, o.walk_max_len),
        FlattenMethod::Gml => flatten_gml(g),
        FlattenMethod::GraphMl => flatten_graphml(g),
        FlattenMethod::Natural => flatten_natural_language(g),
    };
    flat.method = method;
    Ok(flat)
}

/// The full EEDP pipeline: DAG, endpoints, backbone paths, optional
/// compression, optional adjacency list, concatenated under fixed headers.
///
/// With `include_paths = false` the output is byte-identical to
/// [`flatten_adj_list`].
pub fn flatten_eedp(g: &Graph, opts: &FlattenOptions) -> Result<FlattenedGraph, FlattenError> {
    opts.validate()?;
    if !opts.include_paths {
        let mut flat = flatten_adj_list(g);
        flat.method = FlattenMethod::Eedp;
        return Ok(flat);
    }
    let dag = build_eedp_dag(g, opts.dag_start)?;
    let ends = endpoints(&dag);
    let bundle = extract_paths(g, &ends, opts.limits());
    let mask = if opts.drop_dag_paths {
        Some(classify_dag_paths(&bundle, &dag)?)
    } else {
        None
    };

    let mut lines: Vec<String> = vec![PATHS_HEADER.to_string()];
    for (&(a, b), paths) in &bundle.groups {
        // On undirected-origin graphs the reverse group mirrors this one;
        // render each unordered pair once.
        if g.undirected_origin() && a > b && bundle.groups.contains_key(&(b, a)) {
            continue;
        }
        let kept: Vec<Vec<NodeId>> = match &mask {
            Some(m) => paths
                .iter()
                .zip(&m.flags[&(a, b)])
                .filter(|(_, &in_dag)| !in_dag)
                .map(|(p, _)| p.clone())
                .collect(),
            None => paths.clone(),
        };
        if kept.is_empty() {
            continue;
        }
        if opts.compress_paths {
            let tree = compress(&kept)?;
            lines.push(render(&tree));
        } else {
            lines.push(render_uncompressed(&kept));
        }
    }
    let mut text = lines.join("\n");
    if opts.include_adjlist {
        text.push('\n');
        text.push_str(ADJLIST_HEADER);
        text.push('\n');
        text.push_str(&adj_list_text(g));
    }
    Ok(FlattenedGraph::new(
        FlattenMethod::Eedp,
        text,
        opts.compress_paths,
        g,
    ))
}

fn adj_list_text(g: &Graph) -> String {
    let mut entries = Vec::new();
    for u in 0..g.node_count() {
        let outs: Vec<String> = g.out_neighbors(u).map(|v| v.to_string()).collect();
        if outs.is_empty() {
            continue;
        }
        entries.push(format!("{}: [{}]", u, outs.join(", ")));
    }
    format!("{{{}}}", entries.join(", "))
}

/// Dictionary-style adjacency list. Keys are nodes with at least one
/// out-arc in ascending order; nodes without out-arcs are omitted.
pub fn flatten_adj_list(g: &Graph) -> FlattenedGraph {
    FlattenedGraph::new(FlattenMethod::AdjList, adj_list_text(g), false, g)
}

/// 0/1 adjacency matrix, one row per line, after a node-range line.
pub fn flatten_adj_matrix(g: &Graph) -> FlattenedGraph {
    let n = g.node_count();
    let mut lines = Vec::with_capacity(n + 1);
    if n == 0 {
        lines.push(templates::MATRIX_NODES_EMPTY.to_string());
    } else {
        lines.push(format!("{}0..{}", templates::MATRIX_NODES_PREFIX, n - 1));
    }
    for u in 0..n {
        let mut row = vec![b'0'; n];
        for v in g.out_neighbors(u) {
            row[v] = b'1';
        }
        let cells: Vec<String> = row.iter().map(|&c| (c as char).to_string()).collect();
        lines.push(cells.join(" "));
    }
    FlattenedGraph::new(FlattenMethod::AdjMatrix, lines.join("\n"), false, g)
}

/// `(u, v)` pairs in ascending order, comma-separated.
pub fn flatten_edge_list(g: &Graph) -> FlattenedGraph {
    let text = g
        .arcs()
        .iter()
        .map(|&(u, v)| format!("({u}, {v})"))
        .collect::<Vec<_>>()
        .join(", ");
    FlattenedGraph::new(FlattenMethod::EdgeList, text, false, g)
}

/// One line per node describing its 1-hop out-neighborhood.
pub fn flatten_ego_graph(g: &Graph) -> FlattenedGraph {
    let lines: Vec<String> = (0..g.node_count())
        .map(|u| {
            let outs: Vec<String> = g.out_neighbors(u).map(|v| v.to_string()).collect();
            format!("{}{}: [{}]", templates::EGO_NODE_PREFIX, u, outs.join(", "))
        })
        .collect();
    FlattenedGraph::new(FlattenMethod::EgoGraph, lines.join("\n"), false, g)
}

/// One uniform random walk per start node, capped at `walk_max_len`
/// nodes (default 5), stopping early at nodes with no out-arcs.
pub fn flatten_walk_sequence(g: &Graph, seed: u64) -> FlattenedGraph {
    flatten_walk_sequence_with(g, seed, 5)
}

pub fn flatten_walk_sequence_with(g: &Graph, seed: u64, max_len: usize) -> FlattenedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::with_capacity(g.node_count());
    for start in 0..g.node_count() {
        let mut walk = vec![start];
        let mut cur = start;
        while walk.len() < max_len {
            let outs: Vec<NodeId> = g.out_neighbors(cur).collect();
            if outs.is_empty() {
                break;
            }
            cur = outs[rng.gen_range(0..outs.len())];
            walk.push(cur);
        }
        lines.push(
            walk.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" -> "),
        );
    }
    FlattenedGraph::new(FlattenMethod::WalkSeq, lines.join("\n"), false, g)
}

/// Minimal Graph Modelling Language emission with 2-space indentation.
pub fn flatten_gml(g: &Graph) -> FlattenedGraph {
    let mut out = String::from("graph [\n  directed 1\n");
    for v in 0..g.node_count() {
        out.push_str(&format!("  node [\n    id {v}\n  ]\n"));
    }
    for &(u, v) in g.arcs() {
        out.push_str(&format!("  edge [\n    source {u}\n    target {v}\n  ]\n"));
    }
    out.push(']');
    FlattenedGraph::new(FlattenMethod::Gml, out, false, g)
}

/// Minimal GraphML emission: standard namespace, one `<node>` per node,
/// one `<edge>` per arc.
pub fn flatten_graphml(g: &Graph) -> FlattenedGraph {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\"\n\
         \x20   xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\"\n\
         \x20   xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns \
         http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n\
         \x20 <graph id=\"G\" edgedefault=\"directed\">\n",
    );
    for v in 0..g.node_count() {
        out.push_str(&format!("    <node id=\"n{v}\"/>\n"));
    }
    for &(u, v) in g.arcs() {
        out.push_str(&format!("    <edge source=\"n{u}\" target=\"n{v}\"/>\n"));
    }
    out.push_str("  </graph>\n</graphml>");
    FlattenedGraph::new(FlattenMethod::GraphMl, out, false, g)
}

/// One sentence per arc, ascending order.
pub fn flatten_natural_language(g: &Graph) -> FlattenedGraph {
    let text = if g.arcs().is_empty() {
        templates::NATURAL_EMPTY.to_string()
    } else {
        g.arcs()
            .iter()
            .map(|&(u, v)| {
                format!(
                    "{}{u}{}{v}{}",
                    templates::NATURAL_FROM,
                    templates::NATURAL_TO,
                    templates::NATURAL_END
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    FlattenedGraph::new(FlattenMethod::Natural, text, false, g)
}
