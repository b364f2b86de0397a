//! Graph representation and exact structural oracles.
//!
//! Graphs are stored as a canonical sorted arc set over dense 0-based node
//! ids. Undirected inputs are represented by symmetric arc pairs so that
//! every algorithm downstream can treat arcs uniformly as directed.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Dense 0-based node identifier.
pub type NodeId = usize;

/// Shortest-distance category for benchmark sampling.
///
/// `H1`–`H3` are exact hop counts; `H5plus` admits any distance >= 5.
/// Distance-4 pairs fall in no bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HopBucket {
    H1,
    H2,
    H3,
    H5plus,
}

impl HopBucket {
    /// All buckets in canonical order.
    pub const ALL: [HopBucket; 4] = [
        HopBucket::H1,
        HopBucket::H2,
        HopBucket::H3,
        HopBucket::H5plus,
    ];

    /// Bucket for an (undirected) shortest distance, if any.
    pub fn from_distance(d: usize) -> Option<HopBucket> {
        match d {
            1 => Some(HopBucket::H1),
            2 => Some(HopBucket::H2),
            3 => Some(HopBucket::H3),
            d if d >= 5 => Some(HopBucket::H5plus),
            _ => None,
        }
    }

    /// Human-readable column label, matching report headers.
    pub fn label(&self) -> &'static str {
        match self {
            HopBucket::H1 => "1-hop",
            HopBucket::H2 => "2-hop",
            HopBucket::H3 => "3-hop",
            HopBucket::H5plus => "\u{2265}5-hop",
        }
    }
}

/// A directed graph over dense integer node ids.
///
/// Arcs are kept sorted by `(head, tail)` and deduplicated, so identical
/// inputs always produce identical in-memory and serialized forms. Graphs
/// loaded from undirected sources carry `undirected_origin = true` and a
/// symmetric arc set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    arcs: Vec<(NodeId, NodeId)>,
    undirected_origin: bool,
}

/// On-disk JSON form: `{"n": int, "directed": bool, "arcs": [[u,v],...]}`.
///
/// For undirected graphs only the `u < v` representative of each symmetric
/// arc pair is stored; loading restores the symmetric closure.
#[derive(Debug, Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    directed: bool,
    arcs: Vec<(NodeId, NodeId)>,
}

impl Graph {
    /// Build a graph from an arc list.
    ///
    /// With `undirected = true` each input pair is stored as two opposing
    /// arcs. Duplicates are removed and arcs are sorted so the result is
    /// canonical. Self-loops and out-of-range ids are rejected.
    pub fn from_arcs(
        node_count: usize,
        arcs: &[(NodeId, NodeId)],
        undirected: bool,
    ) -> Result<Graph, GraphError> {
        let mut all = Vec::with_capacity(if undirected { arcs.len() * 2 } else { arcs.len() });
        for &(u, v) in arcs {
            if u >= node_count {
                return Err(GraphError::InvalidNodeId {
                    id: u,
                    node_count,
                });
            }
            if v >= node_count {
                return Err(GraphError::InvalidNodeId {
                    id: v,
                    node_count,
                });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            all.push((u, v));
            if undirected {
                all.push((v, u));
            }
        }
        all.sort_unstable();
        all.dedup();
        Ok(Graph {
            node_count,
            arcs: all,
            undirected_origin: undirected,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Canonical sorted arc list.
    pub fn arcs(&self) -> &[(NodeId, NodeId)] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn undirected_origin(&self) -> bool {
        self.undirected_origin
    }

    /// Out-neighbors of `u` in ascending id order.
    pub fn out_neighbors(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let lo = self.arcs.partition_point(|&(h, _)| h < u);
        let hi = self.arcs.partition_point(|&(h, _)| h <= u);
        self.arcs[lo..hi].iter().map(|&(_, t)| t)
    }

    pub fn out_degree(&self, u: NodeId) -> usize {
        let lo = self.arcs.partition_point(|&(h, _)| h < u);
        let hi = self.arcs.partition_point(|&(h, _)| h <= u);
        hi - lo
    }

    pub fn has_arc(&self, u: NodeId, v: NodeId) -> bool {
        self.arcs.binary_search(&(u, v)).is_ok()
    }

    fn check_id(&self, id: NodeId) -> Result<(), GraphError> {
        if id >= self.node_count {
            Err(GraphError::InvalidNodeId {
                id,
                node_count: self.node_count,
            })
        } else {
            Ok(())
        }
    }

    /// Stable structural fingerprint (FNV-1a over node count, origin flag
    /// and the canonical arc list). Used to tie derived values (DAGs, path
    /// bundles) back to their source graph.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut mix = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        mix(self.node_count as u64);
        mix(self.undirected_origin as u64);
        for &(u, v) in &self.arcs {
            mix(u as u64);
            mix(v as u64);
        }
        h
    }

    /// Serialize to the minimal JSON graph format.
    pub fn to_json(&self) -> String {
        let arcs = if self.undirected_origin {
            self.arcs.iter().copied().filter(|&(u, v)| u < v).collect()
        } else {
            self.arcs.clone()
        };
        let j = GraphJson {
            n: self.node_count,
            directed: !self.undirected_origin,
            arcs,
        };
        serde_json::to_string(&j).expect("graph json is always serializable")
    }

    /// Parse the minimal JSON graph format.
    pub fn from_json(s: &str) -> Result<Graph, crate::error::LoadError> {
        let j: GraphJson = serde_json::from_str(s)?;
        Ok(Graph::from_arcs(j.n, &j.arcs, !j.directed)?)
    }
}

/// Result of simple-path enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplePaths {
    /// Paths in deterministic DFS order (neighbors ascending).
    pub paths: Vec<Vec<NodeId>>,
    /// True when enumeration hit `max_count` and stopped early.
    pub overflow: bool,
}

/// True iff a directed path `source -> target` exists.
///
/// `reachable(g, v, v)` is true by convention (length-0 path).
pub fn reachable(g: &Graph, source: NodeId, target: NodeId) -> Result<bool, GraphError> {
    g.check_id(source)?;
    g.check_id(target)?;
    if source == target {
        return Ok(true);
    }
    let mut seen = vec![false; g.node_count()];
    seen[source] = true;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for v in g.out_neighbors(u) {
            if v == target {
                return Ok(true);
            }
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    Ok(false)
}

/// BFS hop count from `source` to `target`, or `None` when unreachable.
///
/// With `respect_direction = false` arcs are traversed both ways; this is
/// the distance used for hop-bucket assignment.
pub fn shortest_distance(
    g: &Graph,
    source: NodeId,
    target: NodeId,
    respect_direction: bool,
) -> Result<Option<usize>, GraphError> {
    g.check_id(source)?;
    g.check_id(target)?;
    if source == target {
        return Ok(Some(0));
    }
    let mut dist = vec![usize::MAX; g.node_count()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let next = |v: NodeId, dist: &mut Vec<usize>, queue: &mut VecDeque<NodeId>| {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        };
        for v in g.out_neighbors(u) {
            next(v, &mut dist, &mut queue);
        }
        if !respect_direction {
            // In-neighbors; the arc list is sorted by head so scan is needed.
            for &(h, t) in g.arcs() {
                if t == u {
                    next(h, &mut dist, &mut queue);
                }
            }
        }
        if dist[target] != usize::MAX {
            return Ok(Some(dist[target]));
        }
    }
    Ok(if dist[target] == usize::MAX {
        None
    } else {
        Some(dist[target])
    })
}

/// All-pairs undirected distances in one sweep (BFS from every node over
/// the symmetrized arc set). `usize::MAX` marks unreachable pairs.
pub fn undirected_distances(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut sym: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for &(u, v) in g.arcs() {
        sym[u].push(v);
        sym[v].push(u);
    }
    for list in &mut sym {
        list.sort_unstable();
        list.dedup();
    }
    let mut out = Vec::with_capacity(n);
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &sym[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        out.push(dist);
    }
    out
}

/// Enumerate all simple directed paths `source -> target`.
///
/// Paths follow arc directions, never repeat a node, and are produced in
/// deterministic DFS order with neighbors visited in ascending id order.
/// `max_len` bounds the number of arcs per path; enumeration stops with
/// `overflow = true` once `max_count` paths have been collected.
pub fn all_simple_paths(
    g: &Graph,
    source: NodeId,
    target: NodeId,
    max_len: usize,
    max_count: usize,
) -> Result<SimplePaths, GraphError> {
    g.check_id(source)?;
    g.check_id(target)?;
    if source == target {
        // Length-0 path, consistent with `reachable(g, v, v) == true`.
        return Ok(SimplePaths {
            paths: vec![vec![source]],
            overflow: false,
        });
    }
    let adj: Vec<Vec<NodeId>> = (0..g.node_count())
        .map(|u| g.out_neighbors(u).collect())
        .collect();
    let mut paths = Vec::new();
    let mut overflow = false;
    let mut visited = vec![false; g.node_count()];
    visited[source] = true;
    let mut path = vec![source];
    // Explicit DFS stack of (node, next-neighbor index).
    let mut stack: Vec<(NodeId, usize)> = vec![(source, 0)];
    while let Some(&(u, idx)) = stack.last() {
        if idx >= adj[u].len() {
            stack.pop();
            path.pop();
            visited[u] = false;
            continue;
        }
        stack.last_mut().expect("nonempty").1 += 1;
        let v = adj[u][idx];
        // `path.len()` nodes means the path so far has `path.len() - 1`
        // arcs; appending v makes it `path.len()` arcs.
        if visited[v] || path.len() > max_len {
            continue;
        }
        if v == target {
            let mut p = path.clone();
            p.push(v);
            paths.push(p);
            if paths.len() >= max_count {
                overflow = true;
                break;
            }
            continue;
        }
        if path.len() < max_len {
            visited[v] = true;
            path.push(v);
            stack.push((v, 0));
        }
    }
    Ok(SimplePaths { paths, overflow })
}

/// True iff some simple directed path of exactly `k` arcs connects
/// `source` to `target`. Depth-bounded DFS; never materializes path sets.
pub fn simple_path_of_length_exists(
    g: &Graph,
    source: NodeId,
    target: NodeId,
    k: usize,
) -> Result<bool, GraphError> {
    g.check_id(source)?;
    g.check_id(target)?;
    if k == 0 {
        return Ok(source == target);
    }
    if k > g.node_count().saturating_sub(1) {
        return Ok(false);
    }
    let mut visited = vec![false; g.node_count()];
    visited[source] = true;
    let found = length_dfs(g, source, target, k, &mut visited);
    Ok(found)
}

fn length_dfs(
    g: &Graph,
    u: NodeId,
    target: NodeId,
    remaining: usize,
    visited: &mut [bool],
) -> bool {
    if remaining == 0 {
        return u == target;
    }
    for v in g.out_neighbors(u) {
        if visited[v] {
            continue;
        }
        if remaining == 1 {
            if v == target {
                return true;
            }
            continue;
        }
        visited[v] = true;
        if length_dfs(g, v, target, remaining - 1, visited) {
            visited[v] = false;
            return true;
        }
        visited[v] = false;
    }
    false
}
