//! BFS-based DAG construction and endpoint detection.
//!
//! The builder walks the input graph's arcs in breadth-first order and
//! selectively admits them into an acyclic subgraph over the same node set.
//! Endpoints are the resulting DAG's zero in-degree and zero out-degree
//! nodes; they anchor the backbone paths extracted later.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::{Graph, NodeId};

/// An oriented acyclic subgraph sharing its source graph's node set.
///
/// Invariants: every arc is an arc of the source graph, at most one of
/// `(u,v)` / `(v,u)` is present, a topological order exists, and a nonempty
/// DAG always has at least one source and one sink node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    node_count: usize,
    arcs: Vec<(NodeId, NodeId)>,
    graph_fingerprint: u64,
    guard_skips: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct DagJson {
    n: usize,
    directed: bool,
    arcs: Vec<(NodeId, NodeId)>,
    guard_skips: usize,
}

impl Dag {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Sorted arc list.
    pub fn arcs(&self) -> &[(NodeId, NodeId)] {
        &self.arcs
    }

    pub fn has_arc(&self, u: NodeId, v: NodeId) -> bool {
        self.arcs.binary_search(&(u, v)).is_ok()
    }

    /// Fingerprint of the graph this DAG was built from.
    pub fn graph_fingerprint(&self) -> u64 {
        self.graph_fingerprint
    }

    /// How many arcs the cycle guard rejected during construction.
    pub fn guard_skips(&self) -> usize {
        self.guard_skips
    }

    /// Serialize to the JSON graph format plus a `guard_skips` diagnostic.
    pub fn to_json(&self) -> String {
        let j = DagJson {
            n: self.node_count,
            directed: true,
            arcs: self.arcs.clone(),
            guard_skips: self.guard_skips,
        };
        serde_json::to_string(&j).expect("dag json is always serializable")
    }
}

/// Endpoint nodes of a DAG: zero in-degree sources, zero out-degree sinks.
///
/// Isolated nodes are both. `endpoints = sources ∪ sinks`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointSet {
    pub sources: BTreeSet<NodeId>,
    pub sinks: BTreeSet<NodeId>,
    pub endpoints: BTreeSet<NodeId>,
}

/// Build the oriented acyclic subgraph of `g`, seeded at `start`.
///
/// Arcs are traversed with a FIFO queue seeded with `start`'s out-arcs.
/// A dequeued arc is skipped when its tail is in both the `visited_heads`
/// and `future_heads` sets, admitted only when its reverse is not already
/// in the DAG, and additionally rejected (counted in `guard_skips`) if it
/// would close a directed cycle. Admitting an arc enqueues the tail's
/// out-arcs that are not yet in the DAG in ascending `(head, tail)` order.
///
/// After the seeded traversal exhausts, traversal restarts from the
/// lowest-id node not yet covered, so disconnected graphs still yield a
/// DAG over the full node set. Isolated nodes simply carry no arcs.
pub fn build_eedp_dag(g: &Graph, start: NodeId) -> Result<Dag, GraphError> {
    if g.node_count() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    if start >= g.node_count() {
        return Err(GraphError::InvalidNodeId {
            id: start,
            node_count: g.node_count(),
        });
    }

    let n = g.node_count();
    let out: Vec<Vec<NodeId>> = (0..n).map(|u| g.out_neighbors(u).collect()).collect();

    let mut dag: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    let mut dag_out: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut visited_heads = vec![false; n];
    let mut future_heads = vec![false; n];
    let mut covered = vec![false; n]; // appears as an endpoint of some dag arc
    let mut seeded = vec![false; n];
    let mut guard_skips = 0usize;
    let mut queue: VecDeque<(NodeId, NodeId)> = VecDeque::new();

    let mut pending = Some(start);
    loop {
        let seed = match pending.take() {
            Some(s) => s,
            None => {
                // Restart from the lowest-id node not yet reached, so the
                // DAG spans disconnected inputs too.
                match (0..n).find(|&v| !covered[v] && !seeded[v] && !out[v].is_empty()) {
                    Some(s) => s,
                    None => break,
                }
            }
        };
        seeded[seed] = true;
        for &t in &out[seed] {
            queue.push_back((seed, t));
        }
        future_heads[seed] = true;
        while let Some((head, tail)) = queue.pop_front() {
            if visited_heads[tail] && future_heads[tail] {
                continue;
            }
            if !dag.contains(&(tail, head)) {
                if dag_reaches(&dag_out, tail, head) {
                    // Admitting head->tail would close a directed cycle.
                    guard_skips += 1;
                } else {
                    if dag.insert((head, tail)) {
                        dag_out[head].push(tail);
                        covered[head] = true;
                        covered[tail] = true;
                    }
                    visited_heads[head] = true;
                }
            }
            let mut flag = false;
            for &next in &out[tail] {
                if !dag.contains(&(tail, next)) && !dag.contains(&(next, tail)) {
                    queue.push_back((tail, next));
                    flag = true;
                }
            }
            if flag {
                future_heads[tail] = true;
            }
        }
    }

    Ok(Dag {
        node_count: n,
        arcs: dag.into_iter().collect(),
        graph_fingerprint: g.fingerprint(),
        guard_skips,
    })
}

/// DFS reachability over the partial DAG's adjacency. Used by the cycle
/// guard before each arc insertion.
fn dag_reaches(dag_out: &[Vec<NodeId>], from: NodeId, to: NodeId) -> bool {
    if from == to {
        return true;
    }
    let mut seen = vec![false; dag_out.len()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(u) = stack.pop() {
        for &v in &dag_out[u] {
            if v == to {
                return true;
            }
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    false
}

/// Kahn's-algorithm acyclicity check: true iff all nodes are consumed.
pub fn is_acyclic(d: &Dag) -> bool {
    let n = d.node_count();
    let mut in_degree = vec![0usize; n];
    let mut out: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for &(u, v) in d.arcs() {
        in_degree[v] += 1;
        out[u].push(v);
    }
    let mut queue: VecDeque<NodeId> = (0..n).filter(|&v| in_degree[v] == 0).collect();
    let mut consumed = 0;
    while let Some(u) = queue.pop_front() {
        consumed += 1;
        for &v in &out[u] {
            in_degree[v] -= 1;
            if in_degree[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    consumed == n
}

/// Compute the endpoint set of a DAG from exact arc degrees.
pub fn endpoints(d: &Dag) -> EndpointSet {
    let n = d.node_count();
    let mut has_in = vec![false; n];
    let mut has_out = vec![false; n];
    for &(u, v) in d.arcs() {
        has_out[u] = true;
        has_in[v] = true;
    }
    let sources: BTreeSet<NodeId> = (0..n).filter(|&v| !has_in[v]).collect();
    let sinks: BTreeSet<NodeId> = (0..n).filter(|&v| !has_out[v]).collect();
    let endpoints = sources.union(&sinks).copied().collect();
    EndpointSet {
        sources,
        sinks,
        endpoints,
    }
}
