//! Loader for the TU graph-kernel plain-text dataset convention.
//!
//! The adjacency file lists global 1-based node pairs (`i, j`, one arc per
//! line); the indicator file maps each global node (by line number) to its
//! 1-based graph id. Molecular datasets distribute each undirected bond as
//! two opposing lines, so graphs are loaded with `undirected_origin = true`
//! and per-graph node ids re-densified to local 0-based ids.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use crate::error::LoadError;
use crate::graph::Graph;

/// Load a TU-format dataset from an adjacency file and an indicator file.
///
/// Graph order matches indicator order. The indicator must be
/// non-decreasing (all nodes of graph k precede those of graph k+1);
/// arcs crossing graph boundaries are rejected.
pub fn load_tu_dataset(
    adjacency_file: &Path,
    graph_indicator_file: &Path,
) -> Result<Vec<Graph>, LoadError> {
    let adjacency = File::open(adjacency_file)?;
    let indicator = File::open(graph_indicator_file)?;
    load_tu_from_readers(
        BufReader::new(adjacency),
        BufReader::new(indicator),
        &adjacency_file.display().to_string(),
        &graph_indicator_file.display().to_string(),
    )
}

/// Reader-based variant of [`load_tu_dataset`], usable on in-memory data.
pub fn load_tu_from_readers<A: Read, I: Read>(
    adjacency: BufReader<A>,
    indicator: BufReader<I>,
    adjacency_name: &str,
    indicator_name: &str,
) -> Result<Vec<Graph>, LoadError> {
    // graph_of[global_node_0based] = graph id (0-based).
    let mut graph_of: Vec<usize> = Vec::new();
    let mut graph_sizes: Vec<usize> = Vec::new();
    // Global id of each graph's first node, for re-densification.
    let mut graph_base: Vec<usize> = Vec::new();
    let mut last_graph = 0usize; // 1-based id of the most recent graph.
    for (lineno, line) in indicator.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let gid: usize = trimmed.parse().map_err(|_| LoadError::MalformedLine {
            file: indicator_name.to_string(),
            line: lineno + 1,
            reason: format!("expected a graph id, got {trimmed:?}"),
        })?;
        if gid == 0 {
            return Err(LoadError::MalformedLine {
                file: indicator_name.to_string(),
                line: lineno + 1,
                reason: "graph ids are 1-based".to_string(),
            });
        }
        if gid < last_graph || gid > last_graph + 1 {
            // A node for graph 2 before graph 1 completes, or a gap.
            return Err(LoadError::NonMonotonicIndicator { line: lineno + 1 });
        }
        if gid == last_graph + 1 {
            graph_sizes.push(0);
            graph_base.push(graph_of.len());
            last_graph = gid;
        }
        graph_of.push(gid - 1);
        graph_sizes[gid - 1] += 1;
    }

    let mut arcs_per_graph: Vec<Vec<(usize, usize)>> = vec![Vec::new(); graph_sizes.len()];
    for (lineno, line) in adjacency.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut parts = trimmed.split(',');
        let parse = |s: Option<&str>| -> Result<usize, LoadError> {
            s.map(str::trim)
                .filter(|s| !s.is_empty())
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| LoadError::MalformedLine {
                    file: adjacency_name.to_string(),
                    line: lineno + 1,
                    reason: format!("expected \"i, j\", got {trimmed:?}"),
                })
        };
        let i = parse(parts.next())?;
        let j = parse(parts.next())?;
        if parts.next().is_some() || i == 0 || j == 0 {
            return Err(LoadError::MalformedLine {
                file: adjacency_name.to_string(),
                line: lineno + 1,
                reason: format!("expected \"i, j\" with 1-based ids, got {trimmed:?}"),
            });
        }
        let (i, j) = (i - 1, j - 1);
        if i >= graph_of.len() {
            return Err(LoadError::NodeOutOfRange { node: i + 1, graph: 0 });
        }
        if j >= graph_of.len() {
            return Err(LoadError::NodeOutOfRange { node: j + 1, graph: 0 });
        }
        let gi = graph_of[i];
        if graph_of[j] != gi {
            return Err(LoadError::NodeOutOfRange {
                node: j + 1,
                graph: gi + 1,
            });
        }
        arcs_per_graph[gi].push((i - graph_base[gi], j - graph_base[gi]));
    }

    let mut graphs = Vec::with_capacity(graph_sizes.len());
    for (gi, arcs) in arcs_per_graph.iter().enumerate() {
        graphs.push(Graph::from_arcs(graph_sizes[gi], arcs, true)?);
    }
    Ok(graphs)
}

/// Serialize a graph list back to TU format: `(adjacency, indicator)`.
///
/// Every stored arc becomes one 1-based `i, j` line, so undirected graphs
/// emit both directions of each edge, matching the distributed files.
pub fn write_tu_dataset(graphs: &[Graph]) -> (String, String) {
    let mut adjacency = String::new();
    let mut indicator = String::new();
    let mut base = 0usize;
    for (gi, g) in graphs.iter().enumerate() {
        for _ in 0..g.node_count() {
            indicator.push_str(&format!("{}\n", gi + 1));
        }
        for &(u, v) in g.arcs() {
            adjacency.push_str(&format!("{}, {}\n", base + u + 1, base + v + 1));
        }
        base += g.node_count();
    }
    (adjacency, indicator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::BufReader;

    fn load(adj: &str, ind: &str) -> Result<Vec<Graph>, LoadError> {
        load_tu_from_readers(
            BufReader::new(adj.as_bytes()),
            BufReader::new(ind.as_bytes()),
            "adj",
            "ind",
        )
    }

    #[test]
    fn two_line_single_edge() {
        let graphs = load("1, 2\n2, 1\n", "1\n1\n").unwrap();
        assert_eq!(graphs.len(), 1);
        let g = &graphs[0];
        assert_eq!(g.node_count(), 2);
        assert!(g.undirected_origin());
        assert_eq!(g.arcs(), &[(0, 1), (1, 0)]);
    }

    #[test]
    fn re_densifies_per_graph_ids() {
        // Two triangles: nodes 1-3 in graph 1, nodes 4-6 in graph 2.
        let adj = "1, 2\n2, 1\n2, 3\n3, 2\n4, 5\n5, 4\n5, 6\n6, 5\n";
        let ind = "1\n1\n1\n2\n2\n2\n";
        let graphs = load(adj, ind).unwrap();
        assert_eq!(graphs.len(), 2);
        assert_eq!(graphs[0].arcs(), &[(0, 1), (1, 0), (1, 2), (2, 1)]);
        assert_eq!(graphs[1].arcs(), &[(0, 1), (1, 0), (1, 2), (2, 1)]);
    }

    #[test]
    fn rejects_out_of_order_indicator() {
        let err = load("1, 2\n2, 1\n", "2\n1\n").unwrap_err();
        assert!(matches!(err, LoadError::NonMonotonicIndicator { line: 1 }));
    }

    #[test]
    fn rejects_cross_graph_arc() {
        let err = load("1, 3\n", "1\n1\n2\n").unwrap_err();
        assert!(matches!(err, LoadError::NodeOutOfRange { .. }));
    }

    #[test]
    fn rejects_malformed_line() {
        let err = load("1 2\n", "1\n1\n").unwrap_err();
        assert!(matches!(err, LoadError::MalformedLine { line: 1, .. }));
    }

    #[test]
    fn idempotent_reload_via_json() {
        let graphs = load("1, 2\n2, 1\n2, 3\n3, 2\n", "1\n1\n1\n").unwrap();
        for g in &graphs {
            let json = g.to_json();
            assert_eq!(&Graph::from_json(&json).unwrap(), g);
        }
    }

    #[test]
    fn write_then_load_is_identity() {
        let adj = "1, 2\n2, 1\n2, 3\n3, 2\n4, 5\n5, 4\n";
        let ind = "1\n1\n1\n2\n2\n";
        let graphs = load(adj, ind).unwrap();
        let (adj2, ind2) = write_tu_dataset(&graphs);
        assert_eq!(load(&adj2, &ind2).unwrap(), graphs);
    }
}
