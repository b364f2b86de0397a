//! Merge a group of simple paths sharing both endpoints into a compact
//! generalized-list form.
//!
//! One differential cursor per path: while every cursor sits on the same
//! node, that shared node is emitted once and all cursors advance. On
//! divergence the merger picks the earliest convergence node (scanning the
//! first path's remaining nodes) that every path still contains AND whose
//! merge stays exact — a candidate is passed over when grouping there
//! would make the branch expansion produce paths outside the input set.
//! The shared terminal node always qualifies, so the scan cannot fail.
//! Alternatives are flat node runs; branches never nest.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::CompressError;
use crate::graph::NodeId;

/// Rendered stand-in for an empty branch alternative (a direct hop between
/// the surrounding shared nodes).
pub const EMPTY_ALT_TOKEN: &str = "\u{03b5}";

/// One element of a compressed path sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Segment {
    /// A node every path passes through at this position.
    Node(NodeId),
    /// Alternative sub-sequences between two shared nodes. An empty
    /// alternative means a direct arc.
    Branch(Vec<Vec<NodeId>>),
}

/// A group's paths with shared parts merged.
///
/// The first and last segments are always shared nodes equal to the
/// group's endpoints, no branch has fewer than two alternatives, and
/// expanding the branches reproduces exactly the input path set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressedPathTree {
    pub segments: Vec<Segment>,
}

impl CompressedPathTree {
    pub fn start(&self) -> Option<NodeId> {
        match self.segments.first() {
            Some(&Segment::Node(v)) => Some(v),
            _ => None,
        }
    }

    pub fn end(&self) -> Option<NodeId> {
        match self.segments.last() {
            Some(&Segment::Node(v)) => Some(v),
            _ => None,
        }
    }

    /// JSON mirror of the segment structure.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.segments).expect("tree json is always serializable")
    }
}

/// Merge paths sharing a common start and end node.
///
/// Input paths must be nonempty simple paths agreeing on first and last
/// node; duplicates are tolerated and collapse.
pub fn compress(paths: &[Vec<NodeId>]) -> Result<CompressedPathTree, CompressError> {
    if paths.is_empty() || paths.iter().any(Vec::is_empty) {
        return Err(CompressError::EmptyInput);
    }
    debug_assert!(paths.iter().all(|p| {
        let set: BTreeSet<_> = p.iter().collect();
        set.len() == p.len()
    }));
    let first = paths[0][0];
    let last = *paths[0].last().expect("nonempty");
    if paths
        .iter()
        .any(|p| p[0] != first || *p.last().expect("nonempty") != last)
    {
        return Err(CompressError::MismatchedEndpoints);
    }

    // Work on deduplicated suffixes; dedup keeps first appearance.
    let mut work: Vec<Vec<NodeId>> = Vec::new();
    for p in paths {
        if !work.contains(p) {
            work.push(p.clone());
        }
    }

    let mut segments = Vec::new();
    loop {
        let head = work[0][0];
        if work.iter().all(|p| p[0] == head) {
            segments.push(Segment::Node(head));
            if work.iter().all(|p| p.len() == 1) {
                break;
            }
            // A shorter path ending here while others continue would have
            // violated the common-terminal precondition.
            for p in &mut work {
                p.remove(0);
            }
            continue;
        }
        // Divergence: scan the first path's nodes for the next shared,
        // exactly-mergeable convergence point. Its terminal always works.
        let (alternatives, rest) = split_at_convergence(&work);
        segments.push(Segment::Branch(alternatives));
        work = rest;
    }
    Ok(CompressedPathTree { segments })
}

/// Find the earliest sound convergence node and split the work set there.
///
/// Returns the deduplicated branch alternatives (first-appearance order)
/// and the deduplicated set of remaining suffixes, which all start at the
/// convergence node.
fn split_at_convergence(work: &[Vec<NodeId>]) -> (Vec<Vec<NodeId>>, Vec<Vec<NodeId>>) {
    'candidate: for &c in &work[0] {
        let mut prefixes: Vec<Vec<NodeId>> = Vec::new();
        let mut suffixes: Vec<Vec<NodeId>> = Vec::new();
        for p in work {
            // Paths are simple, so `c` occurs at most once.
            match p.iter().position(|&x| x == c) {
                Some(pos) => {
                    prefixes.push(p[..pos].to_vec());
                    suffixes.push(p[pos..].to_vec());
                }
                None => continue 'candidate,
            }
        }
        // The merge is exact only if every distinct prefix pairs with the
        // same set of suffixes; otherwise the branch cross-product would
        // invent paths that were never in the input.
        let distinct_prefixes: Vec<Vec<NodeId>> = dedup_keep_order(&prefixes);
        let mut suffix_sets: Vec<BTreeSet<&Vec<NodeId>>> = Vec::new();
        for dp in &distinct_prefixes {
            let set: BTreeSet<&Vec<NodeId>> = prefixes
                .iter()
                .zip(&suffixes)
                .filter(|(pre, _)| *pre == dp)
                .map(|(_, suf)| suf)
                .collect();
            suffix_sets.push(set);
        }
        if suffix_sets.windows(2).all(|w| w[0] == w[1]) {
            let rest = dedup_keep_order(&suffixes);
            return (distinct_prefixes, rest);
        }
    }
    unreachable!("the shared terminal node always admits an exact merge");
}

fn dedup_keep_order(items: &[Vec<NodeId>]) -> Vec<Vec<NodeId>> {
    let mut out: Vec<Vec<NodeId>> = Vec::new();
    for item in items {
        if !out.contains(item) {
            out.push(item.clone());
        }
    }
    out
}

/// Cartesian expansion of the tree back into concrete paths.
pub fn expand(tree: &CompressedPathTree) -> Vec<Vec<NodeId>> {
    let mut acc: Vec<Vec<NodeId>> = vec![Vec::new()];
    for seg in &tree.segments {
        match seg {
            Segment::Node(v) => {
                for p in &mut acc {
                    p.push(*v);
                }
            }
            Segment::Branch(alts) => {
                let mut next = Vec::with_capacity(acc.len() * alts.len());
                for p in &acc {
                    for alt in alts {
                        let mut q = p.clone();
                        q.extend_from_slice(alt);
                        next.push(q);
                    }
                }
                acc = next;
            }
        }
    }
    let mut seen = BTreeSet::new();
    acc.retain(|p| seen.insert(p.clone()));
    acc
}

/// Deterministic text rendering.
///
/// Grammar: `expr := seg (" -> " seg)*`, `seg := node | "(" alt (" | "
/// alt)* ")"`, `alt := node (" -> " node)* | EMPTY_ALT_TOKEN`.
pub fn render(tree: &CompressedPathTree) -> String {
    let mut parts = Vec::with_capacity(tree.segments.len());
    for seg in &tree.segments {
        match seg {
            Segment::Node(v) => parts.push(v.to_string()),
            Segment::Branch(alts) => {
                let rendered: Vec<String> = alts
                    .iter()
                    .map(|alt| {
                        if alt.is_empty() {
                            EMPTY_ALT_TOKEN.to_string()
                        } else {
                            alt.iter()
                                .map(ToString::to_string)
                                .collect::<Vec<_>>()
                                .join(" -> ")
                        }
                    })
                    .collect();
                parts.push(format!("({})", rendered.join(" | ")));
            }
        }
    }
    parts.join(" -> ")
}

/// Render a group of paths without merging, one path per line.
pub fn render_uncompressed(paths: &[Vec<NodeId>]) -> String {
    paths
        .iter()
        .map(|p| {
            p.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" -> ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn as_set(paths: &[Vec<NodeId>]) -> BTreeSet<Vec<NodeId>> {
        paths.iter().cloned().collect()
    }

    #[test]
    fn diamond_minimal() {
        let paths = vec![vec![0, 1, 3], vec![0, 2, 3]];
        let tree = compress(&paths).unwrap();
        assert_eq!(
            tree.segments,
            vec![
                Segment::Node(0),
                Segment::Branch(vec![vec![1], vec![2]]),
                Segment::Node(3),
            ]
        );
        assert_eq!(render(&tree), "0 -> (1 | 2) -> 3");
        assert_eq!(as_set(&expand(&tree)), as_set(&paths));
    }

    #[test]
    fn singleton_has_no_branches() {
        let paths = vec![vec![0, 1, 2]];
        let tree = compress(&paths).unwrap();
        assert_eq!(
            tree.segments,
            vec![Segment::Node(0), Segment::Node(1), Segment::Node(2)]
        );
        assert_eq!(render(&tree), "0 -> 1 -> 2");
    }

    #[test]
    fn direct_arc_uses_empty_alternative() {
        let paths = vec![vec![0, 1, 2], vec![0, 2]];
        let tree = compress(&paths).unwrap();
        assert_eq!(render(&tree), format!("0 -> (1 | {EMPTY_ALT_TOKEN}) -> 2"));
        assert_eq!(as_set(&expand(&tree)), as_set(&paths));
    }

    #[test]
    fn unsound_convergence_is_passed_over() {
        // Converging at 5 would cross-combine into the phantom path
        // [0,3,5,4,9]; the merger must fall through to the terminal.
        let paths = vec![vec![0, 1, 5, 2, 9], vec![0, 3, 5, 2, 9], vec![0, 1, 5, 4, 9]];
        let tree = compress(&paths).unwrap();
        assert_eq!(as_set(&expand(&tree)), as_set(&paths));
        assert_eq!(
            render(&tree),
            "0 -> (1 -> 5 -> 2 | 3 -> 5 -> 2 | 1 -> 5 -> 4) -> 9"
        );
    }

    #[test]
    fn factorizable_set_gets_multiple_branches() {
        let paths = vec![
            vec![0, 1, 5, 2, 9],
            vec![0, 1, 5, 4, 9],
            vec![0, 3, 5, 2, 9],
            vec![0, 3, 5, 4, 9],
        ];
        let tree = compress(&paths).unwrap();
        assert_eq!(render(&tree), "0 -> (1 | 3) -> 5 -> (2 | 4) -> 9");
        assert_eq!(as_set(&expand(&tree)), as_set(&paths));
    }

    #[test]
    fn no_single_alternative_branch() {
        let paths = vec![vec![0, 1, 2, 5], vec![0, 3, 4, 5], vec![0, 1, 4, 5]];
        let tree = compress(&paths).unwrap();
        for seg in &tree.segments {
            if let Segment::Branch(alts) = seg {
                assert!(alts.len() >= 2);
            }
        }
        assert_eq!(as_set(&expand(&tree)), as_set(&paths));
    }

    #[test]
    fn rejects_empty_and_mismatched() {
        assert_eq!(compress(&[]).unwrap_err(), CompressError::EmptyInput);
        let paths = vec![vec![0, 1], vec![0, 2]];
        assert_eq!(
            compress(&paths).unwrap_err(),
            CompressError::MismatchedEndpoints
        );
    }

    #[test]
    fn render_is_pure() {
        let paths = vec![vec![0, 1, 3], vec![0, 2, 3]];
        let tree = compress(&paths).unwrap();
        assert_eq!(render(&tree), render(&tree.clone()));
    }

    #[test]
    fn expand_removes_duplicates() {
        let tree = CompressedPathTree {
            segments: vec![
                Segment::Node(0),
                Segment::Branch(vec![vec![1], vec![1]]),
                Segment::Node(2),
            ],
        };
        assert_eq!(expand(&tree), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn json_mirrors_segments() {
        let paths = vec![vec![0, 1, 3], vec![0, 2, 3]];
        let tree = compress(&paths).unwrap();
        let json = tree.to_json();
        assert_eq!(json, "[0,[[1],[2]],3]");
        let back: Vec<Segment> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, tree.segments);
    }
}
