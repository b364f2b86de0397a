//! Minimal readers for the lossless text formats.
//!
//! Each parser recovers the exact arc set (and where the format carries
//! it, the node count) from text emitted by the corresponding flattener.
//! They accept only this artifact's own emission subset and exist to prove
//! information soundness, not to read arbitrary files in the wild.

use crate::error::LoadError;
use crate::flatten::templates;
use crate::graph::NodeId;

fn malformed(format: &str, line: usize, reason: impl Into<String>) -> LoadError {
    LoadError::MalformedLine {
        file: format.to_string(),
        line,
        reason: reason.into(),
    }
}

/// Parse `{0: [1, 2], 3: [2]}` into an arc list.
pub fn parse_adj_list(text: &str) -> Result<Vec<(NodeId, NodeId)>, LoadError> {
    let body = text
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| malformed("adj-list", 1, "missing braces"))?;
    let mut arcs = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let colon = rest
            .find(':')
            .ok_or_else(|| malformed("adj-list", 1, "missing ':'"))?;
        let key: NodeId = rest[..colon]
            .trim()
            .parse()
            .map_err(|_| malformed("adj-list", 1, "bad key"))?;
        let open = rest
            .find('[')
            .ok_or_else(|| malformed("adj-list", 1, "missing '['"))?;
        let close = rest
            .find(']')
            .ok_or_else(|| malformed("adj-list", 1, "missing ']'"))?;
        for item in rest[open + 1..close].split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let v: NodeId = item
                .parse()
                .map_err(|_| malformed("adj-list", 1, "bad neighbor"))?;
            arcs.push((key, v));
        }
        rest = rest[close + 1..].trim_start_matches(',').trim();
    }
    arcs.sort_unstable();
    Ok(arcs)
}

/// Parse the adjacency-matrix text into `(node_count, arcs)`.
pub fn parse_adj_matrix(text: &str) -> Result<(usize, Vec<(NodeId, NodeId)>), LoadError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| malformed("adj-matrix", 1, "empty text"))?;
    if !header.starts_with(templates::MATRIX_NODES_PREFIX.trim_end()) {
        return Err(malformed("adj-matrix", 1, "missing node-range header"));
    }
    let mut arcs = Vec::new();
    let mut n = 0;
    for (u, line) in lines.enumerate() {
        for (v, cell) in line.split_whitespace().enumerate() {
            match cell {
                "0" => {}
                "1" => arcs.push((u, v)),
                other => {
                    return Err(malformed("adj-matrix", u + 2, format!("bad cell {other:?}")))
                }
            }
        }
        n = u + 1;
    }
    Ok((n, arcs))
}

/// Parse `(0, 1), (1, 2)` into an arc list.
pub fn parse_edge_list(text: &str) -> Result<Vec<(NodeId, NodeId)>, LoadError> {
    let mut arcs = Vec::new();
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(arcs);
    }
    for piece in trimmed.split("),") {
        let piece = piece
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .trim();
        let (u, v) = piece
            .split_once(',')
            .ok_or_else(|| malformed("edge-list", 1, "missing comma"))?;
        let u: NodeId = u
            .trim()
            .parse()
            .map_err(|_| malformed("edge-list", 1, "bad source"))?;
        let v: NodeId = v
            .trim()
            .parse()
            .map_err(|_| malformed("edge-list", 1, "bad target"))?;
        arcs.push((u, v));
    }
    arcs.sort_unstable();
    Ok(arcs)
}

/// Parse ego-graph lines into `(node_count, arcs)`.
pub fn parse_ego_graph(text: &str) -> Result<(usize, Vec<(NodeId, NodeId)>), LoadError> {
    let mut arcs = Vec::new();
    let mut n = 0;
    for (lineno, line) in text.lines().enumerate() {
        let rest = line
            .strip_prefix(templates::EGO_NODE_PREFIX)
            .ok_or_else(|| malformed("ego-graph", lineno + 1, "missing 'node' prefix"))?;
        let (u, list) = rest
            .split_once(':')
            .ok_or_else(|| malformed("ego-graph", lineno + 1, "missing ':'"))?;
        let u: NodeId = u
            .trim()
            .parse()
            .map_err(|_| malformed("ego-graph", lineno + 1, "bad node id"))?;
        n = n.max(u + 1);
        let list = list
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| malformed("ego-graph", lineno + 1, "missing brackets"))?;
        for item in list.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let v: NodeId = item
                .parse()
                .map_err(|_| malformed("ego-graph", lineno + 1, "bad neighbor"))?;
            arcs.push((u, v));
        }
    }
    arcs.sort_unstable();
    Ok((n, arcs))
}

/// Parse the one-sentence-per-arc natural-language form.
pub fn parse_natural_language(text: &str) -> Result<Vec<(NodeId, NodeId)>, LoadError> {
    let mut arcs = Vec::new();
    if text.trim() == templates::NATURAL_EMPTY {
        return Ok(arcs);
    }
    for (lineno, line) in text.lines().enumerate() {
        let rest = line
            .strip_prefix(templates::NATURAL_FROM)
            .ok_or_else(|| malformed("natural", lineno + 1, "unexpected sentence"))?;
        let (u, rest) = rest
            .split_once(templates::NATURAL_TO)
            .ok_or_else(|| malformed("natural", lineno + 1, "missing 'to node'"))?;
        let v = rest
            .strip_suffix('.')
            .ok_or_else(|| malformed("natural", lineno + 1, "missing period"))?;
        let u: NodeId = u
            .parse()
            .map_err(|_| malformed("natural", lineno + 1, "bad source"))?;
        let v: NodeId = v
            .parse()
            .map_err(|_| malformed("natural", lineno + 1, "bad target"))?;
        arcs.push((u, v));
    }
    arcs.sort_unstable();
    Ok(arcs)
}

/// Parse this artifact's GML subset into `(node_count, arcs, directed)`.
pub fn parse_gml(text: &str) -> Result<(usize, Vec<(NodeId, NodeId)>, bool), LoadError> {
    let mut nodes = Vec::new();
    let mut arcs = Vec::new();
    let mut directed = false;
    let mut tokens = text.split_whitespace();
    let mut context: Vec<&str> = Vec::new(); // open blocks: graph/node/edge
    let mut current_source: Option<NodeId> = None;
    let mut current_target: Option<NodeId> = None;
    while let Some(tok) = tokens.next() {
        match tok {
            "graph" | "node" | "edge" => {
                if tokens.next() != Some("[") {
                    return Err(malformed("gml", 1, format!("{tok} not followed by '['")));
                }
                context.push(tok);
            }
            "]" => match context.pop() {
                Some("edge") => match (current_source.take(), current_target.take()) {
                    (Some(u), Some(v)) => arcs.push((u, v)),
                    _ => return Err(malformed("gml", 1, "edge missing source/target")),
                },
                Some(_) => {}
                None => return Err(malformed("gml", 1, "unbalanced ']'")),
            },
            key @ ("id" | "source" | "target" | "directed") => {
                let val = tokens
                    .next()
                    .ok_or_else(|| malformed("gml", 1, format!("missing value for {key}")))?;
                let num: usize = val
                    .parse()
                    .map_err(|_| malformed("gml", 1, format!("bad value {val:?}")))?;
                match key {
                    "id" => nodes.push(num),
                    "source" => current_source = Some(num),
                    "target" => current_target = Some(num),
                    _ => directed = num == 1,
                }
            }
            other => return Err(malformed("gml", 1, format!("unexpected token {other:?}"))),
        }
    }
    if !context.is_empty() {
        return Err(malformed("gml", 1, "unclosed block"));
    }
    arcs.sort_unstable();
    Ok((nodes.len(), arcs, directed))
}

/// Parse this artifact's GraphML subset into `(node_count, arcs)`.
pub fn parse_graphml(text: &str) -> Result<(usize, Vec<(NodeId, NodeId)>), LoadError> {
    if !text.contains("xmlns=\"http://graphml.graphdrawing.org/xmlns\"") {
        return Err(malformed("graphml", 1, "missing graphml namespace"));
    }
    let mut nodes = 0usize;
    let mut arcs = Vec::new();
    let mut rest = text;
    while let Some(start) = rest.find('<') {
        let end = match rest[start..].find('>') {
            Some(e) => start + e,
            None => return Err(malformed("graphml", 1, "unterminated tag")),
        };
        let tag = &rest[start + 1..end];
        rest = &rest[end + 1..];
        if let Some(body) = tag.strip_prefix("node ") {
            let id = attr(body, "id")
                .and_then(|v| v.strip_prefix('n'))
                .and_then(|v| v.parse::<usize>().ok())
                .ok_or_else(|| malformed("graphml", 1, "bad node id"))?;
            nodes = nodes.max(id + 1);
        } else if let Some(body) = tag.strip_prefix("edge ") {
            let source = attr(body, "source")
                .and_then(|v| v.strip_prefix('n'))
                .and_then(|v| v.parse::<usize>().ok())
                .ok_or_else(|| malformed("graphml", 1, "bad edge source"))?;
            let target = attr(body, "target")
                .and_then(|v| v.strip_prefix('n'))
                .and_then(|v| v.parse::<usize>().ok())
                .ok_or_else(|| malformed("graphml", 1, "bad edge target"))?;
            arcs.push((source, target));
        }
    }
    arcs.sort_unstable();
    Ok((nodes, arcs))
}

fn attr<'a>(tag_body: &'a str, name: &str) -> Option<&'a str> {
    let probe = format!("{name}=\"");
    let start = tag_body.find(&probe)? + probe.len();
    let end = tag_body[start..].find('"')? + start;
    Some(&tag_body[start..end])
}
