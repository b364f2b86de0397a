//! Benchmark construction and grading for the two edge-prediction tasks.
//!
//! Test cases are node pairs bucketed by undirected shortest distance
//! (1, 2, 3, >=5 hops; distance 4 is never sampled), up to four pairs per
//! bucket per graph. Connectivity gold labels and shortest distances use
//! the directed oracles, so ordered pairs on directed graphs naturally
//! produce both "yes" and "no" cases.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::LoadError;
use crate::graph::{
    reachable, shortest_distance, simple_path_of_length_exists, undirected_distances, Graph,
    HopBucket, NodeId,
};

/// Schema tag embedded in benchmark files.
pub const BENCH_SCHEMA: &str = "eedp-bench/1";

/// Which question a case asks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Task {
    #[serde(rename = "EP_CP")]
    EpCp,
    #[serde(rename = "EP_DP")]
    EpDp,
}

impl Task {
    pub fn label(&self) -> &'static str {
        match self {
            Task::EpCp => "EP-CP",
            Task::EpDp => "EP-DP",
        }
    }
}

/// One benchmark query with its gold labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCase {
    pub graph: usize,
    pub src: NodeId,
    pub dst: NodeId,
    pub bucket: HopBucket,
    pub task: Task,
    pub gold_cp: bool,
    /// Directed shortest distance, or -1 when unreachable.
    pub gold_dp: i64,
}

impl TestCase {
    /// Stable identity for resumability bookkeeping.
    pub fn key(&self) -> String {
        format!(
            "{}:{}:{}:{:?}:{}",
            self.graph,
            self.src,
            self.dst,
            self.bucket,
            self.task.label()
        )
    }
}

/// A full benchmark: cases plus provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchmarkSet {
    pub dataset: String,
    pub seed: u64,
    pub cases: Vec<TestCase>,
    /// Sampled pairs per bucket (per task the counts are identical).
    pub per_bucket_counts: BTreeMap<HopBucket, usize>,
}

#[derive(Serialize, Deserialize)]
struct BenchHeader {
    schema: String,
    dataset: String,
    seed: u64,
}

impl BenchmarkSet {
    /// Build a benchmark over a graph list: up to `per_bucket` pairs per
    /// bucket per graph, cases for both tasks.
    pub fn build(graphs: &[Graph], dataset: &str, seed: u64, per_bucket: usize) -> BenchmarkSet {
        let mut cases = Vec::new();
        for (graph_id, g) in graphs.iter().enumerate() {
            cases.extend(sample_cases(g, graph_id, seed, per_bucket));
        }
        let mut per_bucket_counts = BTreeMap::new();
        for c in &cases {
            if c.task == Task::EpCp {
                *per_bucket_counts.entry(c.bucket).or_insert(0) += 1;
            }
        }
        BenchmarkSet {
            dataset: dataset.to_string(),
            seed,
            cases,
            per_bucket_counts,
        }
    }

    /// Serialize as JSON lines: one header record, then one case per line.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let header = BenchHeader {
            schema: BENCH_SCHEMA.to_string(),
            dataset: self.dataset.clone(),
            seed: self.seed,
        };
        writeln!(w, "{}", serde_json::to_string(&header).expect("header"))?;
        for case in &self.cases {
            writeln!(w, "{}", serde_json::to_string(case).expect("case"))?;
        }
        Ok(())
    }

    /// Read back a JSONL benchmark, validating the schema tag.
    pub fn read_jsonl<R: BufRead>(r: R) -> Result<BenchmarkSet, LoadError> {
        let mut lines = r.lines();
        let header_line = lines.next().transpose()?.ok_or_else(|| {
            LoadError::MalformedLine {
                file: "benchmark".to_string(),
                line: 1,
                reason: "empty file".to_string(),
            }
        })?;
        let header: BenchHeader = serde_json::from_str(&header_line)?;
        if header.schema != BENCH_SCHEMA {
            return Err(LoadError::MalformedLine {
                file: "benchmark".to_string(),
                line: 1,
                reason: format!("unsupported schema {:?}", header.schema),
            });
        }
        let mut cases = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            cases.push(serde_json::from_str(&line)?);
        }
        let mut per_bucket_counts = BTreeMap::new();
        for c in &cases {
            let case: &TestCase = c;
            if case.task == Task::EpCp {
                *per_bucket_counts.entry(case.bucket).or_insert(0) += 1;
            }
        }
        Ok(BenchmarkSet {
            dataset: header.dataset,
            seed: header.seed,
            cases,
            per_bucket_counts,
        })
    }
}

fn graph_rng(seed: u64, graph_id: usize) -> ChaCha8Rng {
    // splitmix64 over (seed, graph_id) so per-graph streams are independent
    // of iteration order.
    let mut z = seed ^ (graph_id as u64).wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}

/// Sample up to `per_bucket` ordered node pairs per hop bucket and emit a
/// case per task for each pair.
///
/// Candidates are all ordered pairs whose undirected shortest distance
/// falls in the bucket; when fewer than `per_bucket` exist, all are used.
/// Output order is canonical: bucket, then pair ascending.
pub fn sample_cases(g: &Graph, graph_id: usize, seed: u64, per_bucket: usize) -> Vec<TestCase> {
    let n = g.node_count();
    let dist = undirected_distances(g);
    let mut by_bucket: BTreeMap<HopBucket, Vec<(NodeId, NodeId)>> = BTreeMap::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || dist[u][v] == usize::MAX {
                continue;
            }
            if let Some(bucket) = HopBucket::from_distance(dist[u][v]) {
                by_bucket.entry(bucket).or_default().push((u, v));
            }
        }
    }
    let mut rng = graph_rng(seed, graph_id);
    let mut cases = Vec::new();
    for bucket in HopBucket::ALL {
        let Some(cands) = by_bucket.get_mut(&bucket) else {
            continue;
        };
        let k = per_bucket.min(cands.len());
        // Partial Fisher-Yates: the first k slots become the sample.
        for i in 0..k {
            let j = rng.gen_range(i..cands.len());
            cands.swap(i, j);
        }
        let mut chosen: Vec<(NodeId, NodeId)> = cands[..k].to_vec();
        chosen.sort_unstable();
        for (src, dst) in chosen {
            let gold_cp = reachable(g, src, dst).expect("valid ids");
            let gold_dp = match shortest_distance(g, src, dst, true).expect("valid ids") {
                Some(d) => d as i64,
                None => -1,
            };
            for task in [Task::EpCp, Task::EpDp] {
                cases.push(TestCase {
                    graph: graph_id,
                    src,
                    dst,
                    bucket,
                    task,
                    gold_cp,
                    gold_dp,
                });
            }
        }
    }
    cases
}

/// Grade a connectivity answer.
pub fn grade_cp(case: &TestCase, answer: bool) -> bool {
    answer == case.gold_cp
}

/// Outcome of grading a distance answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpGrade {
    pub correct: bool,
    /// Set when the answer is below -1, outside the task's answer space.
    pub malformed: bool,
}

/// Grade a distance answer: -1 is correct exactly for unreachable pairs;
/// otherwise any length realized by some simple directed path is accepted.
pub fn grade_dp(g: &Graph, case: &TestCase, answer: i64) -> DpGrade {
    if answer < -1 {
        return DpGrade {
            correct: false,
            malformed: true,
        };
    }
    let correct = if case.gold_dp == -1 {
        answer == -1
    } else if answer <= 0 {
        false
    } else {
        simple_path_of_length_exists(g, case.src, case.dst, answer as usize)
            .expect("case ids are valid")
    };
    DpGrade {
        correct,
        malformed: false,
    }
}

/// Aggregate statistics of a graph list, for dataset manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub graphs: usize,
    pub mean_nodes: f64,
    /// Mean arc count; on undirected-origin graphs each edge counts twice,
    /// matching the raw adjacency-line count of TU files.
    pub mean_arcs: f64,
}

pub fn dataset_stats(graphs: &[Graph]) -> DatasetStats {
    let n = graphs.len();
    if n == 0 {
        return DatasetStats {
            graphs: 0,
            mean_nodes: 0.0,
            mean_arcs: 0.0,
        };
    }
    let nodes: usize = graphs.iter().map(Graph::node_count).sum();
    let arcs: usize = graphs.iter().map(Graph::arc_count).sum();
    DatasetStats {
        graphs: n,
        mean_nodes: nodes as f64 / n as f64,
        mean_arcs: arcs as f64 / n as f64,
    }
}

/// Generate sparse directed graphs shaped like small concept-dependency
/// networks: a preferential-attachment tree backbone with occasional
/// extra forward arcs. Population means land near 13.16 nodes and 12.11
/// arcs per graph.
pub fn generate_merged_like(n_graphs: usize, seed: u64) -> Vec<Graph> {
    let mut graphs = Vec::with_capacity(n_graphs);
    for idx in 0..n_graphs {
        let mut rng = graph_rng(seed ^ 0x6d65726765645f31, idx);
        let n = rng.gen_range(7..=20);
        let mut arcs: Vec<(NodeId, NodeId)> = Vec::new();
        let mut out_degree = vec![0usize; n];
        for v in 1..n {
            if rng.gen_bool(0.95) {
                // Preferential flavor: weight earlier nodes by out-degree.
                let total: usize = out_degree[..v].iter().map(|d| d + 1).sum();
                let mut pick = rng.gen_range(0..total);
                let mut parent = 0;
                for (u, d) in out_degree[..v].iter().enumerate() {
                    let w = d + 1;
                    if pick < w {
                        parent = u;
                        break;
                    }
                    pick -= w;
                }
                arcs.push((parent, v));
                out_degree[parent] += 1;
            }
            if v >= 2 && rng.gen_bool(0.05) {
                let u = rng.gen_range(0..v);
                if !arcs.contains(&(u, v)) {
                    arcs.push((u, v));
                    out_degree[u] += 1;
                }
            }
        }
        graphs.push(Graph::from_arcs(n, &arcs, false).expect("generated arcs are valid"));
    }
    graphs
}
