//! Threaded benchmark execution with append-only, resumable results.
//!
//! Work items are (case, method) pairs. Up to `concurrency` workers share
//! a rate limiter; one writer drains the completion queue into the results
//! file. Grading and the returned record list are order-independent, so
//! reports come out identical regardless of scheduling.

use std::collections::{BTreeSet, HashMap};
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::sync::mpsc;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use eedp_core::benchmark::{grade_cp, grade_dp, BenchmarkSet, Task, TestCase};
use eedp_core::flatten::{flatten, FlattenMethod, FlattenOptions, FlattenedGraph};
use eedp_core::graph::Graph;

use crate::client::{AnswerClient, QueryContext, RateLimiter};
use crate::prompt::build_prompt;
use crate::tokenizer::TokenCounter;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("benchmark references graph {0} but only {1} graphs were provided")]
    MissingGraph(usize, usize),

    #[error("flattening failed: {0}")]
    Flatten(#[from] eedp_core::error::FlattenError),

    #[error("results file error: {0}")]
    Io(#[from] std::io::Error),

    #[error("corrupt results file line {line}: {reason}")]
    CorruptResults { line: usize, reason: String },
}

/// Parsed model output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParsedAnswer {
    #[serde(rename = "yes")]
    Yes,
    #[serde(rename = "no")]
    No,
    #[serde(rename = "number")]
    Number(i64),
    #[serde(rename = "malformed")]
    Malformed,
}

/// One graded query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub case: TestCase,
    pub method: FlattenMethod,
    pub raw: String,
    pub parsed: ParsedAnswer,
    pub correct: bool,
    pub malformed: bool,
    pub latency_ms: u64,
    pub prompt_tokens: usize,
    /// Client-side failure, when the query never produced an answer.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl EvalRecord {
    pub fn work_key(&self) -> (String, String) {
        (self.case.key(), self.method.name().to_string())
    }
}

/// Extract an answer from raw model text.
///
/// Connectivity: the first standalone "yes" or "no" (case-insensitive)
/// wins, so "Yes, node 3 is reachable." parses as yes and the "no" inside
/// "node" never matches. Distance: the first integer (including -1) wins.
/// Anything else is `Malformed`.
pub fn parse_answer(task: Task, raw: &str) -> ParsedAnswer {
    match task {
        Task::EpCp => {
            let lower = raw.to_lowercase();
            let bytes = lower.as_bytes();
            let standalone = |pos: usize, len: usize| {
                let before_ok = pos == 0 || !bytes[pos - 1].is_ascii_alphabetic();
                let after_ok =
                    pos + len >= bytes.len() || !bytes[pos + len].is_ascii_alphabetic();
                before_ok && after_ok
            };
            let find_word = |word: &str| {
                let mut start = 0;
                while let Some(rel) = lower[start..].find(word) {
                    let pos = start + rel;
                    if standalone(pos, word.len()) {
                        return Some(pos);
                    }
                    start = pos + 1;
                }
                None
            };
            match (find_word("yes"), find_word("no")) {
                (Some(y), Some(n)) => {
                    if y <= n {
                        ParsedAnswer::Yes
                    } else {
                        ParsedAnswer::No
                    }
                }
                (Some(_), None) => ParsedAnswer::Yes,
                (None, Some(_)) => ParsedAnswer::No,
                (None, None) => ParsedAnswer::Malformed,
            }
        }
        Task::EpDp => {
            let bytes = raw.as_bytes();
            let mut i = 0;
            while i < bytes.len() {
                if bytes[i].is_ascii_digit() {
                    let neg = i > 0 && bytes[i - 1] == b'-';
                    let start = if neg { i - 1 } else { i };
                    let mut j = i;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    return match raw[start..j].parse::<i64>() {
                        Ok(v) => ParsedAnswer::Number(v),
                        Err(_) => ParsedAnswer::Malformed,
                    };
                }
                i += 1;
            }
            ParsedAnswer::Malformed
        }
    }
}

fn grade(g: &Graph, case: &TestCase, parsed: ParsedAnswer) -> (bool, bool) {
    match case.task {
        Task::EpCp => match parsed {
            ParsedAnswer::Yes => (grade_cp(case, true), false),
            ParsedAnswer::No => (grade_cp(case, false), false),
            _ => (false, true),
        },
        Task::EpDp => match parsed {
            ParsedAnswer::Number(k) => {
                let outcome = grade_dp(g, case, k);
                (outcome.correct, outcome.malformed)
            }
            _ => (false, true),
        },
    }
}

/// Execution settings for a benchmark run.
pub struct RunSettings {
    pub methods: Vec<FlattenMethod>,
    pub flatten_opts: FlattenOptions,
    pub concurrency: usize,
    pub requests_per_minute: Option<u32>,
    /// Append-only JSONL results; completed (case, method) pairs found
    /// here are skipped on resume. `None` keeps results in memory only.
    pub results_path: Option<PathBuf>,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            methods: vec![FlattenMethod::Eedp],
            flatten_opts: FlattenOptions::default(),
            concurrency: 4,
            requests_per_minute: None,
            results_path: None,
        }
    }
}

/// Read existing records from a results file, if present.
pub fn read_results(path: &PathBuf) -> Result<Vec<EvalRecord>, RunError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let mut records = Vec::new();
    for (lineno, line) in BufReader::new(std::fs::File::open(path)?).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: EvalRecord =
            serde_json::from_str(&line).map_err(|e| RunError::CorruptResults {
                line: lineno + 1,
                reason: e.to_string(),
            })?;
        records.push(rec);
    }
    Ok(records)
}

/// Run every (case, method) pair of a benchmark against a client.
///
/// Returns all records (pre-existing plus new) in canonical order. Client
/// failures become records with an `error` field rather than aborting the
/// run.
pub fn run_benchmark(
    graphs: &[Graph],
    set: &BenchmarkSet,
    client: &dyn AnswerClient,
    tokenizer: &dyn TokenCounter,
    settings: &RunSettings,
) -> Result<Vec<EvalRecord>, RunError> {
    for case in &set.cases {
        if case.graph >= graphs.len() {
            return Err(RunError::MissingGraph(case.graph, graphs.len()));
        }
    }

    let mut records = match &settings.results_path {
        Some(path) => read_results(path)?,
        None => Vec::new(),
    };
    let done: BTreeSet<(String, String)> = records.iter().map(EvalRecord::work_key).collect();

    // Flatten each referenced graph once per method.
    let graph_ids: BTreeSet<usize> = set.cases.iter().map(|c| c.graph).collect();
    let mut flats: HashMap<(usize, FlattenMethod), Arc<FlattenedGraph>> = HashMap::new();
    for &gid in &graph_ids {
        for &method in &settings.methods {
            let flat = flatten(&graphs[gid], method, &settings.flatten_opts)?;
            flats.insert((gid, method), Arc::new(flat));
        }
    }

    let mut jobs: Vec<(&TestCase, FlattenMethod)> = Vec::new();
    for case in &set.cases {
        for &method in &settings.methods {
            if !done.contains(&(case.key(), method.name().to_string())) {
                jobs.push((case, method));
            }
        }
    }

    let limiter = RateLimiter::new(settings.requests_per_minute);
    let queue: Mutex<std::vec::IntoIter<(&TestCase, FlattenMethod)>> =
        Mutex::new(jobs.into_iter());
    let (tx, rx) = mpsc::channel::<EvalRecord>();

    let workers = settings.concurrency.max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            let tx = tx.clone();
            let queue = &queue;
            let limiter = &limiter;
            let flats = &flats;
            scope.spawn(move || loop {
                let job = queue.lock().expect("queue lock").next();
                let Some((case, method)) = job else { break };
                let g = &graphs[case.graph];
                let flat = &flats[&(case.graph, method)];
                let rec = build_prompt(flat, case, tokenizer);
                limiter.acquire();
                let ctx = QueryContext {
                    case,
                    graph: g,
                    method,
                };
                let started = Instant::now();
                let outcome = client.complete(&rec.prompt, &ctx);
                let latency_ms = started.elapsed().as_millis() as u64;
                let record = match outcome {
                    Ok(raw) => {
                        let parsed = parse_answer(case.task, &raw);
                        let (correct, malformed) = grade(g, case, parsed);
                        EvalRecord {
                            case: case.clone(),
                            method,
                            raw,
                            parsed,
                            correct,
                            malformed,
                            latency_ms,
                            prompt_tokens: rec.token_count,
                            error: None,
                        }
                    }
                    Err(e) => EvalRecord {
                        case: case.clone(),
                        method,
                        raw: String::new(),
                        parsed: ParsedAnswer::Malformed,
                        correct: false,
                        malformed: true,
                        latency_ms,
                        prompt_tokens: rec.token_count,
                        error: Some(e.to_string()),
                    },
                };
                if tx.send(record).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        // Single writer: append each completed record immediately so an
        // interrupted run loses at most the in-flight queries.
        let mut writer = match &settings.results_path {
            Some(path) => Some(OpenOptions::new().create(true).append(true).open(path)?),
            None => None,
        };
        for record in rx {
            if let Some(w) = writer.as_mut() {
                writeln!(w, "{}", serde_json::to_string(&record).expect("record"))?;
                w.flush()?;
            }
            records.push(record);
        }
        Ok::<(), RunError>(())
    })?;

    records.sort_by(|a, b| a.work_key().cmp(&b.work_key()));
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::client::OracleClient;
    use crate::tokenizer::HeuristicTokenizer;
    use eedp_core::benchmark::BenchmarkSet;
    use eedp_core::generate_merged_like;

    #[test]
    fn parse_cp_examples() {
        assert_eq!(parse_answer(Task::EpCp, "Yes, node 3 is reachable."), ParsedAnswer::Yes);
        assert_eq!(parse_answer(Task::EpCp, "Node 3 is reachable, yes."), ParsedAnswer::Yes);
        assert_eq!(parse_answer(Task::EpCp, "No."), ParsedAnswer::No);
        assert_eq!(parse_answer(Task::EpCp, "I cannot determine this."), ParsedAnswer::Malformed);
        assert_eq!(parse_answer(Task::EpCp, "maybe yes, maybe no"), ParsedAnswer::Yes);
    }

    #[test]
    fn parse_dp_examples() {
        assert_eq!(parse_answer(Task::EpDp, "The distance is 4."), ParsedAnswer::Number(4));
        assert_eq!(parse_answer(Task::EpDp, "-1"), ParsedAnswer::Number(-1));
        assert_eq!(parse_answer(Task::EpDp, "answer: -1."), ParsedAnswer::Number(-1));
        assert_eq!(parse_answer(Task::EpDp, "none"), ParsedAnswer::Malformed);
    }

    #[test]
    fn oracle_run_is_all_correct() {
        let graphs = generate_merged_like(6, 3);
        let set = BenchmarkSet::build(&graphs, "toy", 3, 4);
        let records = run_benchmark(
            &graphs,
            &set,
            &OracleClient,
            &HeuristicTokenizer,
            &RunSettings::default(),
        )
        .unwrap();
        assert_eq!(records.len(), set.cases.len());
        assert!(records.iter().all(|r| r.correct && !r.malformed));
    }

    fn no_latency(records: &[EvalRecord]) -> Vec<EvalRecord> {
        records
            .iter()
            .cloned()
            .map(|mut r| {
                r.latency_ms = 0;
                r
            })
            .collect()
    }

    #[test]
    fn resume_skips_completed_cases() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.jsonl");
        let graphs = generate_merged_like(4, 9);
        let set = BenchmarkSet::build(&graphs, "toy", 9, 4);
        let settings = RunSettings {
            results_path: Some(path.clone()),
            concurrency: 2,
            ..RunSettings::default()
        };

        let first = run_benchmark(&graphs, &set, &OracleClient, &HeuristicTokenizer, &settings)
            .unwrap();
        let lines_after_first = std::fs::read_to_string(&path).unwrap().lines().count();

        let second = run_benchmark(&graphs, &set, &OracleClient, &HeuristicTokenizer, &settings)
            .unwrap();
        let lines_after_second = std::fs::read_to_string(&path).unwrap().lines().count();

        assert_eq!(no_latency(&first), no_latency(&second));
        assert_eq!(lines_after_first, lines_after_second, "resume re-queried");
    }

    #[test]
    fn partial_results_resume_to_identical_set() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.jsonl");
        let graphs = generate_merged_like(4, 11);
        let set = BenchmarkSet::build(&graphs, "toy", 11, 4);
        let settings = RunSettings {
            results_path: Some(path.clone()),
            ..RunSettings::default()
        };

        let full = run_benchmark(&graphs, &set, &OracleClient, &HeuristicTokenizer, &settings)
            .unwrap();

        // Simulate an interrupted run: keep only half the result lines.
        let content = std::fs::read_to_string(&path).unwrap();
        let keep: Vec<&str> = content.lines().take(content.lines().count() / 2).collect();
        std::fs::write(&path, format!("{}\n", keep.join("\n"))).unwrap();

        let resumed = run_benchmark(&graphs, &set, &OracleClient, &HeuristicTokenizer, &settings)
            .unwrap();
        assert_eq!(no_latency(&full), no_latency(&resumed));
    }
}
