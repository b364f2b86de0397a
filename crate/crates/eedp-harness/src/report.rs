//! Accuracy aggregation in the per-bucket table layout.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use eedp_core::benchmark::Task;
use eedp_core::flatten::FlattenMethod;
use eedp_core::graph::HopBucket;

use crate::runner::EvalRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Cell {
    pub correct: usize,
    pub total: usize,
}

impl Cell {
    pub fn accuracy(&self) -> Option<f64> {
        if self.total == 0 {
            None
        } else {
            Some(100.0 * self.correct as f64 / self.total as f64)
        }
    }
}

/// One (method, task) line of the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub method: FlattenMethod,
    pub task: Task,
    pub buckets: BTreeMap<HopBucket, Cell>,
    /// Pooled over all buckets, not bucket-averaged.
    pub total: Cell,
    pub malformed: usize,
    pub mean_prompt_tokens: f64,
}

/// Aggregated accuracy per (method, task, bucket) plus token accounting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub record_count: usize,
    /// Mean prompt tokens per method over every record of that method.
    pub mean_tokens_per_method: BTreeMap<FlattenMethod, f64>,
}

/// Group records by (method, task) and bucket; pooled totals.
pub fn aggregate(records: &[EvalRecord]) -> Report {
    let mut rows: BTreeMap<(FlattenMethod, Task), ReportRow> = BTreeMap::new();
    let mut token_sums: BTreeMap<FlattenMethod, (usize, usize)> = BTreeMap::new();
    for rec in records {
        let row = rows
            .entry((rec.method, rec.case.task))
            .or_insert_with(|| ReportRow {
                method: rec.method,
                task: rec.case.task,
                buckets: BTreeMap::new(),
                total: Cell::default(),
                malformed: 0,
                mean_prompt_tokens: 0.0,
            });
        let cell = row.buckets.entry(rec.case.bucket).or_default();
        cell.total += 1;
        row.total.total += 1;
        if rec.correct {
            cell.correct += 1;
            row.total.correct += 1;
        }
        if rec.malformed {
            row.malformed += 1;
        }
        let (sum, n) = token_sums.entry(rec.method).or_insert((0, 0));
        *sum += rec.prompt_tokens;
        *n += 1;
    }

    // Per-row token means over that method's records (both tasks share the
    // method mean; per-row mean recomputed below for exactness).
    let mut per_row_tokens: BTreeMap<(FlattenMethod, Task), (usize, usize)> = BTreeMap::new();
    for rec in records {
        let entry = per_row_tokens
            .entry((rec.method, rec.case.task))
            .or_insert((0, 0));
        entry.0 += rec.prompt_tokens;
        entry.1 += 1;
    }
    for (key, row) in rows.iter_mut() {
        let (sum, n) = per_row_tokens[key];
        row.mean_prompt_tokens = sum as f64 / n as f64;
    }

    Report {
        rows: rows.into_values().collect(),
        record_count: records.len(),
        mean_tokens_per_method: token_sums
            .into_iter()
            .map(|(m, (sum, n))| (m, sum as f64 / n as f64))
            .collect(),
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Fixed-width table with the columns
    /// `1-hop 2-hop 3-hop >=5-hop Total`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<28} {:<6} {:>8} {:>8} {:>8} {:>8} {:>8} {:>7} {:>10} {:>11}\n",
            "Method",
            "Task",
            HopBucket::H1.label(),
            HopBucket::H2.label(),
            HopBucket::H3.label(),
            HopBucket::H5plus.label(),
            "Total",
            "Cases",
            "Malformed",
            "MeanTokens"
        ));
        for row in &self.rows {
            let fmt_bucket = |b: HopBucket| match row.buckets.get(&b).and_then(Cell::accuracy) {
                Some(acc) => format!("{acc:.2}"),
                None => "-".to_string(),
            };
            out.push_str(&format!(
                "{:<28} {:<6} {:>8} {:>8} {:>8} {:>8} {:>8} {:>7} {:>10} {:>11.1}\n",
                row.method.name(),
                row.task.label(),
                fmt_bucket(HopBucket::H1),
                fmt_bucket(HopBucket::H2),
                fmt_bucket(HopBucket::H3),
                fmt_bucket(HopBucket::H5plus),
                row.total
                    .accuracy()
                    .map(|a| format!("{a:.2}"))
                    .unwrap_or_else(|| "-".to_string()),
                row.total.total,
                row.malformed,
                row.mean_prompt_tokens,
            ));
        }
        if self.rows.is_empty() {
            out.push_str("(no records)\n");
        }
        out
    }
}
