use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{BenchError, TrialRecord};
use crate::composer::Algorithm;
use crate::error::FormatError;

pub const TRIAL_COLUMNS: [&str; 9] = [
    "n_nodes",
    "trial",
    "seed",
    "algo",
    "feasible",
    "delivery_time_h",
    "exec_time_s",
    "subgraph_nodes",
    "labels_expanded",
];

pub const SUMMARY_COLUMNS: [&str; 8] = [
    "n_nodes",
    "algo",
    "runs",
    "feasible_rate",
    "mean_delivery_h",
    "mean_exec_s",
    "stddev_exec_s",
    "mean_gap_pct",
];

/// Aggregates for one (network size, algorithm) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub n_nodes: usize,
    pub algo: Algorithm,
    pub runs: usize,
    pub feasible_rate: f64,
    pub mean_delivery_h: Option<f64>,
    pub mean_exec_s: f64,
    pub stddev_exec_s: f64,
    /// Mean of `(heuristic - exhaustive) / exhaustive` in percent over trials
    /// where both found a plan; zero for the exhaustive rows.
    pub mean_gap_pct: Option<f64>,
    #[serde(skip)]
    pub median_delivery_h: Option<f64>,
    #[serde(skip)]
    pub stddev_delivery_h: Option<f64>,
    #[serde(skip)]
    pub median_exec_s: f64,
    #[serde(skip)]
    pub max_gap_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchReport {
    pub rows: Vec<SizeSummary>,
}

impl BenchReport {
    pub fn row(&self, n_nodes: usize, algo: Algorithm) -> Option<&SizeSummary> {
        self.rows.iter().find(|r| r.n_nodes == n_nodes && r.algo == algo)
    }

    /// Plain-text table for terminals.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:>7} {:>11} {:>5} {:>9} {:>13} {:>13} {:>10}\n",
            "n_nodes", "algo", "runs", "feasible", "delivery_h", "exec_ms", "gap_pct"
        );
        let opt = |v: Option<f64>, scale: f64| v.map_or("-".to_string(), |v| format!("{:.4}", v * scale));
        for r in &self.rows {
            out.push_str(&format!(
                "{:>7} {:>11} {:>5} {:>9.2} {:>13} {:>13.3} {:>10}\n",
                r.n_nodes,
                r.algo.to_string(),
                r.runs,
                r.feasible_rate,
                opt(r.mean_delivery_h, 1.0),
                r.mean_exec_s * 1e3,
                opt(r.mean_gap_pct, 1.0),
            ));
        }
        out
    }
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

// sample standard deviation; zero for fewer than two values
fn stddev(xs: &[f64]) -> Option<f64> {
    let m = mean(xs)?;
    if xs.len() < 2 {
        return Some(0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    Some((ss / (xs.len() - 1) as f64).sqrt())
}

fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len().is_multiple_of(2) {
        (v[mid - 1] + v[mid]) / 2.0
    } else {
        v[mid]
    })
}

/// Aggregates records per network size and algorithm, sizes in first-seen order.
pub fn summarize(records: &[TrialRecord]) -> BenchReport {
    let mut sizes: Vec<usize> = Vec::new();
    for r in records {
        if !sizes.contains(&r.n_nodes) {
            sizes.push(r.n_nodes);
        }
    }
    let mut rows = Vec::new();
    for n in sizes {
        // exhaustive delivery times keyed by trial, for the paired gap
        let baseline: BTreeMap<usize, f64> = records
            .iter()
            .filter(|r| r.n_nodes == n && r.algo == Algorithm::Exhaustive)
            .filter_map(|r| r.delivery_time_h.map(|d| (r.trial, d)))
            .collect();
        for algo in [Algorithm::Heuristic, Algorithm::Exhaustive] {
            let group: Vec<&TrialRecord> = records
                .iter()
                .filter(|r| r.n_nodes == n && r.algo == algo)
                .collect();
            if group.is_empty() {
                continue;
            }
            let delivery: Vec<f64> = group.iter().filter_map(|r| r.delivery_time_h).collect();
            let exec: Vec<f64> = group.iter().map(|r| r.exec_time_s).collect();
            let gaps: Vec<f64> = group
                .iter()
                .filter_map(|r| {
                    let d = r.delivery_time_h?;
                    let b = *baseline.get(&r.trial)?;
                    Some(if b > 0.0 { (d - b) / b * 100.0 } else { 0.0 })
                })
                .collect();
            rows.push(SizeSummary {
                n_nodes: n,
                algo,
                runs: group.len(),
                feasible_rate: delivery.len() as f64 / group.len() as f64,
                mean_delivery_h: mean(&delivery),
                mean_exec_s: mean(&exec).unwrap_or(0.0),
                stddev_exec_s: stddev(&exec).unwrap_or(0.0),
                mean_gap_pct: mean(&gaps),
                median_delivery_h: median(&delivery),
                stddev_delivery_h: stddev(&delivery),
                median_exec_s: median(&exec).unwrap_or(0.0),
                max_gap_pct: gaps.iter().copied().reduce(f64::max),
            });
        }
    }
    BenchReport { rows }
}

/// Writes `trials.csv` and `summary.csv` into `out_dir`.
pub fn emit_csv(records: &[TrialRecord], report: &BenchReport, out_dir: &Path) -> Result<(), BenchError> {
    if records.is_empty() {
        return Err(BenchError::NoRecords);
    }
    fs::create_dir_all(out_dir).map_err(|e| FormatError::io(out_dir, e))?;
    let mut w = csv::Writer::from_path(out_dir.join("trials.csv"))?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| FormatError::io(out_dir, e))?;

    let mut w = csv::Writer::from_path(out_dir.join("summary.csv"))?;
    for r in &report.rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| FormatError::io(out_dir, e))?;
    Ok(())
}

pub fn read_trials(path: &Path) -> Result<Vec<TrialRecord>, BenchError> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

/// Reads the columns written to `summary.csv`; fields not in the file are left empty.
pub fn read_summary(path: &Path) -> Result<Vec<SizeSummary>, BenchError> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}
