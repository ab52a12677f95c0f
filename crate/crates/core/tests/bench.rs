use std::fs;

use skyway_core::bench::{emit_csv, read_summary, read_trials, run_benchmark, summarize, TrialRecord};
use skyway_core::{Algorithm, Config};

fn quick_config(seed: u64) -> Config {
    let mut cfg = Config::default();
    cfg.experiment.node_counts = vec![10, 20, 30];
    cfg.experiment.seed = seed;
    cfg.experiment.timing_repeats = 1;
    cfg
}

fn without_time(records: &[TrialRecord]) -> Vec<TrialRecord> {
    records
        .iter()
        .map(|r| TrialRecord {
            exec_time_s: 0.0,
            ..r.clone()
        })
        .collect()
}

#[test]
fn trial_counts_follow_runs_fraction() {
    let cfg = quick_config(4);
    let (records, report) = run_benchmark(&cfg).unwrap();
    for (n, trials) in [(10, 5), (20, 10), (30, 15)] {
        for algo in [Algorithm::Heuristic, Algorithm::Exhaustive] {
            let count = records.iter().filter(|r| r.n_nodes == n && r.algo == algo).count();
            assert_eq!(count, trials, "n={n} {algo}");
            assert_eq!(report.row(n, algo).unwrap().runs, trials);
        }
    }
    assert_eq!(report.rows.len(), 6);
}

#[test]
fn paired_trials_share_instances_and_respect_optimality() {
    let (records, _) = run_benchmark(&quick_config(9)).unwrap();
    for pair in records.chunks(2) {
        let (h, e) = (&pair[0], &pair[1]);
        assert_eq!((h.algo, e.algo), (Algorithm::Heuristic, Algorithm::Exhaustive));
        assert_eq!((h.n_nodes, h.trial, h.seed), (e.n_nodes, e.trial, e.seed));
        assert_eq!(h.feasible, h.delivery_time_h.is_some());
        if let (Some(hd), Some(ed)) = (h.delivery_time_h, e.delivery_time_h) {
            assert!(hd >= ed - 1e-9);
        }
        // the heuristic is never less feasible: it ends on the full network
        assert_eq!(h.feasible, e.feasible);
        assert!(h.subgraph_nodes <= e.subgraph_nodes);
        assert!(h.exec_time_s >= 0.0 && e.exec_time_s >= 0.0);
    }
}

#[test]
fn same_seed_same_records() {
    let a = run_benchmark(&quick_config(11)).unwrap().0;
    let b = run_benchmark(&quick_config(11)).unwrap().0;
    assert_eq!(without_time(&a), without_time(&b));
    let c = run_benchmark(&quick_config(12)).unwrap().0;
    assert_ne!(without_time(&a), without_time(&c));
}

#[test]
fn parallel_sweep_matches_sequential_records() {
    let cfg = quick_config(5);
    let mut par = cfg.clone();
    par.experiment.parallel = true;
    let a = run_benchmark(&cfg).unwrap().0;
    let b = run_benchmark(&par).unwrap().0;
    assert_eq!(without_time(&a), without_time(&b));
}

#[test]
fn csv_round_trip_reproduces_summary_exactly() {
    let (records, report) = run_benchmark(&quick_config(2)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    emit_csv(&records, &report, dir.path()).unwrap();

    let trials = read_trials(&dir.path().join("trials.csv")).unwrap();
    assert_eq!(trials, records);
    let again = tempfile::tempdir().unwrap();
    emit_csv(&trials, &summarize(&trials), again.path()).unwrap();
    let first = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let second = fs::read_to_string(again.path().join("summary.csv")).unwrap();
    assert_eq!(first, second);

    let rows = read_summary(&dir.path().join("summary.csv")).unwrap();
    assert_eq!(rows.len(), report.rows.len());
    for (parsed, original) in rows.iter().zip(&report.rows) {
        assert_eq!(parsed.mean_exec_s, original.mean_exec_s);
        assert_eq!(parsed.mean_delivery_h, original.mean_delivery_h);
        assert_eq!(parsed.mean_gap_pct, original.mean_gap_pct);
        assert_eq!(parsed.feasible_rate, original.feasible_rate);
    }
}
