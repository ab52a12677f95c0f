//! Benchmark sweep: both composers on identical random instances across
//! network sizes, timed, validated by replay, and aggregated.

mod replay;
mod report;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use replay::{replay, ReplayViolation, Timeline, TimelineEntry, Violation, CLOCK_TOLERANCE};
pub use report::{
    emit_csv, read_summary, read_trials, summarize, BenchReport, SizeSummary, SUMMARY_COLUMNS,
    TRIAL_COLUMNS,
};

use crate::composer::{compose_heuristic, Algorithm, Diagnostics, Stopwatch};
use crate::config::Config;
use crate::drone::Package;
use crate::error::{ComposeError, FormatError, NetworkError, ScheduleError};
use crate::exhaustive::compose_exhaustive;
use crate::net::{generate_network, Bounds, NodeId, SkywayNetwork};
use crate::plan::{CompositionPlan, DeliveryRequest};
use crate::station::{generate_schedule, OccupancySchedule};

/// One composer run on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n_nodes: usize,
    pub trial: usize,
    pub seed: u64,
    pub algo: Algorithm,
    pub feasible: bool,
    pub delivery_time_h: Option<f64>,
    pub exec_time_s: f64,
    pub subgraph_nodes: usize,
    pub labels_expanded: u64,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("network generation failed for n={n}: {source}")]
    Network { n: usize, source: NetworkError },
    #[error("schedule generation failed for n={n}: {source}")]
    Schedule { n: usize, source: ScheduleError },
    #[error("{algo} plan for n={n} trial {trial} failed replay: {violation}")]
    Replay {
        n: usize,
        trial: usize,
        algo: Algorithm,
        violation: ReplayViolation,
    },
    #[error("nothing to write: no trial records")]
    NoRecords,
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// A generated instance shared by both composers.
pub struct Instance {
    pub n_nodes: usize,
    pub trial: usize,
    pub seed: u64,
    pub request: DeliveryRequest,
}

// splitmix64 finaliser; derives independent stream seeds from the master seed
fn mix(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed
        .wrapping_add(a.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(b.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Network and background schedule for one size of the sweep.
pub fn build_world(cfg: &Config, n_nodes: usize) -> Result<(SkywayNetwork, OccupancySchedule), BenchError> {
    let seed = cfg.experiment.seed;
    let bounds = Bounds {
        width_km: cfg.network.width_km,
        height_km: cfg.network.height_km,
    };
    let net = generate_network(
        n_nodes,
        bounds,
        cfg.network.max_segment_km,
        cfg.network.pads_per_station,
        mix(seed, n_nodes as u64, 1),
    )
    .map_err(|source| BenchError::Network { n: n_nodes, source })?;
    let sched = generate_schedule(
        &net,
        cfg.schedule.horizon_h,
        cfg.schedule.load_factor,
        cfg.drone.recharge_hours,
        mix(seed, n_nodes as u64, 2),
    )
    .map_err(|source| BenchError::Schedule { n: n_nodes, source })?;
    Ok((net, sched))
}

/// Random source, distinct destinations and package weights for one trial.
pub fn draw_instance(cfg: &Config, net: &SkywayNetwork, trial: usize) -> Instance {
    let n = net.node_count();
    let seed = mix(cfg.experiment.seed, n as u64, 1000 + trial as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = cfg.experiment.destinations_per_request.min(n - 1);
    let picked = sample(&mut rng, n, k + 1).into_vec();
    let [lo, hi] = cfg.experiment.package_kg;
    let packages = picked[1..]
        .iter()
        .map(|&d| Package {
            weight_kg: if hi > lo { rng.gen_range(lo..=hi) } else { lo },
            destination: NodeId(d),
        })
        .collect();
    Instance {
        n_nodes: n,
        trial,
        seed,
        request: DeliveryRequest::new(NodeId(picked[0]), packages, cfg.experiment.depart_clock_h),
    }
}

/// Runs one composer on `instance`, times it and replays the plan.
pub fn run_trial(
    cfg: &Config,
    net: &SkywayNetwork,
    sched: &OccupancySchedule,
    instance: &Instance,
    algo: Algorithm,
) -> Result<(TrialRecord, Option<CompositionPlan>), BenchError> {
    let compose = || -> Result<(CompositionPlan, Diagnostics), ComposeError> {
        match algo {
            Algorithm::Heuristic => compose_heuristic(net, sched, &cfg.drone, &instance.request, cfg.margins),
            Algorithm::Exhaustive => compose_exhaustive(net, sched, &cfg.drone, &instance.request),
        }
    };
    let watch = Stopwatch::start();
    let result = compose();
    let mut exec_time_s = watch.seconds();
    // composition is deterministic, so repeats only refine the timing
    for _ in 1..cfg.experiment.timing_repeats {
        let watch = Stopwatch::start();
        let again = compose();
        exec_time_s = exec_time_s.min(watch.seconds());
        debug_assert_eq!(again.is_ok(), result.is_ok());
    }

    let mut record = TrialRecord {
        n_nodes: instance.n_nodes,
        trial: instance.trial,
        seed: instance.seed,
        algo,
        feasible: false,
        delivery_time_h: None,
        exec_time_s,
        subgraph_nodes: 0,
        labels_expanded: 0,
    };
    match result {
        Ok((plan, diag)) => {
            replay(&plan, net, sched, &cfg.drone).map_err(|violation| BenchError::Replay {
                n: instance.n_nodes,
                trial: instance.trial,
                algo,
                violation,
            })?;
            record.feasible = true;
            record.delivery_time_h = Some(plan.delivery_time);
            record.subgraph_nodes = diag.subgraph_nodes;
            record.labels_expanded = diag.labels_expanded;
            Ok((record, Some(plan)))
        }
        Err(_) => {
            // both composers end up searching the whole network before giving up
            record.subgraph_nodes = net.node_count();
            Ok((record, None))
        }
    }
}

fn run_size(cfg: &Config, n_nodes: usize) -> Result<Vec<TrialRecord>, BenchError> {
    let (net, sched) = build_world(cfg, n_nodes)?;
    let trials = cfg.experiment.runs_for(n_nodes);
    let one = |trial: usize| -> Result<[TrialRecord; 2], BenchError> {
        let instance = draw_instance(cfg, &net, trial);
        let (h, _) = run_trial(cfg, &net, &sched, &instance, Algorithm::Heuristic)?;
        let (e, _) = run_trial(cfg, &net, &sched, &instance, Algorithm::Exhaustive)?;
        Ok([h, e])
    };
    let pairs: Vec<[TrialRecord; 2]> = if cfg.experiment.parallel {
        parallel_map(trials, one)?
    } else {
        (0..trials).map(one).collect::<Result<_, _>>()?
    };
    Ok(pairs.into_iter().flatten().collect())
}

#[cfg(feature = "parallel")]
fn parallel_map<T: Send>(
    n: usize,
    f: impl Fn(usize) -> Result<T, BenchError> + Sync,
) -> Result<Vec<T>, BenchError> {
    use rayon::prelude::*;
    // passing `f` directly would require it to be Send as well as Sync
    #[allow(clippy::redundant_closure)]
    (0..n).into_par_iter().map(|i| f(i)).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T: Send>(
    n: usize,
    f: impl Fn(usize) -> Result<T, BenchError> + Sync,
) -> Result<Vec<T>, BenchError> {
    (0..n).map(f).collect()
}

/// Runs the whole sweep described by `cfg`.
///
/// Every size gets its own seeded network and schedule, then
/// `ceil(runs_fraction * n)` trials, each solved by both composers on the
/// same instance. Infeasible trials are recorded, not resampled. Any plan
/// that fails replay aborts the sweep.
pub fn run_benchmark(cfg: &Config) -> Result<(Vec<TrialRecord>, BenchReport), BenchError> {
    let mut records = Vec::new();
    for &n in &cfg.experiment.node_counts {
        records.extend(run_size(cfg, n)?);
    }
    let report = summarize(&records);
    Ok((records, report))
}
