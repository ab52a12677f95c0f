//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails. Runs without the test harness so
//! the lines always show: `cargo test -p skyway-core --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skyway_core::bench::{build_world, draw_instance, emit_csv, replay, run_benchmark, run_trial};
use skyway_core::net::generate_network;
use skyway_core::plan::plan_to_json;
use skyway_core::station::generate_schedule;
use skyway_core::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn default_config_path() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../config/default.json"))
}

fn oracle_equivalence() -> Outcome {
    let spec = DroneSpec::default();
    let started = Instant::now();
    let mut feasible = 0;
    for seed in 0..200 {
        let c = common::small_instance(seed);
        ensure(c.net.node_count() <= 7 && c.request.packages.len() <= 2, || {
            format!("seed {seed} exceeds oracle limits")
        })?;
        let oracle = brute_force_oracle(&c.net, &c.sched, &spec, &c.request);
        let exhaustive = compose_exhaustive(&c.net, &c.sched, &spec, &c.request);
        match (oracle, exhaustive) {
            (Ok(o), Ok((e, _))) => {
                feasible += 1;
                let diff = (o.delivery_time - e.delivery_time).abs();
                ensure(diff <= 1e-9, || format!("seed {seed}: delivery times differ by {diff}"))?;
            }
            (Err(_), Err(_)) => {}
            (o, e) => {
                return Err(format!(
                    "seed {seed}: oracle feasible={} exhaustive feasible={}",
                    o.is_ok(),
                    e.is_ok()
                ))
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!("200 instances, {feasible} feasible, all match; {secs:.2} s"))
}

fn subgraph_identity() -> Outcome {
    let cfg = Config::default();
    let started = Instant::now();
    let mut compared = 0;
    for (i, n) in [10usize, 15, 20, 25, 30].into_iter().enumerate() {
        let (net, sched) = build_world(&cfg, n).map_err(|e| e.to_string())?;
        for trial in 0..10 {
            let instance = draw_instance(&cfg, &net, 100 * i + trial);
            let covering = Margins::covering(&net);
            let h = compose_heuristic(&net, &sched, &cfg.drone, &instance.request, covering);
            let e = compose_exhaustive(&net, &sched, &cfg.drone, &instance.request);
            match (h, e) {
                (Ok((h, diag)), Ok((e, _))) => {
                    ensure(diag.subgraph_nodes == net.node_count(), || {
                        format!("n={n} trial {trial}: sector kept {} nodes", diag.subgraph_nodes)
                    })?;
                    ensure(plan_to_json(&h) == plan_to_json(&e), || {
                        format!("n={n} trial {trial}: plan files differ")
                    })?;
                }
                (Err(_), Err(_)) => {}
                _ => return Err(format!("n={n} trial {trial}: feasibility differs")),
            }
            compared += 1;
        }
    }
    let secs = started.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!("{compared} instances, identical plan files; {secs:.2} s"))
}

fn optimality_ordering() -> Outcome {
    let cfg = Config::load(default_config_path()).map_err(|e| e.to_string())?;
    let started = Instant::now();
    let (records, report) = run_benchmark(&cfg).map_err(|e| e.to_string())?;
    let mut paired = 0;
    for pair in records.chunks(2) {
        let (h, e) = (&pair[0], &pair[1]);
        if let (Some(hd), Some(ed)) = (h.delivery_time_h, e.delivery_time_h) {
            paired += 1;
            ensure(hd >= ed - 1e-9, || {
                format!("n={} trial {}: heuristic {hd} h < exhaustive {ed} h", h.n_nodes, h.trial)
            })?;
        }
    }
    let gaps: Vec<String> = cfg
        .experiment
        .node_counts
        .iter()
        .map(|&n| {
            let gap = report.row(n, Algorithm::Heuristic).and_then(|r| r.mean_gap_pct);
            format!("n{n}={}", gap.map_or("-".into(), |g| format!("{g:.2}%")))
        })
        .collect();
    let secs = started.elapsed().as_secs_f64();
    ensure(secs < 600.0, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "{paired} feasible pairs, heuristic never faster to deliver; mean gap {}; {secs:.2} s",
        gaps.join(" ")
    ))
}

fn execution_time_ordering() -> Outcome {
    let mut notes = Vec::new();
    for seed in [1u64, 2, 3] {
        let mut cfg = Config::default();
        cfg.experiment.seed = seed;
        let (_, report) = run_benchmark(&cfg).map_err(|e| e.to_string())?;
        let mean = |n: usize, algo| report.row(n, algo).map(|r| r.mean_exec_s).unwrap_or(f64::NAN);
        for &n in cfg.experiment.node_counts.iter().filter(|&&n| n >= 20) {
            let (h, e) = (mean(n, Algorithm::Heuristic), mean(n, Algorithm::Exhaustive));
            ensure(h < e, || {
                format!("seed {seed} n={n}: heuristic {:.1} us >= exhaustive {:.1} us", h * 1e6, e * 1e6)
            })?;
        }
        let growth = |algo| mean(35, algo) / mean(10, algo);
        let (gh, ge) = (growth(Algorithm::Heuristic), growth(Algorithm::Exhaustive));
        ensure(ge > gh, || {
            format!("seed {seed}: growth t(35)/t(10) exhaustive {ge:.2} <= heuristic {gh:.2}")
        })?;
        notes.push(format!("seed {seed}: growth h {gh:.1}x e {ge:.1}x"));
    }
    Ok(format!("heuristic faster for every n >= 20; {}", notes.join(", ")))
}

fn protocol_fidelity() -> Outcome {
    let cfg = Config::load(default_config_path()).map_err(|e| e.to_string())?;
    ensure(cfg == Config::default(), || "default config file drifted from built-in defaults".into())?;
    let d = &cfg.drone;
    ensure(d.max_payload_kg == 15.3, || format!("payload {}", d.max_payload_kg))?;
    ensure(d.max_speed_kmh == 82.8, || format!("speed {}", d.max_speed_kmh))?;
    ensure(d.recharge_hours == 2.15, || format!("recharge {}", d.recharge_hours))?;
    ensure(cfg.network.pads_per_station == 4, || format!("pads {}", cfg.network.pads_per_station))?;
    ensure(cfg.network.nodes == 35, || format!("nodes {}", cfg.network.nodes))?;
    ensure(cfg.experiment.node_counts.iter().max() == Some(&35), || "sweep does not reach 35 nodes".into())?;
    ensure(cfg.experiment.runs_for(30) == 15, || format!("{} trials at n=30", cfg.experiment.runs_for(30)))?;

    let mut only30 = cfg.clone();
    only30.experiment.node_counts = vec![30];
    only30.experiment.timing_repeats = 1;
    let (records, _) = run_benchmark(&only30).map_err(|e| e.to_string())?;
    for algo in [Algorithm::Heuristic, Algorithm::Exhaustive] {
        let trials = records.iter().filter(|r| r.algo == algo).count();
        ensure(trials == 15, || format!("{algo}: {trials} trials at n=30"))?;
    }
    Ok("n=30 runs 15 trials; 15.3 kg, 82.8 km/h, 2.15 h, 4 pads, 35 nodes loaded from config/default.json".into())
}

fn plans_replay() -> Outcome {
    let cfg = Config::default();
    let mut replayed = 0;
    for &n in &cfg.experiment.node_counts {
        let (net, sched) = build_world(&cfg, n).map_err(|e| e.to_string())?;
        for trial in 0..cfg.experiment.runs_for(n) {
            let instance = draw_instance(&cfg, &net, trial);
            for algo in [Algorithm::Heuristic, Algorithm::Exhaustive] {
                let (_, plan) = run_trial(&cfg, &net, &sched, &instance, algo).map_err(|e| e.to_string())?;
                if let Some(plan) = plan {
                    let timeline = replay(&plan, &net, &sched, &cfg.drone)
                        .map_err(|v| format!("n={n} trial {trial} {algo}: {v}"))?;
                    ensure(timeline.delivery_time == plan.delivery_time, || {
                        format!("n={n} trial {trial} {algo}: replayed delivery time differs")
                    })?;
                    replayed += 1;
                }
            }
        }
    }
    // the oracle-sized instances exercise recharges on busy pads
    let spec = DroneSpec::default();
    for seed in 0..200 {
        let c = common::small_instance(seed);
        let h = compose_heuristic(&c.net, &c.sched, &spec, &c.request, Margins::default());
        let e = compose_exhaustive(&c.net, &c.sched, &spec, &c.request);
        for plan in [h.ok().map(|p| p.0), e.ok().map(|p| p.0)].into_iter().flatten() {
            replay(&plan, &c.net, &c.sched, &spec).map_err(|v| format!("small seed {seed}: {v}"))?;
            replayed += 1;
        }
    }
    Ok(format!("{replayed} plans replayed without violation"))
}

fn range_envelope() -> Outcome {
    let spec = DroneSpec::default();
    let empty = spec.flight_range(0.0).map_err(|e| e.to_string())?;
    let full = spec.flight_range(15.3).map_err(|e| e.to_string())?;
    ensure(empty == 33.0, || format!("flight_range(0) = {empty}"))?;
    ensure(full == 3.0, || format!("flight_range(15.3) = {full}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut payloads: Vec<f64> = (0..1000).map(|_| rng.gen_range(0.0..=15.3)).collect();
    payloads.sort_by(f64::total_cmp);
    let ranges: Vec<f64> = payloads.iter().map(|&p| spec.flight_range(p).unwrap()).collect();
    ensure(ranges.windows(2).all(|w| w[1] <= w[0]), || "range increases with payload".into())?;
    ensure(ranges.iter().all(|r| (3.0..=33.0).contains(r)), || "range outside [3, 33]".into())?;
    Ok("flight_range(0)=33, flight_range(15.3)=3, non-increasing over 1000 payloads".into())
}

fn non_overtaking() -> Outcome {
    let bounds = Bounds::new(20.0, 20.0).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for world in 0..100u64 {
        let pads = rng.gen_range(1..=4);
        let net = generate_network(4, bounds, 10.0, pads, world).map_err(|e| e.to_string())?;
        let load = rng.gen_range(0.0..0.95);
        let sched = generate_schedule(&net, 24.0, load, 2.15, world).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let station = NodeId(rng.gen_range(0..4));
            let a = rng.gen_range(0.0..26.0);
            let b = a + rng.gen_range(0.0..4.0);
            let early = sched.ready_time(station, a, 2.15).map_err(|e| e.to_string())?;
            let late = sched.ready_time(station, b, 2.15).map_err(|e| e.to_string())?;
            ensure(early.start >= a && late.start >= b, || "slot starts before arrival".into())?;
            ensure(early.depart == early.start + 2.15, || "recharge duration altered".into())?;
            ensure(late.depart >= early.depart, || {
                format!("arrival {b} departs {} before arrival {a} departs {}", late.depart, early.depart)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} arrival pairs, no overtaking"))
}

fn strip_exec_time(csv: &str) -> String {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let col = header.iter().position(|h| *h == "exec_time_s").unwrap_or(usize::MAX);
    let mut out = header.join(",");
    for line in lines {
        let fields: Vec<&str> = line
            .split(',')
            .enumerate()
            .map(|(i, f)| if i == col { "" } else { f })
            .collect();
        out.push('\n');
        out.push_str(&fields.join(","));
    }
    out
}

fn determinism() -> Outcome {
    let mut cfg = Config::default();
    cfg.experiment.timing_repeats = 1;
    let mut files = Vec::new();
    for _ in 0..2 {
        let (records, report) = run_benchmark(&cfg).map_err(|e| e.to_string())?;
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        emit_csv(&records, &report, dir.path()).map_err(|e| e.to_string())?;
        let text = std::fs::read_to_string(dir.path().join("trials.csv")).map_err(|e| e.to_string())?;
        files.push(text);
    }
    ensure(strip_exec_time(&files[0]) == strip_exec_time(&files[1]), || {
        "trials.csv differs beyond exec_time".into()
    })?;
    Ok(format!("{} rows identical apart from exec_time", files[0].lines().count() - 1))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("subgraph identity", subgraph_identity),
        ("optimality ordering", optimality_ordering),
        ("execution-time ordering", execution_time_ordering),
        ("protocol fidelity", protocol_fidelity),
        ("plan replay", plans_replay),
        ("range envelope", range_envelope),
        ("non-overtaking recharge", non_overtaking),
        ("same-seed determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(detail) => {
                println!("FAIL {}. {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
