use std::path::Path;

use skyway_core::bench::{emit_csv, replay, run_benchmark, BenchError};
use skyway_core::config::{load_drone, ConfigError};
use skyway_core::net::{generate_network, load_network, save_network};
use skyway_core::plan::{load_plan, save_plan};
use skyway_core::station::{generate_schedule, load_schedule, save_schedule};
use skyway_core::{
    compose_exhaustive, compose_heuristic, Algorithm, ComposeError, Config, DeliveryRequest, DroneSpec,
    FormatError, Margins, NodeId, OccupancySchedule, Package, SkywayNetwork,
};

use crate::{BenchArgs, ComposeArgs, ConfigArg, Failure, GenNetArgs, GenSchedArgs, ValidateArgs};

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

// A config that cannot be read is a usage error, like a bad flag.
impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<ComposeError> for Failure {
    fn from(e: ComposeError) -> Self {
        match e {
            ComposeError::Infeasible | ComposeError::UnreachableLeg { .. } => Failure::Infeasible(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Format(FormatError::Io { .. }) | BenchError::Csv(_) => Failure::Io(e.to_string()),
            BenchError::Network { .. } | BenchError::Schedule { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn load_config(arg: &ConfigArg) -> Result<Config, Failure> {
    match &arg.config {
        Some(path) => Ok(Config::load(path)?),
        None => Ok(Config::default()),
    }
}

fn seed_or(seed: Option<u64>, cfg: &Config) -> u64 {
    seed.unwrap_or(cfg.experiment.seed)
}

fn drone_spec(path: Option<&Path>, cfg: &Config) -> Result<DroneSpec, Failure> {
    match path {
        Some(path) => Ok(load_drone(path)?),
        None => Ok(cfg.drone),
    }
}

fn schedule(path: Option<&Path>, net: &SkywayNetwork) -> Result<OccupancySchedule, Failure> {
    match path {
        Some(path) => Ok(load_schedule(net, path)?),
        None => Ok(OccupancySchedule::empty(net)),
    }
}

pub fn gen_net(args: GenNetArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.config)?;
    let n = args.nodes.unwrap_or(cfg.network.nodes);
    let (width, height) = args.bounds.unwrap_or((cfg.network.width_km, cfg.network.height_km));
    let bounds = skyway_core::Bounds::new(width, height).map_err(|e| Failure::Usage(e.to_string()))?;
    let net = generate_network(
        n,
        bounds,
        args.max_seg_km.unwrap_or(cfg.network.max_segment_km),
        args.pads.unwrap_or(cfg.network.pads_per_station),
        seed_or(args.seed, &cfg),
    )
    .map_err(|e| Failure::Usage(e.to_string()))?;
    save_network(&net, &args.out)?;
    println!(
        "{} nodes, {} segments -> {}",
        net.node_count(),
        net.segments().len(),
        args.out.display()
    );
    Ok(())
}

pub fn gen_sched(args: GenSchedArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.config)?;
    let net = load_network(&args.net)?;
    let sched = generate_schedule(
        &net,
        args.horizon.unwrap_or(cfg.schedule.horizon_h),
        args.load.unwrap_or(cfg.schedule.load_factor),
        args.interval.unwrap_or(cfg.drone.recharge_hours),
        seed_or(args.seed, &cfg),
    )
    .map_err(|e| Failure::Usage(e.to_string()))?;
    save_schedule(&sched, &args.out)?;
    let stations = net.nodes().iter().filter(|n| n.is_station()).count();
    let busy: usize = net
        .nodes()
        .iter()
        .filter(|n| n.is_station())
        .flat_map(|n| sched.pads(n.id))
        .map(Vec::len)
        .sum();
    println!("{stations} stations, {busy} busy intervals -> {}", args.out.display());
    Ok(())
}

fn build_request(args: &ComposeArgs, depart: f64) -> Result<DeliveryRequest, Failure> {
    let weights: Vec<f64> = match args.kg.len() {
        1 => vec![args.kg[0]; args.dst.len()],
        k if k == args.dst.len() => args.kg.clone(),
        k => {
            return Err(Failure::Usage(format!(
                "--kg lists {k} weights for {} destinations",
                args.dst.len()
            )))
        }
    };
    let packages = args
        .dst
        .iter()
        .zip(weights)
        .map(|(&d, weight_kg)| Package {
            weight_kg,
            destination: NodeId(d),
        })
        .collect();
    Ok(DeliveryRequest::new(NodeId(args.src), packages, depart))
}

pub fn compose(args: ComposeArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.config)?;
    let net = load_network(&args.net)?;
    let sched = schedule(args.sched.as_deref(), &net)?;
    let spec = drone_spec(args.drone.as_deref(), &cfg)?;
    let request = build_request(&args, args.depart.unwrap_or(cfg.experiment.depart_clock_h))?;
    let margins = if args.cover_all {
        Margins::covering(&net)
    } else {
        Margins {
            angle: args.angle_margin.unwrap_or(cfg.margins.angle),
            radius: args.radius_margin.unwrap_or(cfg.margins.radius),
        }
    };

    let (plan, diag) = match args.algo {
        Algorithm::Heuristic => compose_heuristic(&net, &sched, &spec, &request, margins)?,
        Algorithm::Exhaustive => compose_exhaustive(&net, &sched, &spec, &request)?,
    };
    save_plan(&plan, &args.out)?;

    let ids = |v: Vec<NodeId>| v.iter().map(NodeId::to_string).collect::<Vec<_>>().join(" -> ");
    println!("plan ({}) -> {}", args.algo, args.out.display());
    println!(
        "searched {} of {} nodes, {} widening round(s), {} order(s)",
        diag.subgraph_nodes, diag.network_nodes, diag.widening_rounds, diag.orders_evaluated
    );
    println!("visit order: {}", ids(plan.visit_order()));
    println!("route: {}", ids(plan.route()));
    for (node, t) in &plan.per_destination_arrival {
        println!("  arrive {node} at {t:.4} h");
    }
    println!("delivery time: {:.4} h", plan.delivery_time);
    println!("waiting: {:.4} h", plan.total_wait());
    println!("recharges: {}", plan.recharge_count());
    Ok(())
}

pub fn bench(args: BenchArgs) -> Result<(), Failure> {
    let mut cfg = load_config(&args.config)?;
    cfg.experiment.seed = seed_or(args.seed, &cfg);
    cfg.experiment.parallel |= args.parallel;
    let (records, report) = run_benchmark(&cfg)?;
    emit_csv(&records, &report, &args.out)?;
    print!("{}", report.table());
    if cfg.experiment.parallel {
        println!("(parallel run: exec times are not comparable across algorithms)");
    }
    println!(
        "{} trial records -> {}",
        records.len(),
        args.out.join("trials.csv").display()
    );
    Ok(())
}

pub fn validate(args: ValidateArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.config)?;
    let net = load_network(&args.net)?;
    let sched = schedule(args.sched.as_deref(), &net)?;
    let spec = drone_spec(args.drone.as_deref(), &cfg)?;
    let plan = load_plan(&args.plan)?;
    let timeline = replay(&plan, &net, &sched, &spec).map_err(|v| Failure::Usage(format!("plan violation at {v}")))?;
    println!(
        "ok: {} legs, delivery time {:.4} h, {} recharge(s), {:.4} h waiting",
        plan.legs.len(),
        timeline.delivery_time,
        timeline.recharges,
        timeline.total_wait
    );
    Ok(())
}
