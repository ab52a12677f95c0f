//! `skyway`: generate skyway networks and station schedules, compose
//! multi-package deliveries, replay plans and run the benchmark sweep.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 infeasible
//! request, 4 I/O error, 1 internal error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use skyway_core::Algorithm;

#[derive(Parser)]
#[command(name = "skyway", version, about = "Drone delivery composition over skyway networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random skyway network file.
    GenNet(GenNetArgs),
    /// Generate random background pad occupancy for a network.
    GenSched(GenSchedArgs),
    /// Compose a delivery plan for one request.
    Compose(ComposeArgs),
    /// Run the benchmark sweep and write trials.csv / summary.csv.
    Bench(BenchArgs),
    /// Replay a plan file and report the first violated constraint.
    Validate(ValidateArgs),
}

/// Options shared by every command that reads the JSON config.
#[derive(Args)]
struct ConfigArg {
    /// JSON config with drone/network/schedule/experiment/margins sections;
    /// flags override its values.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct GenNetArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Number of rooftops (at least 2).
    #[arg(long)]
    nodes: Option<usize>,
    /// Area in km, e.g. 50x50.
    #[arg(long, value_name = "WxH", value_parser = parse_bounds)]
    bounds: Option<(f64, f64)>,
    /// Longest segment joined between nearby rooftops (km).
    #[arg(long, value_name = "L")]
    max_seg_km: Option<f64>,
    /// Recharging pads per station.
    #[arg(long, value_name = "P")]
    pads: Option<usize>,
    #[arg(long, env = "SKYWAY_SEED")]
    seed: Option<u64>,
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Args)]
struct GenSchedArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long, value_name = "PATH")]
    net: PathBuf,
    /// Fraction of each pad's horizon that is busy, in [0, 1].
    #[arg(long)]
    load: Option<f64>,
    /// Schedule horizon (h).
    #[arg(long)]
    horizon: Option<f64>,
    /// Length of each busy interval (h); defaults to the drone recharge time.
    #[arg(long)]
    interval: Option<f64>,
    #[arg(long, env = "SKYWAY_SEED")]
    seed: Option<u64>,
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Args)]
struct ComposeArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long, value_name = "PATH")]
    net: PathBuf,
    /// Station schedule; all pads are free when omitted.
    #[arg(long, value_name = "PATH")]
    sched: Option<PathBuf>,
    /// Drone description (any subset of the drone config fields).
    #[arg(long, value_name = "PATH")]
    drone: Option<PathBuf>,
    #[arg(long, value_name = "ID")]
    src: usize,
    #[arg(long, value_name = "ID[,ID...]", value_delimiter = ',', required = true)]
    dst: Vec<usize>,
    /// Package weights (kg): one for all packages or one per destination.
    #[arg(long, value_name = "KG[,KG...]", value_delimiter = ',', default_value = "1.0")]
    kg: Vec<f64>,
    #[arg(long, default_value = "heuristic")]
    algo: Algorithm,
    /// Departure clock (h).
    #[arg(long, value_name = "H")]
    depart: Option<f64>,
    /// Sector angle margin (rad).
    #[arg(long)]
    angle_margin: Option<f64>,
    /// Sector radius margin (fraction of the farthest destination distance).
    #[arg(long)]
    radius_margin: Option<f64>,
    /// Start the heuristic from a sector that covers the whole network.
    #[arg(long, conflicts_with_all = ["angle_margin", "radius_margin"])]
    cover_all: bool,
    #[arg(long, value_name = "PATH", default_value = "plan.json")]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    #[arg(long, env = "SKYWAY_SEED")]
    seed: Option<u64>,
    /// Run trials on all cores; execution times are then not comparable.
    #[arg(long)]
    parallel: bool,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long, value_name = "PATH")]
    plan: PathBuf,
    #[arg(long, value_name = "PATH")]
    net: PathBuf,
    #[arg(long, value_name = "PATH")]
    sched: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    drone: Option<PathBuf>,
}

fn parse_bounds(s: &str) -> Result<(f64, f64), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got {s:?}"))?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((num(w)?, num(h)?))
}

/// A failed command and the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Infeasible(String),
    Io(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Infeasible(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Infeasible(m) | Failure::Io(m) | Failure::Internal(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::GenNet(args) => commands::gen_net(args),
        Command::GenSched(args) => commands::gen_sched(args),
        Command::Compose(args) => commands::compose(args),
        Command::Bench(args) => commands::bench(args),
        Command::Validate(args) => commands::validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
