//! Single-document JSON configuration.
//!
//! Sections: `drone`, `network`, `schedule`, `experiment`, `margins`. Every
//! key is optional and falls back to the defaults below, which mirror the
//! DJI Matrice 300 setup (15.3 kg, 82.8 km/h, 2.15 h recharge, 4 pads per
//! station, networks of up to 35 nodes, runs for 50% of the node count).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::composer::Margins;
use crate::drone::DroneSpec;
use crate::error::DroneError;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub drone: DroneSpec,
    pub network: NetworkConfig,
    pub schedule: ScheduleConfig,
    pub experiment: ExperimentConfig,
    pub margins: Margins,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkConfig {
    pub nodes: usize,
    pub width_km: f64,
    pub height_km: f64,
    pub max_segment_km: f64,
    pub pads_per_station: usize,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        NetworkConfig {
            nodes: 35,
            width_km: 50.0,
            height_km: 50.0,
            max_segment_km: 15.0,
            pads_per_station: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleConfig {
    pub horizon_h: f64,
    pub load_factor: f64,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig {
            horizon_h: 24.0,
            load_factor: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub node_counts: Vec<usize>,
    pub destinations_per_request: usize,
    /// Trials per network size as a fraction of its node count (rounded up).
    pub runs_fraction: f64,
    pub seed: u64,
    /// Package weights are drawn uniformly from this range (kg).
    pub package_kg: [f64; 2],
    pub depart_clock_h: f64,
    /// Each compose call is timed this many times and the fastest run is
    /// recorded, which filters scheduler and cache noise out of exec_time.
    pub timing_repeats: usize,
    /// Run trials on all cores. Execution times are then not comparable.
    pub parallel: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            node_counts: vec![10, 15, 20, 25, 30, 35],
            destinations_per_request: 3,
            runs_fraction: 0.5,
            seed: 1,
            package_kg: [0.5, 3.0],
            depart_clock_h: 0.0,
            timing_repeats: 5,
            parallel: false,
        }
    }
}

impl ExperimentConfig {
    pub fn runs_for(&self, n_nodes: usize) -> usize {
        (self.runs_fraction * n_nodes as f64).ceil() as usize
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config error at `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Drone(#[from] DroneError),
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| ConfigError::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

fn read(path: &Path) -> Result<String, ConfigError> {
    fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads a standalone drone description: a JSON object with any subset of
/// the [`DroneSpec`] fields, the rest taking their defaults.
pub fn load_drone(path: impl AsRef<Path>) -> Result<DroneSpec, ConfigError> {
    let spec: DroneSpec = parse(&read(path.as_ref())?)?;
    spec.validate()?;
    Ok(spec)
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Config = parse(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        Self::from_json(&read(path.as_ref())?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.drone.validate()?;
        let e = &self.experiment;
        if e.destinations_per_request == 0 {
            return Err(ConfigError::Invalid("destinations_per_request must be at least 1".into()));
        }
        if let Some(&n) = e.node_counts.iter().find(|&&n| n <= e.destinations_per_request) {
            return Err(ConfigError::Invalid(format!(
                "node count {n} leaves no room for a source and {} destinations",
                e.destinations_per_request
            )));
        }
        if e.timing_repeats == 0 {
            return Err(ConfigError::Invalid("timing_repeats must be at least 1".into()));
        }
        if !(e.runs_fraction > 0.0 && e.runs_fraction.is_finite()) {
            return Err(ConfigError::Invalid("runs_fraction must be positive".into()));
        }
        let [lo, hi] = e.package_kg;
        if !(0.0 < lo && lo <= hi && hi.is_finite()) {
            return Err(ConfigError::Invalid("package_kg must satisfy 0 < min <= max".into()));
        }
        if !(0.0..=1.0).contains(&self.schedule.load_factor) {
            return Err(ConfigError::Invalid("schedule.load_factor must lie in [0, 1]".into()));
        }
        if !(self.margins.angle >= 0.0 && self.margins.radius >= 0.0) {
            return Err(ConfigError::Invalid("margins must be non-negative".into()));
        }
        Ok(())
    }
}
