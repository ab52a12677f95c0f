//! Recharging-pad occupancy from background traffic.
//!
//! Each station pad carries a static timetable of busy intervals. A recharge
//! needs one pad free for the whole recharge window; the planned drone never
//! reserves pads itself.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{FormatError, ScheduleError};
use crate::net::{NodeId, SkywayNetwork};

pub const SCHEDULE_FORMAT: &str = "skyway-sched/1";

/// Half-open busy window `[start, end)` in absolute hours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BusyInterval {
    pub start: f64,
    pub end: f64,
}

/// Earliest slot found by [`OccupancySchedule::ready_time`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PadSlot {
    pub start: f64,
    pub depart: f64,
    pub pad: usize,
}

impl PadSlot {
    pub fn wait(&self, arrival: f64) -> f64 {
        self.start - arrival
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OccupancySchedule {
    // one entry per node; inner vec per pad
    pads: Vec<Vec<Vec<BusyInterval>>>,
}

impl OccupancySchedule {
    /// All pads free at all times.
    pub fn empty(net: &SkywayNetwork) -> Self {
        OccupancySchedule {
            pads: net.nodes().iter().map(|n| vec![Vec::new(); n.pads]).collect(),
        }
    }

    /// Builds a schedule from explicit per-station pad timetables.
    /// Stations not listed get free pads.
    pub fn from_stations(
        net: &SkywayNetwork,
        stations: BTreeMap<NodeId, Vec<Vec<BusyInterval>>>,
    ) -> Result<Self, ScheduleError> {
        let mut sched = Self::empty(net);
        for (station, pads) in stations {
            let node = net.get(station).ok_or(ScheduleError::UnknownStation(station))?;
            if pads.len() != node.pads {
                return Err(ScheduleError::PadCount {
                    station,
                    expected: node.pads,
                    found: pads.len(),
                });
            }
            for (pad, intervals) in pads.iter().enumerate() {
                validate_pad(station, pad, intervals)?;
            }
            sched.pads[station.0] = pads;
        }
        Ok(sched)
    }

    pub fn pads(&self, station: NodeId) -> &[Vec<BusyInterval>] {
        self.pads.get(station.0).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_empty(&self) -> bool {
        self.pads.iter().flatten().all(Vec::is_empty)
    }

    /// Earliest recharge slot at `station` for a drone arriving at `arrival`.
    ///
    /// Finds the smallest `start >= arrival` such that some pad is free over
    /// `[start, start + duration]`; ties go to the lowest pad index.
    pub fn ready_time(
        &self,
        station: NodeId,
        arrival: f64,
        duration: f64,
    ) -> Result<PadSlot, ScheduleError> {
        let pads = self.pads(station);
        if pads.is_empty() {
            return Err(ScheduleError::NoPads(station));
        }
        let mut best: Option<PadSlot> = None;
        for (pad, intervals) in pads.iter().enumerate() {
            let start = earliest_fit(intervals, arrival, duration);
            if best.is_none_or(|b| start < b.start) {
                best = Some(PadSlot {
                    start,
                    depart: start + duration,
                    pad,
                });
            }
        }
        Ok(best.expect("at least one pad"))
    }

    /// True when `pad` at `station` is free for the whole window.
    pub fn pad_free(&self, station: NodeId, pad: usize, start: f64, end: f64) -> bool {
        match self.pads(station).get(pad) {
            Some(intervals) => intervals.iter().all(|iv| iv.end <= start || iv.start >= end),
            None => false,
        }
    }

    /// Total busy hours of one pad inside `[0, horizon]`.
    pub fn busy_hours(&self, station: NodeId, pad: usize, horizon: f64) -> f64 {
        self.pads(station)[pad]
            .iter()
            .map(|iv| (iv.end.min(horizon) - iv.start.max(0.0)).max(0.0))
            .sum()
    }
}

fn earliest_fit(intervals: &[BusyInterval], arrival: f64, duration: f64) -> f64 {
    let mut t = arrival;
    for iv in intervals {
        if iv.end <= t {
            continue;
        }
        if iv.start >= t + duration {
            break;
        }
        t = iv.end;
    }
    t
}

fn validate_pad(station: NodeId, pad: usize, intervals: &[BusyInterval]) -> Result<(), ScheduleError> {
    for iv in intervals {
        if !(iv.start.is_finite() && iv.end.is_finite() && iv.start < iv.end) {
            return Err(ScheduleError::InvalidInterval {
                station,
                pad,
                start: iv.start,
                end: iv.end,
            });
        }
    }
    if intervals.windows(2).any(|w| w[1].start < w[0].end) {
        return Err(ScheduleError::Overlap { station, pad });
    }
    Ok(())
}

/// Random background occupancy.
///
/// Each pad receives `round(load_factor * horizon / interval_len)` busy
/// intervals of length `interval_len`, separated by random gaps that split
/// the remaining free time of `[0, horizon]`. Deterministic per seed.
pub fn generate_schedule(
    net: &SkywayNetwork,
    horizon: f64,
    load_factor: f64,
    interval_len: f64,
    seed: u64,
) -> Result<OccupancySchedule, ScheduleError> {
    if !(0.0..=1.0).contains(&load_factor) {
        return Err(ScheduleError::LoadFactor(load_factor));
    }
    let mut sched = OccupancySchedule::empty(net);
    if load_factor == 0.0 || !(horizon > 0.0) || !(interval_len > 0.0) {
        return Ok(sched);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_count = (horizon / interval_len).floor() as usize;
    let count = ((load_factor * horizon / interval_len).round() as usize).min(max_count);
    let free = horizon - count as f64 * interval_len;

    for pads in &mut sched.pads {
        for pad in pads.iter_mut() {
            // count + 1 gaps summing to `free`: sorted uniform cut points
            let mut cuts: Vec<f64> = (0..count).map(|_| rng.gen_range(0.0..=free)).collect();
            cuts.sort_by(f64::total_cmp);
            let mut prev_cut = 0.0;
            let mut clock = 0.0;
            for cut in cuts {
                clock += cut - prev_cut;
                prev_cut = cut;
                pad.push(BusyInterval {
                    start: clock,
                    end: clock + interval_len,
                });
                clock += interval_len;
            }
            // merge back-to-back intervals so the timetable stays disjoint
            pad.dedup_by(|next, prev| {
                if next.start <= prev.end {
                    prev.end = prev.end.max(next.end);
                    true
                } else {
                    false
                }
            });
        }
    }
    Ok(sched)
}

#[derive(Serialize, Deserialize)]
struct ScheduleFile {
    format: String,
    stations: BTreeMap<NodeId, Vec<Vec<BusyInterval>>>,
}

pub fn schedule_to_json(sched: &OccupancySchedule) -> String {
    let stations = sched
        .pads
        .iter()
        .enumerate()
        .filter(|(_, pads)| !pads.is_empty())
        .map(|(i, pads)| (NodeId(i), pads.clone()))
        .collect();
    let file = ScheduleFile {
        format: SCHEDULE_FORMAT.to_string(),
        stations,
    };
    serde_json::to_string_pretty(&file).expect("schedule serializes")
}

pub fn schedule_from_json(net: &SkywayNetwork, text: &str) -> Result<OccupancySchedule, FormatError> {
    let file: ScheduleFile = serde_json::from_str(text)?;
    if file.format != SCHEDULE_FORMAT {
        return Err(FormatError::Version {
            expected: SCHEDULE_FORMAT.to_string(),
            found: file.format,
        });
    }
    Ok(OccupancySchedule::from_stations(net, file.stations)?)
}

pub fn save_schedule(sched: &OccupancySchedule, path: impl AsRef<Path>) -> Result<(), FormatError> {
    let path = path.as_ref();
    fs::write(path, schedule_to_json(sched)).map_err(|e| FormatError::io(path, e))
}

pub fn load_schedule(net: &SkywayNetwork, path: impl AsRef<Path>) -> Result<OccupancySchedule, FormatError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    schedule_from_json(net, &text)
}
