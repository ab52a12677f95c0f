//! Independent plan validator.
//!
//! Re-simulates a plan with nothing but the drone model and the station
//! schedule, and reports the first leg that disagrees.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::drone::{BatteryState, DroneSpec};
use crate::net::{NodeId, SkywayNetwork};
use crate::plan::{CompositionPlan, Leg};
use crate::station::OccupancySchedule;

/// Clock agreement required between planner and replay (hours).
pub const CLOCK_TOLERANCE: f64 = 1e-9;
/// Battery agreement required between planner and replay.
pub const BATTERY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("leg {index}: {kind}")]
pub struct ReplayViolation {
    pub index: usize,
    pub kind: Violation,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("malformed plan: {0}")]
    Structure(String),
    #[error("clock discontinuity: expected {expected} h, plan says {found} h")]
    Contiguity { expected: f64, found: f64 },
    #[error("no skyway segment between {0} and {1}")]
    UnknownSegment(NodeId, NodeId),
    #[error("flight time mismatch: expected arrival {expected} h, plan says {found} h")]
    TravelTime { expected: f64, found: f64 },
    #[error("battery violation: {0}")]
    Battery(String),
    #[error("pad violation: {0}")]
    Pad(String),
    #[error("drop violation: {0}")]
    Drop(String),
    #[error("delivery time mismatch: expected {expected} h, plan says {found} h")]
    DeliveryTime { expected: f64, found: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimelineEntry {
    pub index: usize,
    pub node: NodeId,
    pub clock_in: f64,
    pub clock_out: f64,
    pub battery: f64,
    pub payload_kg: f64,
}

/// Replayed per-leg clocks and charge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timeline {
    pub entries: Vec<TimelineEntry>,
    pub delivery_time: f64,
    pub per_destination_arrival: BTreeMap<NodeId, f64>,
    pub recharges: usize,
    pub total_wait: f64,
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Replays `plan` and checks every invariant a feasible plan must satisfy.
pub fn replay(
    plan: &CompositionPlan,
    net: &SkywayNetwork,
    sched: &OccupancySchedule,
    spec: &DroneSpec,
) -> Result<Timeline, ReplayViolation> {
    let fail = |index: usize, kind: Violation| Err(ReplayViolation { index, kind });
    let request = &plan.request;
    // a plan with no packages is a valid no-op
    if !request.packages.is_empty() && request.validate(net, spec).is_err() {
        return fail(0, Violation::Structure("request is not valid for this network".into()));
    }
    if plan.legs.len().is_multiple_of(2) {
        return fail(plan.legs.len(), Violation::Structure("plan must end with a node event".into()));
    }

    let mut node = request.src;
    let mut clock = request.depart_clock;
    let mut battery = BatteryState::FULL;
    let mut payload = request.total_payload();
    let mut dropped = vec![false; request.packages.len()];
    let mut arrivals = BTreeMap::new();
    let mut entries = Vec::new();
    let mut recharges = 0;
    let mut total_wait = 0.0;

    for (index, leg) in plan.legs.iter().enumerate() {
        match (index % 2, leg) {
            (0, Leg::Event(event)) => {
                if event.node != node {
                    return fail(
                        index,
                        Violation::Structure(format!("event at {} but drone is at {node}", event.node)),
                    );
                }
                if !close(event.clock_in, clock, CLOCK_TOLERANCE) {
                    return fail(
                        index,
                        Violation::Contiguity {
                            expected: clock,
                            found: event.clock_in,
                        },
                    );
                }
                let clock_in = clock;
                for &pkg in &event.drops {
                    let Some(package) = request.packages.get(pkg) else {
                        return fail(index, Violation::Drop(format!("no package #{pkg}")));
                    };
                    if package.destination != node {
                        return fail(
                            index,
                            Violation::Drop(format!(
                                "package #{pkg} is for {} but was dropped at {node}",
                                package.destination
                            )),
                        );
                    }
                    if std::mem::replace(&mut dropped[pkg], true) {
                        return fail(index, Violation::Drop(format!("package #{pkg} dropped twice")));
                    }
                    payload = (payload - package.weight_kg).max(0.0);
                    arrivals.insert(node, clock_in);
                }
                if !event.drops.is_empty() {
                    clock += spec.drop_handling_hours;
                }
                if let Some(r) = &event.recharge {
                    if !net.node(node).is_station() {
                        return fail(index, Violation::Pad(format!("node {node} has no pads")));
                    }
                    if !close(r.requested, clock, CLOCK_TOLERANCE) {
                        return fail(
                            index,
                            Violation::Contiguity {
                                expected: clock,
                                found: r.requested,
                            },
                        );
                    }
                    let end = r.start + spec.recharge_hours;
                    if r.start < clock - CLOCK_TOLERANCE || !sched.pad_free(node, r.pad, r.start, end) {
                        return fail(
                            index,
                            Violation::Pad(format!(
                                "pad {} at {node} is not free over [{}, {end}]",
                                r.pad, r.start
                            )),
                        );
                    }
                    let slot = sched
                        .ready_time(node, clock, spec.recharge_hours)
                        .expect("station has pads");
                    if !close(slot.start, r.start, CLOCK_TOLERANCE) {
                        return fail(
                            index,
                            Violation::Pad(format!(
                                "recharge starts at {} but the earliest free pad opens at {}",
                                r.start, slot.start
                            )),
                        );
                    }
                    if !close(r.wait, slot.start - clock, CLOCK_TOLERANCE) {
                        return fail(index, Violation::Pad(format!("recorded wait {} is wrong", r.wait)));
                    }
                    total_wait += slot.start - clock;
                    recharges += 1;
                    clock = slot.depart;
                    battery = BatteryState::FULL;
                }
                if !close(event.clock_out, clock, CLOCK_TOLERANCE) {
                    return fail(
                        index,
                        Violation::Contiguity {
                            expected: clock,
                            found: event.clock_out,
                        },
                    );
                }
                entries.push(TimelineEntry {
                    index,
                    node,
                    clock_in,
                    clock_out: clock,
                    battery: battery.fraction(),
                    payload_kg: payload,
                });
            }
            (1, Leg::Flight(flight)) => {
                if flight.from != node {
                    return fail(
                        index,
                        Violation::Structure(format!("flight leaves {} but drone is at {node}", flight.from)),
                    );
                }
                let Some(seg) = net.segment_between(flight.from, flight.to) else {
                    return fail(index, Violation::UnknownSegment(flight.from, flight.to));
                };
                let length = net.segment(seg).length;
                if !close(flight.length_km, length, 1e-9) {
                    return fail(
                        index,
                        Violation::Structure(format!(
                            "segment length {} km recorded as {}",
                            length, flight.length_km
                        )),
                    );
                }
                if !close(flight.depart, clock, CLOCK_TOLERANCE) {
                    return fail(
                        index,
                        Violation::Contiguity {
                            expected: clock,
                            found: flight.depart,
                        },
                    );
                }
                let arrive = clock + spec.travel_time(length).expect("positive length");
                if !close(flight.arrive, arrive, CLOCK_TOLERANCE) {
                    return fail(
                        index,
                        Violation::TravelTime {
                            expected: arrive,
                            found: flight.arrive,
                        },
                    );
                }
                let after = match spec.consume(battery, payload, length) {
                    Ok(after) => after,
                    Err(e) => return fail(index, Violation::Battery(e.to_string())),
                };
                let recorded = flight.battery_after.fraction();
                if !(0.0..=1.0).contains(&recorded)
                    || !close(recorded, after.fraction(), BATTERY_TOLERANCE)
                {
                    return fail(
                        index,
                        Violation::Battery(format!(
                            "charge after flight is {} but plan records {recorded}",
                            after.fraction()
                        )),
                    );
                }
                battery = after;
                clock = arrive;
                node = flight.to;
            }
            _ => {
                return fail(
                    index,
                    Violation::Structure("legs must alternate event / flight".into()),
                );
            }
        }
    }

    if let Some(pkg) = dropped.iter().position(|d| !d) {
        return fail(
            plan.legs.len() - 1,
            Violation::Drop(format!("package #{pkg} never delivered")),
        );
    }
    let last = arrivals.values().copied().fold(request.depart_clock, f64::max);
    let delivery_time = last - request.depart_clock;
    if !close(plan.delivery_time, delivery_time, CLOCK_TOLERANCE) {
        return fail(
            plan.legs.len() - 1,
            Violation::DeliveryTime {
                expected: delivery_time,
                found: plan.delivery_time,
            },
        );
    }
    for (node, &t) in &plan.per_destination_arrival {
        if arrivals.get(node).is_none_or(|&a| !close(a, t, CLOCK_TOLERANCE)) {
            return fail(
                plan.legs.len() - 1,
                Violation::Drop(format!("arrival at {node} recorded as {t} h")),
            );
        }
    }
    Ok(Timeline {
        entries,
        delivery_time,
        per_destination_arrival: arrivals,
        recharges,
        total_wait,
    })
}
