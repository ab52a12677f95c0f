//! Delivery requests and composition plans.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::drone::{BatteryState, DroneSpec, Package};
use crate::error::{FormatError, RequestError};
use crate::net::{NodeId, SkywayNetwork};
use crate::station::PadSlot;

pub const PLAN_FORMAT: &str = "skyway-plan/1";

/// Upper bound on destinations; orderings are enumerated exhaustively.
pub const MAX_DESTINATIONS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeliveryRequest {
    pub src: NodeId,
    pub packages: Vec<Package>,
    pub depart_clock: f64,
}

impl DeliveryRequest {
    pub fn new(src: NodeId, packages: Vec<Package>, depart_clock: f64) -> Self {
        DeliveryRequest {
            src,
            packages,
            depart_clock,
        }
    }

    pub fn total_payload(&self) -> f64 {
        self.packages.iter().map(|p| p.weight_kg).sum()
    }

    pub fn destinations(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.packages.iter().map(|p| p.destination)
    }

    pub fn validate(&self, net: &SkywayNetwork, spec: &DroneSpec) -> Result<(), RequestError> {
        if self.packages.is_empty() {
            return Err(RequestError::NoPackages);
        }
        if self.packages.len() > MAX_DESTINATIONS {
            return Err(RequestError::TooManyDestinations {
                count: self.packages.len(),
                limit: MAX_DESTINATIONS,
            });
        }
        if !self.depart_clock.is_finite() {
            return Err(RequestError::BadClock);
        }
        if net.get(self.src).is_none() {
            return Err(RequestError::UnknownNode(self.src));
        }
        let mut seen = HashSet::new();
        for p in &self.packages {
            if net.get(p.destination).is_none() {
                return Err(RequestError::UnknownNode(p.destination));
            }
            if p.destination == self.src {
                return Err(RequestError::DestinationIsSource(p.destination));
            }
            if !seen.insert(p.destination) {
                return Err(RequestError::DuplicateDestination(p.destination));
            }
            if !(p.weight_kg > 0.0 && p.weight_kg.is_finite()) {
                return Err(RequestError::BadWeight(p.destination));
            }
        }
        let total = self.total_payload();
        if total > spec.max_payload_kg {
            return Err(RequestError::Overweight {
                total,
                max: spec.max_payload_kg,
            });
        }
        Ok(())
    }
}

/// One flown skyway segment: a single drone service invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServiceInvocation {
    pub from: NodeId,
    pub to: NodeId,
    pub length_km: f64,
    pub depart: f64,
    pub arrive: f64,
    pub battery_after: BatteryState,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Recharge {
    pub pad: usize,
    /// Clock at which the drone asked for a pad.
    pub requested: f64,
    pub start: f64,
    pub wait: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeEventKind {
    PassThrough,
    Drop,
    Recharge,
    DropAndRecharge,
}

/// What happens at a node between two flights.
///
/// Drops happen on arrival, then the drop handling time elapses, then an
/// optional recharge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeEvent {
    pub node: NodeId,
    /// Indices into the request's package list.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub drops: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recharge: Option<Recharge>,
    pub clock_in: f64,
    pub clock_out: f64,
}

impl NodeEvent {
    fn arrive(node: NodeId, clock: f64) -> Self {
        NodeEvent {
            node,
            drops: Vec::new(),
            recharge: None,
            clock_in: clock,
            clock_out: clock,
        }
    }

    pub fn kind(&self) -> NodeEventKind {
        match (self.drops.is_empty(), self.recharge.is_some()) {
            (true, false) => NodeEventKind::PassThrough,
            (false, false) => NodeEventKind::Drop,
            (true, true) => NodeEventKind::Recharge,
            (false, true) => NodeEventKind::DropAndRecharge,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Leg {
    Event(NodeEvent),
    Flight(ServiceInvocation),
}

/// A complete multi-package delivery: node events alternating with flights,
/// starting and ending with an event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionPlan {
    pub request: DeliveryRequest,
    pub legs: Vec<Leg>,
    pub delivery_time: f64,
    pub per_destination_arrival: BTreeMap<NodeId, f64>,
}

impl CompositionPlan {
    pub fn events(&self) -> impl Iterator<Item = &NodeEvent> {
        self.legs.iter().filter_map(|l| match l {
            Leg::Event(e) => Some(e),
            Leg::Flight(_) => None,
        })
    }

    pub fn flights(&self) -> impl Iterator<Item = &ServiceInvocation> {
        self.legs.iter().filter_map(|l| match l {
            Leg::Flight(f) => Some(f),
            Leg::Event(_) => None,
        })
    }

    pub fn recharge_count(&self) -> usize {
        self.events().filter(|e| e.recharge.is_some()).count()
    }

    pub fn total_wait(&self) -> f64 {
        self.events().filter_map(|e| e.recharge.map(|r| r.wait)).fold(0.0, |a, w| a + w)
    }

    pub fn flown_km(&self) -> f64 {
        self.flights().map(|f| f.length_km).fold(0.0, |a, l| a + l)
    }

    /// Node sequence, including the source.
    pub fn route(&self) -> Vec<NodeId> {
        self.events().map(|e| e.node).collect()
    }

    /// Destination visit order.
    pub fn visit_order(&self) -> Vec<NodeId> {
        self.events()
            .filter(|e| !e.drops.is_empty())
            .map(|e| e.node)
            .collect()
    }
}

/// Elementary action used by the planners to describe a route.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Fly(ServiceInvocation),
    Recharge { node: NodeId, requested: f64, slot: PadSlot },
    Drop { node: NodeId, package: usize, arrive: f64, done: f64 },
}

/// Folds a step sequence into event/flight legs.
pub fn assemble_plan(request: &DeliveryRequest, steps: &[Step]) -> CompositionPlan {
    let mut legs = Vec::with_capacity(steps.len() * 2 + 1);
    let mut current = NodeEvent::arrive(request.src, request.depart_clock);
    let mut arrivals = BTreeMap::new();
    for step in steps {
        match step {
            Step::Fly(inv) => {
                let next = NodeEvent::arrive(inv.to, inv.arrive);
                legs.push(Leg::Event(std::mem::replace(&mut current, next)));
                legs.push(Leg::Flight(inv.clone()));
            }
            Step::Recharge {
                requested, slot, ..
            } => {
                current.recharge = Some(Recharge {
                    pad: slot.pad,
                    requested: *requested,
                    start: slot.start,
                    wait: slot.start - requested,
                });
                current.clock_out = slot.depart;
            }
            Step::Drop {
                node,
                package,
                arrive,
                done,
            } => {
                current.drops.push(*package);
                current.clock_out = *done;
                arrivals.insert(*node, *arrive);
            }
        }
    }
    legs.push(Leg::Event(current));
    let last = arrivals.values().copied().fold(request.depart_clock, f64::max);
    CompositionPlan {
        request: request.clone(),
        legs,
        delivery_time: last - request.depart_clock,
        per_destination_arrival: arrivals,
    }
}

#[derive(Serialize, Deserialize)]
struct PlanFile {
    format: String,
    request: DeliveryRequest,
    delivery_time_h: f64,
    per_destination_arrival: BTreeMap<NodeId, f64>,
    recharges: usize,
    total_wait_h: f64,
    legs: Vec<Leg>,
}

pub fn plan_to_json(plan: &CompositionPlan) -> String {
    let file = PlanFile {
        format: PLAN_FORMAT.to_string(),
        request: plan.request.clone(),
        delivery_time_h: plan.delivery_time,
        per_destination_arrival: plan.per_destination_arrival.clone(),
        recharges: plan.recharge_count(),
        total_wait_h: plan.total_wait(),
        legs: plan.legs.clone(),
    };
    serde_json::to_string_pretty(&file).expect("plan serializes")
}

pub fn plan_from_json(text: &str) -> Result<CompositionPlan, FormatError> {
    let file: PlanFile = serde_json::from_str(text)?;
    if file.format != PLAN_FORMAT {
        return Err(FormatError::Version {
            expected: PLAN_FORMAT.to_string(),
            found: file.format,
        });
    }
    Ok(CompositionPlan {
        request: file.request,
        legs: file.legs,
        delivery_time: file.delivery_time_h,
        per_destination_arrival: file.per_destination_arrival,
    })
}

pub fn save_plan(plan: &CompositionPlan, path: impl AsRef<Path>) -> Result<(), FormatError> {
    let path = path.as_ref();
    fs::write(path, plan_to_json(plan)).map_err(|e| FormatError::io(path, e))
}

pub fn load_plan(path: impl AsRef<Path>) -> Result<CompositionPlan, FormatError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    plan_from_json(&text)
}
