//! Time-dependent, battery-constrained earliest-arrival search.
//!
//! Labels are `(node, clock, battery)`. At a station the search branches on
//! flying on versus landing for a full recharge at the earliest free pad.
//! Label A dominates B at the same node when it is no later and carries no
//! less charge. Recharge completion is non-decreasing in arrival time, so a
//! dominated label can never lead to a better arrival and is discarded.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::drone::{BatteryState, DroneSpec};
use crate::error::ComposeError;
use crate::net::{NetworkView, NodeId};
use crate::plan::{ServiceInvocation, Step};
use crate::station::{OccupancySchedule, PadSlot};

/// Battery slack used in dominance tests.
pub const BATTERY_EPS: f64 = 1e-9;

/// Everything the search needs besides the query itself.
#[derive(Clone, Copy)]
pub struct SearchContext<'v, 'a> {
    pub view: &'v NetworkView<'a>,
    pub sched: &'v OccupancySchedule,
    pub spec: &'v DroneSpec,
}

/// A partial route from the query origin to its target.
#[derive(Debug, Clone, PartialEq)]
pub struct SubPlan {
    pub arrive: f64,
    pub battery: BatteryState,
    pub steps: Vec<Step>,
}

/// What the caller intends to do at the target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetUse {
    /// Only the earliest arrival matters.
    Final,
    /// The drone continues after `handling` hours; keep every arrival that
    /// could still pay off, i.e. the Pareto set of (clock, battery).
    Continue { handling: f64 },
}

#[derive(Debug, Default, Clone, Copy)]
pub struct SearchStats {
    pub queries: u64,
    pub labels_expanded: u64,
    pub labels_created: u64,
}

#[derive(Clone, Copy)]
enum Action {
    Start,
    Fly(usize),
    Recharge(PadSlot),
}

struct Label {
    node: NodeId,
    clock: f64,
    battery: f64,
    parent: usize,
    action: Action,
    alive: bool,
}

#[derive(PartialEq)]
struct Queued {
    clock: f64,
    battery: f64,
    id: usize,
}

impl Eq for Queued {}

impl Ord for Queued {
    // BinaryHeap is a max-heap: earliest clock first, then most charge, then oldest
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .clock
            .total_cmp(&self.clock)
            .then(self.battery.total_cmp(&other.battery))
            .then(other.id.cmp(&self.id))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Search<'s, 'v, 'a> {
    ctx: SearchContext<'v, 'a>,
    payload: f64,
    labels: Vec<Label>,
    buckets: Vec<Vec<usize>>,
    heap: BinaryHeap<Queued>,
    stats: &'s mut SearchStats,
}

impl Search<'_, '_, '_> {
    fn push(&mut self, label: Label) {
        let bucket = &mut self.buckets[label.node.0];
        for &id in bucket.iter() {
            let other = &self.labels[id];
            if other.clock <= label.clock && other.battery >= label.battery - BATTERY_EPS {
                return;
            }
        }
        let labels = &mut self.labels;
        bucket.retain(|&id| {
            let other = &mut labels[id];
            let dominated = label.clock <= other.clock && label.battery >= other.battery - BATTERY_EPS;
            if dominated {
                other.alive = false;
            }
            !dominated
        });
        let id = self.labels.len();
        self.heap.push(Queued {
            clock: label.clock,
            battery: label.battery,
            id,
        });
        self.buckets[label.node.0].push(id);
        self.labels.push(label);
        self.stats.labels_created += 1;
    }

    fn expand(&mut self, id: usize) {
        let (node, clock, battery) = {
            let l = &self.labels[id];
            (l.node, l.clock, l.battery)
        };
        let spec = self.ctx.spec;
        let net = self.ctx.view.network();

        if net.node(node).is_station() && battery < 1.0 {
            let slot = self
                .ctx
                .sched
                .ready_time(node, clock, spec.recharge_hours)
                .expect("station has pads");
            self.push(Label {
                node,
                clock: slot.depart,
                battery: 1.0,
                parent: id,
                action: Action::Recharge(slot),
                alive: true,
            });
        }

        let charge = BatteryState::new(battery).expect("battery within [0, 1]");
        for (next, seg) in self.ctx.view.neighbors(node) {
            let length = net.segment(seg).length;
            let Ok(after) = spec.consume(charge, self.payload, length) else {
                continue;
            };
            let travel = spec.travel_time(length).expect("segment length is positive");
            self.push(Label {
                node: next,
                clock: clock + travel,
                battery: after.fraction(),
                parent: id,
                action: Action::Fly(seg),
                alive: true,
            });
        }
    }

    fn reconstruct(&self, mut id: usize) -> SubPlan {
        let net = self.ctx.view.network();
        let last = &self.labels[id];
        let (arrive, battery) = (last.clock, last.battery);
        let mut steps = Vec::new();
        loop {
            let l = &self.labels[id];
            let parent = &self.labels[l.parent];
            match l.action {
                Action::Start => break,
                Action::Fly(seg) => {
                    let length = net.segment(seg).length;
                    steps.push(Step::Fly(ServiceInvocation {
                        from: parent.node,
                        to: l.node,
                        length_km: length,
                        depart: parent.clock,
                        arrive: l.clock,
                        battery_after: BatteryState::new(l.battery).expect("battery within [0, 1]"),
                    }));
                }
                Action::Recharge(slot) => steps.push(Step::Recharge {
                    node: l.node,
                    requested: parent.clock,
                    slot,
                }),
            }
            id = l.parent;
        }
        steps.reverse();
        SubPlan {
            arrive,
            battery: BatteryState::new(battery).expect("battery within [0, 1]"),
            steps,
        }
    }
}

/// Non-dominated arrivals at `to`, earliest first.
///
/// With [`TargetUse::Final`] only the earliest arrival is returned.
#[allow(clippy::too_many_arguments)]
pub fn rcsp_frontier(
    ctx: SearchContext<'_, '_>,
    payload: f64,
    from: NodeId,
    to: NodeId,
    start_clock: f64,
    start_battery: BatteryState,
    target: TargetUse,
    stats: &mut SearchStats,
) -> Result<Vec<SubPlan>, ComposeError> {
    stats.queries += 1;
    if from == to {
        return Ok(vec![SubPlan {
            arrive: start_clock,
            battery: start_battery,
            steps: Vec::new(),
        }]);
    }
    let n = ctx.view.network().node_count();
    let mut search = Search {
        ctx,
        payload,
        labels: Vec::new(),
        buckets: vec![Vec::new(); n],
        heap: BinaryHeap::new(),
        stats,
    };
    search.push(Label {
        node: from,
        clock: start_clock,
        battery: start_battery.fraction(),
        parent: 0,
        action: Action::Start,
        alive: true,
    });

    let target_station = ctx.view.network().node(to).is_station();
    let mut found: Vec<usize> = Vec::new();
    // Later target arrivals are useless once the clock passes this point.
    let mut horizon = f64::INFINITY;
    while let Some(Queued { id, clock, .. }) = search.heap.pop() {
        if clock >= horizon {
            break;
        }
        if !search.labels[id].alive {
            continue;
        }
        search.stats.labels_expanded += 1;
        if search.labels[id].node != to {
            search.expand(id);
            continue;
        }
        found.push(id);
        match target {
            TargetUse::Final => break,
            TargetUse::Continue { handling } => {
                if search.labels[id].battery >= 1.0 - BATTERY_EPS {
                    break;
                }
                if found.len() == 1 && target_station {
                    // Recharging right at the target after the first arrival
                    // beats any arrival landing after that recharge ends.
                    let slot = ctx
                        .sched
                        .ready_time(to, clock + handling, ctx.spec.recharge_hours)
                        .expect("station has pads");
                    horizon = slot.depart - handling;
                }
            }
        }
    }

    if found.is_empty() {
        let reached = search.buckets.iter().filter(|b| !b.is_empty()).count();
        return Err(ComposeError::UnreachableLeg { from, to, reached });
    }
    Ok(found
        .into_iter()
        .filter(|&id| search.labels[id].alive)
        .map(|id| search.reconstruct(id))
        .collect())
}

/// Earliest-arrival route from `from` to `to`.
#[allow(clippy::too_many_arguments)]
pub fn rcsp_query(
    ctx: SearchContext<'_, '_>,
    payload: f64,
    from: NodeId,
    to: NodeId,
    start_clock: f64,
    start_battery: BatteryState,
    stats: &mut SearchStats,
) -> Result<SubPlan, ComposeError> {
    let mut frontier = rcsp_frontier(
        ctx,
        payload,
        from,
        to,
        start_clock,
        start_battery,
        TargetUse::Final,
        stats,
    )?;
    Ok(frontier.swap_remove(0))
}
