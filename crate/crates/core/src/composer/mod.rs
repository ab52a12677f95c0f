//! Graph-based drone service composition.
//!
//! The heuristic composer narrows the skyway network to the sector that
//! covers every destination as seen from the source, then runs the exact
//! composition engine inside it:
//!
//! 1. bearings from the source to every destination give the covering sector;
//! 2. the nodes inside the sector (plus source and destinations) form the subgraph;
//! 3. per-destination earliest-arrival routes are computed from the source;
//! 4. a lazily filled cost matrix answers every leg between key nodes;
//! 5. every destination order is evaluated and the fastest plan wins.
//!
//! If the subgraph cannot serve the request, the sector is widened until it
//! either can or equals the whole network. The exhaustive baseline runs the
//! same engine on the whole network.

mod cost_matrix;
pub mod search;

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

pub use cost_matrix::CostMatrix;
pub use search::{rcsp_frontier, rcsp_query, SearchContext, SearchStats, SubPlan, TargetUse};

use crate::drone::{BatteryState, DroneSpec};
use crate::error::ComposeError;
use crate::net::geometry::{DEFAULT_ANGLE_MARGIN, DEFAULT_RADIUS_MARGIN};
use crate::net::{sector_cover, sector_subgraph, NetworkView, NodeId, Sector, SkywayNetwork};
use crate::plan::{assemble_plan, CompositionPlan, DeliveryRequest, Step};
use crate::station::OccupancySchedule;

/// Delivery times closer than this are treated as ties.
pub const TIE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Heuristic,
    Exhaustive,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Heuristic => "heuristic",
            Algorithm::Exhaustive => "exhaustive",
        })
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "heuristic" => Ok(Algorithm::Heuristic),
            "exhaustive" => Ok(Algorithm::Exhaustive),
            other => Err(format!("unknown algorithm {other:?}")),
        }
    }
}

/// Widening applied to the covering sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Margins {
    /// Radians added on each side of the destination arc.
    pub angle: f64,
    /// Fractional growth of the radius beyond the farthest destination.
    pub radius: f64,
}

impl Default for Margins {
    fn default() -> Self {
        Margins {
            angle: DEFAULT_ANGLE_MARGIN,
            radius: DEFAULT_RADIUS_MARGIN,
        }
    }
}

impl Margins {
    /// Margins large enough that the sector covers every node of `net`.
    pub fn covering(net: &SkywayNetwork) -> Self {
        let b = net.bounds();
        Margins {
            angle: std::f64::consts::PI,
            // any destination is at least this far away, any node at most the diagonal
            radius: b.width_km.hypot(b.height_km) / min_spacing(net),
        }
    }

    fn widened(self) -> Self {
        Margins {
            angle: if self.angle > 0.0 {
                self.angle * 2.0
            } else {
                DEFAULT_ANGLE_MARGIN
            },
            radius: self.radius + 0.1,
        }
    }
}

fn min_spacing(net: &SkywayNetwork) -> f64 {
    let nodes = net.nodes();
    let mut best = f64::INFINITY;
    for (i, a) in nodes.iter().enumerate() {
        for b in &nodes[i + 1..] {
            best = best.min(a.position.distance(&b.position));
        }
    }
    best.max(f64::MIN_POSITIVE)
}

/// Bookkeeping from one compose call.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub algorithm: Algorithm,
    pub network_nodes: usize,
    pub subgraph_nodes: usize,
    pub subgraph_segments: usize,
    pub widening_rounds: usize,
    pub orders_evaluated: usize,
    pub rcsp_queries: u64,
    pub labels_expanded: u64,
    pub cache_hits: u64,
    pub cache_misses: u64,
    /// Earliest arrival at each destination when flown to directly from the
    /// source with the full load.
    pub per_destination: Vec<(NodeId, Option<f64>)>,
    pub sector: Option<Sector>,
    pub wall_clock_s: f64,
}

impl Diagnostics {
    fn new(algorithm: Algorithm, net: &SkywayNetwork) -> Self {
        Diagnostics {
            algorithm,
            network_nodes: net.node_count(),
            subgraph_nodes: 0,
            subgraph_segments: 0,
            widening_rounds: 0,
            orders_evaluated: 0,
            rcsp_queries: 0,
            labels_expanded: 0,
            cache_hits: 0,
            cache_misses: 0,
            per_destination: Vec::new(),
            sector: None,
            wall_clock_s: 0.0,
        }
    }

    fn absorb(&mut self, cm: &CostMatrix<'_, '_>) {
        self.rcsp_queries += cm.stats.queries;
        self.labels_expanded += cm.stats.labels_expanded;
        self.cache_hits += cm.hits;
        self.cache_misses += cm.misses;
    }
}

#[derive(Clone)]
struct Partial {
    node: NodeId,
    clock: f64,
    battery: BatteryState,
    last_arrival: f64,
    steps: Vec<Step>,
}

/// Outcome of the ordering search over one view.
pub struct OrderSearch {
    pub plan: Result<CompositionPlan, ComposeError>,
    pub orders_evaluated: usize,
}

/// Evaluates every destination order through `cm` and keeps the fastest.
///
/// Each order is followed exactly: legs start at the true clock and charge
/// left by the previous leg, with the payload shrinking after each drop.
/// Ties within [`TIE_EPS`] go to the lexicographically smallest sequence of
/// destination ids.
pub fn best_plan_with(cm: &mut CostMatrix<'_, '_>, request: &DeliveryRequest) -> OrderSearch {
    let spec = *cm.context().spec;
    let handling = spec.drop_handling_hours;
    let mut by_id: Vec<usize> = (0..request.packages.len()).collect();
    by_id.sort_by_key(|&i| request.packages[i].destination);

    let mut best: Option<(f64, Vec<Step>)> = None;
    let mut orders_evaluated = 0;
    let k = by_id.len();
    for order in by_id.iter().copied().permutations(k) {
        orders_evaluated += 1;
        let mut frontier = vec![Partial {
            node: request.src,
            clock: request.depart_clock,
            battery: BatteryState::FULL,
            last_arrival: request.depart_clock,
            steps: Vec::new(),
        }];
        let mut payload = request.total_payload();
        for (pos, &pkg) in order.iter().enumerate() {
            let dest = request.packages[pkg].destination;
            let target = if pos + 1 == k {
                TargetUse::Final
            } else {
                TargetUse::Continue { handling }
            };
            let mut next = Vec::new();
            for p in &frontier {
                let entry = cm.entry(p.node, dest, p.clock, p.battery, payload, target);
                let Ok(subs) = &*entry else { continue };
                for sub in subs {
                    let mut steps = Vec::with_capacity(p.steps.len() + sub.steps.len() + 1);
                    steps.extend_from_slice(&p.steps);
                    steps.extend_from_slice(&sub.steps);
                    let done = sub.arrive + handling;
                    steps.push(Step::Drop {
                        node: dest,
                        package: pkg,
                        arrive: sub.arrive,
                        done,
                    });
                    next.push(Partial {
                        node: dest,
                        clock: done,
                        battery: sub.battery,
                        last_arrival: sub.arrive,
                        steps,
                    });
                }
            }
            frontier = pareto(next);
            payload = (payload - request.packages[pkg].weight_kg).max(0.0);
            if frontier.is_empty() {
                break;
            }
        }
        let Some(done) = frontier
            .into_iter()
            .min_by(|a, b| a.last_arrival.total_cmp(&b.last_arrival))
        else {
            continue;
        };
        let delivery = done.last_arrival - request.depart_clock;
        if best.as_ref().is_none_or(|(t, _)| delivery < t - TIE_EPS) {
            best = Some((delivery, done.steps));
        }
    }
    OrderSearch {
        plan: best
            .map(|(_, steps)| assemble_plan(request, &steps))
            .ok_or(ComposeError::Infeasible),
        orders_evaluated,
    }
}

// Keeps arrivals not beaten on both clock and charge; earliest first.
fn pareto(mut items: Vec<Partial>) -> Vec<Partial> {
    items.sort_by(|a, b| {
        a.clock
            .total_cmp(&b.clock)
            .then(b.battery.fraction().total_cmp(&a.battery.fraction()))
    });
    let mut kept: Vec<Partial> = Vec::with_capacity(items.len());
    for item in items {
        let beaten = kept
            .iter()
            .any(|k| k.battery.fraction() >= item.battery.fraction() - search::BATTERY_EPS);
        if !beaten {
            kept.push(item);
        }
    }
    kept
}

/// Fastest plan for `request` using only the nodes of `view`.
pub fn best_plan(
    view: &NetworkView<'_>,
    sched: &OccupancySchedule,
    spec: &DroneSpec,
    request: &DeliveryRequest,
) -> Result<CompositionPlan, ComposeError> {
    request.validate(view.network(), spec)?;
    let mut cm = CostMatrix::new(SearchContext { view, sched, spec });
    best_plan_with(&mut cm, request).plan
}

pub(crate) fn per_destination(
    cm: &mut CostMatrix<'_, '_>,
    request: &DeliveryRequest,
) -> Vec<(NodeId, Option<f64>)> {
    let payload = request.total_payload();
    request
        .destinations()
        .map(|d| {
            let arrival = cm.arrival(request.src, d, request.depart_clock, BatteryState::FULL, payload);
            (d, arrival)
        })
        .collect()
}

/// Runs the engine on `view`, folding the search counters into `diag`.
pub(crate) fn solve_view(
    view: &NetworkView<'_>,
    sched: &OccupancySchedule,
    spec: &DroneSpec,
    request: &DeliveryRequest,
    diag: &mut Diagnostics,
) -> Result<CompositionPlan, ComposeError> {
    let mut cm = CostMatrix::new(SearchContext { view, sched, spec });
    diag.per_destination = per_destination(&mut cm, request);
    let search = best_plan_with(&mut cm, request);
    diag.subgraph_nodes = view.node_count();
    diag.subgraph_segments = view.segments().count();
    diag.orders_evaluated = search.orders_evaluated;
    diag.absorb(&cm);
    search.plan
}

pub(crate) struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    pub(crate) fn start() -> Self {
        Stopwatch {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    pub(crate) fn seconds(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.start.elapsed().as_secs_f64()
        }
        #[cfg(target_arch = "wasm32")]
        {
            0.0
        }
    }
}

/// Sector-subgraph composition.
///
/// Widens the sector (angle margin doubled, radius margin +0.1 per round)
/// while the subgraph cannot serve every destination, stopping once it
/// covers the whole network.
pub fn compose_heuristic(
    net: &SkywayNetwork,
    sched: &OccupancySchedule,
    spec: &DroneSpec,
    request: &DeliveryRequest,
    margins: Margins,
) -> Result<(CompositionPlan, Diagnostics), ComposeError> {
    let clock = Stopwatch::start();
    request.validate(net, spec)?;
    let mut diag = Diagnostics::new(Algorithm::Heuristic, net);

    let src = net.position(request.src);
    let dst_points: Vec<_> = request.destinations().map(|d| net.position(d)).collect();
    let mut forced = vec![request.src];
    forced.extend(request.destinations());

    let mut margins = margins;
    let mut tried: Option<Vec<bool>> = None;
    loop {
        let sector = sector_cover(src, &dst_points, margins.angle, margins.radius)?;
        let view = sector_subgraph(net, &sector, &forced);
        if tried.as_deref() != Some(view.mask()) {
            let reach = view.reachable_from(request.src);
            diag.sector = Some(sector);
            if request.destinations().all(|d| reach[d.0]) {
                match solve_view(&view, sched, spec, request, &mut diag) {
                    Ok(plan) => {
                        diag.wall_clock_s = clock.seconds();
                        return Ok((plan, diag));
                    }
                    Err(ComposeError::Infeasible) => {}
                    Err(e) => return Err(e),
                }
            } else {
                diag.subgraph_nodes = view.node_count();
                diag.subgraph_segments = view.segments().count();
            }
            if view.is_full() {
                diag.wall_clock_s = clock.seconds();
                return Err(ComposeError::Infeasible);
            }
            tried = Some(view.mask().to_vec());
        }
        margins = margins.widened();
        diag.widening_rounds += 1;
    }
}

#[cfg(test)]
mod tests;
