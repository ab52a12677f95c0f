//! Exhaustive baseline composer and a brute-force oracle for tiny instances.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::composer::{solve_view, Algorithm, Diagnostics, Stopwatch, TIE_EPS};
use crate::drone::{BatteryState, DroneSpec, RANGE_SLACK_KM};
use crate::error::ComposeError;
use crate::net::{NetworkView, NodeId, SkywayNetwork};
use crate::plan::{assemble_plan, CompositionPlan, DeliveryRequest, ServiceInvocation, Step};
use crate::station::OccupancySchedule;

pub const ORACLE_MAX_NODES: usize = 7;
pub const ORACLE_MAX_DESTINATIONS: usize = 2;

// Floating-point slack when comparing a hop with the shortest distance.
const HOP_TOLERANCE_KM: f64 = 1e-9;

/// Composition over every service in the network.
pub fn compose_exhaustive(
    net: &SkywayNetwork,
    sched: &OccupancySchedule,
    spec: &DroneSpec,
    request: &DeliveryRequest,
) -> Result<(CompositionPlan, Diagnostics), ComposeError> {
    let clock = Stopwatch::start();
    request.validate(net, spec)?;
    let mut diag = Diagnostics {
        algorithm: Algorithm::Exhaustive,
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
    };
    let view = NetworkView::full(net);
    let plan = solve_view(&view, sched, spec, request, &mut diag);
    diag.wall_clock_s = clock.seconds();
    plan.map(|p| (p, diag))
}

/// Enumerates every plan and simulates each one end to end.
///
/// Candidates are all destination orders, and for each leg every walk to the
/// next destination made of hops joined at recharge stops, each node
/// recharging at most once per leg. Within a leg the payload is fixed, so
/// flight time and charge used both grow with distance; a hop between two
/// stops is therefore only worth flying if it is a shortest path that does
/// not pass through the leg's destination, and only such hops are expanded.
/// A second recharge at the same node in one leg would restart from an
/// earlier, identical state, so it is never needed either.
///
/// Ties go to the lexicographically smallest node sequence.
pub fn brute_force_oracle(
    net: &SkywayNetwork,
    sched: &OccupancySchedule,
    spec: &DroneSpec,
    request: &DeliveryRequest,
) -> Result<CompositionPlan, ComposeError> {
    if net.node_count() > ORACLE_MAX_NODES {
        return Err(ComposeError::TooLarge(format!(
            "{} nodes (limit {ORACLE_MAX_NODES})",
            net.node_count()
        )));
    }
    if request.packages.len() > ORACLE_MAX_DESTINATIONS {
        return Err(ComposeError::TooLarge(format!(
            "{} destinations (limit {ORACLE_MAX_DESTINATIONS})",
            request.packages.len()
        )));
    }
    request.validate(net, spec)?;

    let mut oracle = Oracle {
        net,
        sched,
        spec,
        request,
        dist: all_pairs_distance(net, None),
        avoiding: (0..net.node_count()).map(|t| all_pairs_distance(net, Some(t))).collect(),
        best: None,
        steps: Vec::new(),
    };
    for order in (0..request.packages.len()).permutations(request.packages.len()) {
        oracle.run_order(&order);
    }
    oracle
        .best
        .map(|b| assemble_plan(request, &b.steps))
        .ok_or(ComposeError::Infeasible)
}

struct Candidate {
    delivery: f64,
    route: Vec<NodeId>,
    steps: Vec<Step>,
}

struct Oracle<'a> {
    net: &'a SkywayNetwork,
    sched: &'a OccupancySchedule,
    spec: &'a DroneSpec,
    request: &'a DeliveryRequest,
    // shortest graph distance between every pair of nodes, ignoring charge
    dist: Vec<Vec<f64>>,
    // avoiding[t][a][b]: shortest a-b distance with no intermediate stop at t
    avoiding: Vec<Vec<Vec<f64>>>,
    best: Option<Candidate>,
    steps: Vec<Step>,
}

#[derive(Clone, Copy)]
struct Here {
    node: NodeId,
    clock: f64,
    battery: BatteryState,
    payload: f64,
    // where the current hop started and how far it has flown
    hop_from: NodeId,
    hop_km: f64,
}

impl Here {
    fn stop(self) -> Self {
        Here {
            hop_from: self.node,
            hop_km: 0.0,
            ..self
        }
    }
}

impl Oracle<'_> {
    fn run_order(&mut self, order: &[usize]) {
        let here = Here {
            node: self.request.src,
            clock: self.request.depart_clock,
            battery: BatteryState::FULL,
            payload: self.request.total_payload(),
            hop_from: self.request.src,
            hop_km: 0.0,
        };
        self.leg(order, 0, here, &mut BTreeSet::from([here.node]), &mut BTreeSet::new());
    }

    /// True when no completion of the current walk can match the incumbent.
    ///
    /// The bound flies the remaining destinations along shortest paths at
    /// cruise speed, plus one recharge when the charge on board cannot even
    /// cover the distance to the next destination.
    fn bound_exceeded(&self, order: &[usize], pos: usize, here: &Here) -> bool {
        let Some(best) = &self.best else {
            return false;
        };
        let dest = |i: usize| self.request.packages[order[i]].destination.0;
        let to_target = self.dist[here.node.0][dest(pos)];
        let mut remaining = to_target;
        for i in pos + 1..order.len() {
            remaining += self.dist[dest(i - 1)][dest(i)];
        }
        let mut lower = remaining / self.spec.cruise_speed_kmh();
        let range = self.spec.flight_range(here.payload).unwrap_or(0.0);
        if here.battery.fraction() * range + RANGE_SLACK_KM < to_target {
            lower += self.spec.recharge_hours;
        }
        here.clock + lower - self.request.depart_clock > best.delivery + TIE_EPS
    }

    fn leg(
        &mut self,
        order: &[usize],
        pos: usize,
        here: Here,
        visited: &mut BTreeSet<NodeId>,
        recharged: &mut BTreeSet<NodeId>,
    ) {
        if self.bound_exceeded(order, pos, &here) {
            return;
        }
        let pkg = order[pos];
        let target = self.request.packages[pkg].destination;

        for &(next, seg) in self.net.neighbors(here.node) {
            if visited.contains(&next) {
                continue;
            }
            let length = self.net.segment(seg).length;
            let hop_km = here.hop_km + length;
            if hop_km > self.avoiding[target.0][here.hop_from.0][next.0] + HOP_TOLERANCE_KM {
                continue;
            }
            let Ok(after) = self.spec.consume(here.battery, here.payload, length) else {
                continue;
            };
            let arrive = here.clock + self.spec.travel_time(length).expect("positive length");
            self.steps.push(Step::Fly(ServiceInvocation {
                from: here.node,
                to: next,
                length_km: length,
                depart: here.clock,
                arrive,
                battery_after: after,
            }));
            let there = Here {
                node: next,
                clock: arrive,
                battery: after,
                payload: here.payload,
                hop_from: here.hop_from,
                hop_km,
            };
            if next == target {
                self.arrive_at_destination(order, pos, there);
            } else {
                visited.insert(next);
                self.leg(order, pos, there, visited, recharged);
                visited.remove(&next);
            }
            self.steps.pop();
        }

        // recharging a full battery only loses time
        if self.net.node(here.node).is_station()
            && here.battery < BatteryState::FULL
            && !recharged.contains(&here.node)
        {
            let slot = self
                .sched
                .ready_time(here.node, here.clock, self.spec.recharge_hours)
                .expect("station has pads");
            self.steps.push(Step::Recharge {
                node: here.node,
                requested: here.clock,
                slot,
            });
            recharged.insert(here.node);
            let charged = Here {
                clock: slot.depart,
                battery: BatteryState::FULL,
                ..here.stop()
            };
            let mut fresh = BTreeSet::from([here.node]);
            self.leg(order, pos, charged, &mut fresh, recharged);
            recharged.remove(&here.node);
            self.steps.pop();
        }
    }

    fn arrive_at_destination(&mut self, order: &[usize], pos: usize, here: Here) {
        let pkg = order[pos];
        let done = here.clock + self.spec.drop_handling_hours;
        self.steps.push(Step::Drop {
            node: here.node,
            package: pkg,
            arrive: here.clock,
            done,
        });
        if pos + 1 == order.len() {
            self.offer(here.clock - self.request.depart_clock);
        } else {
            let next = Here {
                clock: done,
                payload: (here.payload - self.request.packages[pkg].weight_kg).max(0.0),
                ..here.stop()
            };
            self.leg(
                order,
                pos + 1,
                next,
                &mut BTreeSet::from([here.node]),
                &mut BTreeSet::new(),
            );
        }
        self.steps.pop();
    }

    fn offer(&mut self, delivery: f64) {
        let route = route_of(self.request.src, &self.steps);
        let better = match &self.best {
            None => true,
            Some(b) if delivery < b.delivery - TIE_EPS => true,
            Some(b) if delivery <= b.delivery + TIE_EPS => route < b.route,
            Some(_) => false,
        };
        if better {
            self.best = Some(Candidate {
                delivery,
                route,
                steps: self.steps.clone(),
            });
        }
    }
}

// Floyd-Warshall; `excluded` may be an endpoint but never an intermediate stop.
fn all_pairs_distance(net: &SkywayNetwork, excluded: Option<usize>) -> Vec<Vec<f64>> {
    let n = net.node_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for s in net.segments() {
        d[s.from.0][s.to.0] = s.length;
        d[s.to.0][s.from.0] = s.length;
    }
    for k in (0..n).filter(|&k| Some(k) != excluded) {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

fn route_of(src: NodeId, steps: &[Step]) -> Vec<NodeId> {
    let mut route = vec![src];
    route.extend(steps.iter().filter_map(|s| match s {
        Step::Fly(inv) => Some(inv.to),
        _ => None,
    }));
    route
}
