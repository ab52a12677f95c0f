use std::collections::BTreeMap;

use super::*;
use crate::bench::replay;
use crate::drone::Package;
use crate::exhaustive::compose_exhaustive;
use crate::net::{generate_network, Bounds, Node, Point};
use crate::station::{generate_schedule, BusyInterval};

fn network(width: f64, height: f64, nodes: &[(f64, f64, usize)], links: &[(usize, usize)]) -> SkywayNetwork {
    let nodes = nodes
        .iter()
        .enumerate()
        .map(|(i, &(x, y, pads))| Node {
            id: NodeId(i),
            position: Point::new(x, y),
            pads,
        })
        .collect();
    SkywayNetwork::new(
        Bounds::new(width, height).unwrap(),
        nodes,
        links.iter().map(|&(a, b)| (NodeId(a), NodeId(b))),
    )
    .unwrap()
}

fn pkg(dst: usize, weight_kg: f64) -> Package {
    Package {
        weight_kg,
        destination: NodeId(dst),
    }
}

fn request(src: usize, packages: Vec<Package>) -> DeliveryRequest {
    DeliveryRequest::new(NodeId(src), packages, 0.0)
}

fn spec() -> DroneSpec {
    DroneSpec::default()
}

fn grid(side: usize, spacing: f64, pads: usize) -> SkywayNetwork {
    let mut nodes = Vec::new();
    let mut links = Vec::new();
    for r in 0..side {
        for c in 0..side {
            let id = r * side + c;
            nodes.push((c as f64 * spacing, r as f64 * spacing, pads));
            if c + 1 < side {
                links.push((id, id + 1));
            }
            if r + 1 < side {
                links.push((id, id + side));
            }
        }
    }
    let extent = (side - 1) as f64 * spacing;
    network(extent, extent, &nodes, &links)
}

#[test]
fn path_graph_arrival() {
    let net = network(
        10.0,
        10.0,
        &[(0.0, 0.0, 0), (2.0, 0.0, 0), (4.0, 0.0, 0), (6.0, 0.0, 0)],
        &[(0, 1), (1, 2), (2, 3)],
    );
    let sched = OccupancySchedule::empty(&net);
    let req = request(0, vec![pkg(3, 1.0)]);
    let (plan, diag) = compose_heuristic(&net, &sched, &spec(), &req, Margins::default()).unwrap();
    assert!((plan.delivery_time - 6.0 / 82.8).abs() < 1e-12);
    assert_eq!(plan.route(), vec![NodeId(0), NodeId(1), NodeId(2), NodeId(3)]);
    assert_eq!(plan.recharge_count(), 0);
    assert_eq!(diag.orders_evaluated, 1);
    replay(&plan, &net, &sched, &spec()).unwrap();
}

#[test]
fn query_to_self_is_free() {
    let net = network(10.0, 10.0, &[(0.0, 0.0, 1), (2.0, 0.0, 0)], &[(0, 1)]);
    let sched = OccupancySchedule::empty(&net);
    let view = NetworkView::full(&net);
    let ctx = SearchContext {
        view: &view,
        sched: &sched,
        spec: &spec(),
    };
    let mut stats = SearchStats::default();
    let half = BatteryState::new(0.5).unwrap();
    let sub = rcsp_query(ctx, 2.0, NodeId(0), NodeId(0), 3.25, half, &mut stats).unwrap();
    assert_eq!(sub.arrive, 3.25);
    assert_eq!(sub.battery, half);
    assert!(sub.steps.is_empty());
}

#[test]
fn segment_beyond_range_is_infeasible() {
    let net = network(50.0, 10.0, &[(0.0, 0.0, 2), (40.0, 0.0, 2)], &[(0, 1)]);
    let sched = OccupancySchedule::empty(&net);
    let req = request(0, vec![pkg(1, 0.5)]);
    let err = compose_heuristic(&net, &sched, &spec(), &req, Margins::default()).unwrap_err();
    assert!(matches!(err, ComposeError::Infeasible));
    let err = compose_exhaustive(&net, &sched, &spec(), &req).unwrap_err();
    assert!(matches!(err, ComposeError::Infeasible));
}

#[test]
fn invalid_request_is_rejected() {
    let net = network(10.0, 10.0, &[(0.0, 0.0, 0), (2.0, 0.0, 0)], &[(0, 1)]);
    let sched = OccupancySchedule::empty(&net);
    let err = compose_heuristic(&net, &sched, &spec(), &request(0, vec![pkg(0, 1.0)]), Margins::default())
        .unwrap_err();
    assert!(matches!(err, ComposeError::Request(_)));
    let err = compose_exhaustive(&net, &sched, &spec(), &request(0, vec![pkg(1, 16.0)])).unwrap_err();
    assert!(matches!(err, ComposeError::Request(_)));
}

#[test]
fn collinear_destinations_visited_nearest_first() {
    let net = network(
        25.0,
        5.0,
        &[(0.0, 0.0, 0), (10.0, 0.0, 0), (20.0, 0.0, 0)],
        &[(0, 1), (1, 2)],
    );
    let sched = OccupancySchedule::empty(&net);
    let req = request(0, vec![pkg(2, 1.0), pkg(1, 1.0)]);
    let (plan, diag) = compose_heuristic(&net, &sched, &spec(), &req, Margins::default()).unwrap();
    assert_eq!(plan.visit_order(), vec![NodeId(1), NodeId(2)]);
    assert!((plan.delivery_time - 20.0 / 82.8).abs() < 1e-12);
    assert_eq!(diag.orders_evaluated, 2);
    replay(&plan, &net, &sched, &spec()).unwrap();
}

#[test]
fn symmetric_tie_visits_lower_id_first() {
    let net = network(
        20.0,
        20.0,
        &[(10.0, 10.0, 0), (5.0, 10.0, 0), (15.0, 10.0, 0)],
        &[(0, 1), (0, 2)],
    );
    let sched = OccupancySchedule::empty(&net);
    // listing the higher id first must not change the outcome
    let req = request(0, vec![pkg(2, 1.0), pkg(1, 1.0)]);
    let (plan, _) = compose_heuristic(&net, &sched, &spec(), &req, Margins::default()).unwrap();
    assert_eq!(plan.visit_order(), vec![NodeId(1), NodeId(2)]);
    let (exhaustive, _) = compose_exhaustive(&net, &sched, &spec(), &req).unwrap();
    assert_eq!(exhaustive, plan);
}

#[test]
fn every_order_is_evaluated() {
    let net = grid(4, 3.0, 2);
    let sched = OccupancySchedule::empty(&net);
    let view = NetworkView::full(&net);
    let s = spec();
    let mut factorial = 1;
    for k in 1..=5 {
        factorial *= k;
        let packages = (1..=k).map(|i| pkg(i * 3, 0.5)).collect();
        let req = request(0, packages);
        let mut cm = CostMatrix::new(SearchContext {
            view: &view,
            sched: &sched,
            spec: &s,
        });
        let search = best_plan_with(&mut cm, &req);
        assert_eq!(search.orders_evaluated, factorial);
        let plan = search.plan.unwrap();
        replay(&plan, &net, &sched, &s).unwrap();
    }
}

#[test]
fn cost_matrix_matches_direct_queries() {
    let net = generate_network(20, Bounds::new(40.0, 40.0).unwrap(), 12.0, 2, 3).unwrap();
    let sched = generate_schedule(&net, 24.0, 0.5, 2.15, 4).unwrap();
    let view = NetworkView::full(&net);
    let s = spec();
    let ctx = SearchContext {
        view: &view,
        sched: &sched,
        spec: &s,
    };
    let mut cm = CostMatrix::new(ctx);
    for from in [0, 5, 11] {
        for to in 0..net.node_count() {
            let (from, to) = (NodeId(from), NodeId(to));
            let mut stats = SearchStats::default();
            let direct = rcsp_query(ctx, 2.0, from, to, 1.5, BatteryState::FULL, &mut stats)
                .ok()
                .map(|s| s.arrive);
            assert_eq!(cm.arrival(from, to, 1.5, BatteryState::FULL, 2.0), direct);
        }
    }
    let misses = cm.misses;
    assert_eq!(cm.len() as u64, misses);
    cm.arrival(NodeId(5), NodeId(7), 1.5, BatteryState::FULL, 2.0);
    assert_eq!(cm.misses, misses);
    assert_eq!(cm.hits, 1);
}

/// Long line of stations with destinations 46, 74 and 92 km out.
fn long_line() -> (SkywayNetwork, DeliveryRequest) {
    let xs = [0.0, 9.2, 18.4, 27.6, 36.8, 46.0, 55.0, 64.0, 74.0, 83.0, 92.0];
    let nodes: Vec<_> = xs.iter().map(|&x| (x, 0.0, 2)).collect();
    let links: Vec<_> = (0..xs.len() - 1).map(|i| (i, i + 1)).collect();
    let net = network(100.0, 10.0, &nodes, &links);
    let req = request(0, vec![pkg(5, 1.0), pkg(8, 1.0), pkg(10, 1.0)]);
    (net, req)
}

#[test]
fn long_route_needs_several_recharges() {
    let (net, req) = long_line();
    let sched = OccupancySchedule::empty(&net);
    let (plan, _) = compose_heuristic(&net, &sched, &spec(), &req, Margins::default()).unwrap();
    assert!(plan.recharge_count() >= 2);
    assert_eq!(plan.visit_order(), vec![NodeId(5), NodeId(8), NodeId(10)]);
    let floor = 92.0 / 82.8 + plan.recharge_count() as f64 * 2.15;
    assert!(plan.delivery_time >= floor - 1e-9);
    assert!((plan.delivery_time - floor).abs() < 1e-9, "no waiting on free pads");
    assert_eq!(plan.per_destination_arrival.len(), 3);
    replay(&plan, &net, &sched, &spec()).unwrap();
    let (exhaustive, _) = compose_exhaustive(&net, &sched, &spec(), &req).unwrap();
    assert_eq!(exhaustive, plan);
}

#[test]
fn busy_pads_never_speed_things_up() {
    let (net, req) = long_line();
    let s = spec();
    let free = OccupancySchedule::empty(&net);
    let (base, _) = compose_exhaustive(&net, &free, &s, &req).unwrap();

    let mut stations = BTreeMap::new();
    for node in net.nodes() {
        let shift = node.id.0 as f64 * 0.1;
        let pads = vec![
            vec![BusyInterval {
                start: 0.5 + shift,
                end: 3.0 + shift,
            }],
            vec![BusyInterval {
                start: 0.0,
                end: 2.0 + shift,
            }],
        ];
        stations.insert(node.id, pads);
    }
    let busy = OccupancySchedule::from_stations(&net, stations).unwrap();
    let (slowed, _) = compose_exhaustive(&net, &busy, &s, &req).unwrap();
    assert!(slowed.delivery_time >= base.delivery_time - 1e-12);
    assert!(slowed.total_wait() > 0.0);
    replay(&slowed, &net, &busy, &s).unwrap();

    for seed in 0..5 {
        let sched = generate_schedule(&net, 24.0, 0.6, 2.15, seed).unwrap();
        let (plan, _) = compose_exhaustive(&net, &sched, &s, &req).unwrap();
        assert!(plan.delivery_time >= base.delivery_time - 1e-12);
    }
}

#[test]
fn narrow_cone_keeps_fewer_nodes() {
    let net = grid(5, 5.0, 2);
    let sched = OccupancySchedule::empty(&net);
    // source at the middle of the left edge, destinations due east
    let req = request(10, vec![pkg(14, 1.0), pkg(19, 1.0)]);
    let (plan, diag) = compose_heuristic(&net, &sched, &spec(), &req, Margins::default()).unwrap();
    assert!(diag.subgraph_nodes < net.node_count(), "{} nodes kept", diag.subgraph_nodes);
    assert_eq!(diag.widening_rounds, 0);
    let sector = diag.sector.unwrap();
    assert!(sector.width() < std::f64::consts::FRAC_PI_2);
    let (exhaustive, ediag) = compose_exhaustive(&net, &sched, &spec(), &req).unwrap();
    assert_eq!(ediag.subgraph_nodes, 25);
    assert!((plan.delivery_time - exhaustive.delivery_time).abs() < 1e-12);
    assert!(diag.labels_expanded < ediag.labels_expanded);
}

#[test]
fn sector_widens_around_detour() {
    // the only way from 0 to 1 runs through node 2, far off the direct bearing
    let net = network(
        25.0,
        25.0,
        &[(0.0, 10.0, 0), (20.0, 10.0, 0), (10.0, 18.0, 0)],
        &[(0, 2), (2, 1)],
    );
    let sched = OccupancySchedule::empty(&net);
    let req = request(0, vec![pkg(1, 1.0)]);
    let (plan, diag) = compose_heuristic(&net, &sched, &spec(), &req, Margins::default()).unwrap();
    assert_eq!(diag.widening_rounds, 2);
    assert_eq!(diag.subgraph_nodes, 3);
    assert_eq!(plan.route(), vec![NodeId(0), NodeId(2), NodeId(1)]);
}

#[test]
fn full_cover_margins_reproduce_exhaustive() {
    let net = generate_network(25, Bounds::new(50.0, 50.0).unwrap(), 12.0, 4, 8).unwrap();
    let sched = generate_schedule(&net, 24.0, 0.5, 2.15, 8).unwrap();
    let req = request(0, vec![pkg(7, 1.0), pkg(13, 2.0), pkg(21, 0.5)]);
    let covering = Margins::covering(&net);
    match (
        compose_heuristic(&net, &sched, &spec(), &req, covering),
        compose_exhaustive(&net, &sched, &spec(), &req),
    ) {
        (Ok((h, hd)), Ok((e, _))) => {
            assert_eq!(hd.subgraph_nodes, net.node_count());
            assert_eq!(h, e);
        }
        (Err(_), Err(_)) => {}
        other => panic!("feasibility differs: {other:?}"),
    }
}

#[test]
fn pareto_drops_dominated_arrivals() {
    let at = |clock: f64, battery: f64| Partial {
        node: NodeId(0),
        clock,
        battery: BatteryState::new(battery).unwrap(),
        last_arrival: clock,
        steps: Vec::new(),
    };
    let kept = pareto(vec![at(2.0, 0.5), at(1.0, 0.4), at(1.5, 0.3), at(3.0, 1.0)]);
    let clocks: Vec<f64> = kept.iter().map(|p| p.clock).collect();
    assert_eq!(clocks, vec![1.0, 2.0, 3.0]);
}

#[test]
fn widening_grows_both_margins() {
    let w = Margins { angle: 0.0, radius: 0.0 }.widened();
    assert_eq!(w.angle, DEFAULT_ANGLE_MARGIN);
    assert!((w.radius - 0.1).abs() < 1e-15);
    let w = Margins::default().widened();
    assert_eq!(w.angle, 2.0 * DEFAULT_ANGLE_MARGIN);
}
