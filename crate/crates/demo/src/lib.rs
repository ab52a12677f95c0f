//! Browser demo: generate a skyway network, compose a delivery with either
//! composer, and plot the payload-range curve.
//!
//! Every export returns a JSON string that `www/index.html` draws on a
//! canvas. The same functions are plain Rust, so they are tested natively.

use serde_json::{json, Value};
use skyway_core::net::{generate_network, sector_subgraph};
use skyway_core::station::generate_schedule;
use skyway_core::{
    compose_exhaustive, compose_heuristic, Algorithm, Bounds, ComposeError, Config, DeliveryRequest, DroneSpec,
    Margins, NodeId, OccupancySchedule, Package, SkywayNetwork,
};
use wasm_bindgen::prelude::*;

/// A generated network with its background station schedule.
#[wasm_bindgen]
pub struct World {
    net: SkywayNetwork,
    sched: OccupancySchedule,
    spec: DroneSpec,
}

#[wasm_bindgen]
impl World {
    /// Random network of `nodes` rooftops on a `width` x `height` km area
    /// with pads busy for `load` of each day. Uses the default drone.
    #[wasm_bindgen(constructor)]
    pub fn new(nodes: usize, width: f64, height: f64, max_segment_km: f64, load: f64, seed: u32) -> Result<World, String> {
        let cfg = Config::default();
        let bounds = Bounds::new(width, height).map_err(|e| e.to_string())?;
        let seed = u64::from(seed);
        let net = generate_network(nodes, bounds, max_segment_km, cfg.network.pads_per_station, seed)
            .map_err(|e| e.to_string())?;
        let sched = generate_schedule(
            &net,
            cfg.schedule.horizon_h,
            load,
            cfg.drone.recharge_hours,
            seed.wrapping_add(1),
        )
        .map_err(|e| e.to_string())?;
        Ok(World {
            net,
            sched,
            spec: cfg.drone,
        })
    }

    /// Nodes (`id`, `x`, `y`, `pads`, busy fraction) and segments.
    #[wasm_bindgen(js_name = networkJson)]
    pub fn network_json(&self) -> String {
        let horizon = Config::default().schedule.horizon_h;
        let b = self.net.bounds();
        let nodes: Vec<Value> = self
            .net
            .nodes()
            .iter()
            .map(|n| {
                let busy: f64 = (0..n.pads)
                    .map(|p| self.sched.busy_hours(n.id, p, horizon))
                    .fold(0.0, |a, h| a + h);
                json!({
                    "id": n.id.0,
                    "x": n.position.x,
                    "y": n.position.y,
                    "pads": n.pads,
                    "busy": if n.pads > 0 { busy / (n.pads as f64 * horizon) } else { 0.0 },
                })
            })
            .collect();
        let segments: Vec<Value> = self
            .net
            .segments()
            .iter()
            .map(|s| json!([s.from.0, s.to.0, s.length]))
            .collect();
        json!({
            "width": b.width_km,
            "height": b.height_km,
            "nodes": nodes,
            "segments": segments,
        })
        .to_string()
    }

    /// Composes a delivery from `src` to every node in `dsts`, each package
    /// weighing `kg`. `algo` is `heuristic` or `exhaustive`.
    ///
    /// On success returns the route, events, totals, the final `sector` and
    /// the `subgraph` node ids that were searched; otherwise `{ok: false,
    /// infeasible, error}`.
    pub fn compose(&self, src: usize, dsts: &[u32], kg: f64, algo: &str, angle_margin: f64, radius_margin: f64) -> String {
        compose_json(self, src, dsts, kg, algo, Margins { angle: angle_margin, radius: radius_margin }).to_string()
    }
}

fn compose_json(world: &World, src: usize, dsts: &[u32], kg: f64, algo: &str, margins: Margins) -> Value {
    let algo: Algorithm = match algo.parse() {
        Ok(a) => a,
        Err(e) => return json!({ "ok": false, "error": e }),
    };
    let packages = dsts
        .iter()
        .map(|&d| Package {
            weight_kg: kg,
            destination: NodeId(d as usize),
        })
        .collect();
    let request = DeliveryRequest::new(NodeId(src), packages, 0.0);
    let result = match algo {
        Algorithm::Heuristic => compose_heuristic(&world.net, &world.sched, &world.spec, &request, margins),
        Algorithm::Exhaustive => compose_exhaustive(&world.net, &world.sched, &world.spec, &request),
    };
    let (plan, diag) = match result {
        Ok(found) => found,
        Err(e) => {
            return json!({
                "ok": false,
                "infeasible": matches!(e, ComposeError::Infeasible | ComposeError::UnreachableLeg { .. }),
                "error": e.to_string(),
            })
        }
    };
    let subgraph: Vec<usize> = match &diag.sector {
        Some(sector) => {
            let mut forced = vec![request.src];
            forced.extend(request.destinations());
            sector_subgraph(&world.net, sector, &forced).node_ids().map(|n| n.0).collect()
        }
        None => (0..world.net.node_count()).collect(),
    };
    let events: Vec<Value> = plan
        .events()
        .map(|e| {
            json!({
                "node": e.node.0,
                "drop": !e.drops.is_empty(),
                "recharge": e.recharge.is_some(),
                "wait": e.recharge.map_or(0.0, |r| r.wait),
                "in": e.clock_in,
                "out": e.clock_out,
            })
        })
        .collect();
    json!({
        "ok": true,
        "algo": algo.to_string(),
        "route": plan.route().iter().map(|n| n.0).collect::<Vec<_>>(),
        "order": plan.visit_order().iter().map(|n| n.0).collect::<Vec<_>>(),
        "events": events,
        "delivery_h": plan.delivery_time,
        "wait_h": plan.total_wait(),
        "recharges": plan.recharge_count(),
        "flown_km": plan.flown_km(),
        "sector": diag.sector,
        "subgraph": subgraph,
        "stats": {
            "subgraph_nodes": diag.subgraph_nodes,
            "network_nodes": diag.network_nodes,
            "widening_rounds": diag.widening_rounds,
            "orders": diag.orders_evaluated,
            "labels": diag.labels_expanded,
        },
    })
}

/// `[[payload_kg, range_km], ...]` for the default drone, `samples` points
/// from empty to full load.
#[wasm_bindgen(js_name = rangeCurve)]
pub fn range_curve(samples: usize) -> String {
    let spec = DroneSpec::default();
    let n = samples.max(2);
    let points: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let kg = spec.max_payload_kg * i as f64 / (n - 1) as f64;
            [kg, spec.flight_range(kg).expect("payload within limits")]
        })
        .collect();
    json!(points).to_string()
}
