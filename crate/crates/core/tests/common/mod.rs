//! Seeded instance builders shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skyway_core::net::{generate_network, Node};
use skyway_core::station::generate_schedule;
use skyway_core::{Bounds, DeliveryRequest, NodeId, OccupancySchedule, Package, SkywayNetwork};

pub struct Small {
    pub net: SkywayNetwork,
    pub sched: OccupancySchedule,
    pub request: DeliveryRequest,
}

/// A random tiny instance: 3-7 nodes, a mix of stations and plain targets,
/// busy pads, one or two destinations and loads heavy enough that some
/// legs need a recharge.
pub fn small_instance(seed: u64) -> Small {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=7);
    let bounds = Bounds::new(30.0, 30.0).unwrap();
    let base = generate_network(n, bounds, 14.0, 0, rng.gen()).unwrap();
    let nodes: Vec<Node> = base
        .nodes()
        .iter()
        .map(|node| Node {
            pads: rng.gen_range(0..=2),
            ..node.clone()
        })
        .collect();
    let links: Vec<_> = base.segments().iter().map(|s| (s.from, s.to)).collect();
    let net = SkywayNetwork::new(bounds, nodes, links).unwrap();
    let load = rng.gen_range(0.0..0.8);
    let sched = generate_schedule(&net, 24.0, load, 2.15, rng.gen()).unwrap();

    let k = rng.gen_range(1..=2usize);
    let picked = rand::seq::index::sample(&mut rng, n, k + 1).into_vec();
    let packages = picked[1..]
        .iter()
        .map(|&d| Package {
            weight_kg: rng.gen_range(0.5..7.0),
            destination: NodeId(d),
        })
        .collect();
    let depart = rng.gen_range(0.0..6.0);
    Small {
        net,
        sched,
        request: DeliveryRequest::new(NodeId(picked[0]), packages, depart),
    }
}
