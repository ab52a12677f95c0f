use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Bounds, Node, NodeId, Point, SkywayNetwork};
use crate::error::NetworkError;

/// Random geometric skyway network.
///
/// Nodes are placed uniformly in `bounds`; every pair closer than
/// `max_segment_len` is joined. When that leaves several components, the
/// shortest bridging pairs are added Kruskal-style until the network is
/// connected. Every node gets `pads_per_station` recharging pads.
pub fn generate_network(
    n_nodes: usize,
    bounds: Bounds,
    max_segment_len: f64,
    pads_per_station: usize,
    seed: u64,
) -> Result<SkywayNetwork, NetworkError> {
    if n_nodes < 2 {
        return Err(NetworkError::TooFewNodes(n_nodes));
    }
    let bounds = Bounds::new(bounds.width_km, bounds.height_km)?;
    if !(max_segment_len > 0.0) {
        return Err(NetworkError::InvalidSegmentLength(max_segment_len));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes: Vec<Node> = (0..n_nodes)
        .map(|i| Node {
            id: NodeId(i),
            position: Point::new(
                rng.gen_range(0.0..bounds.width_km),
                rng.gen_range(0.0..bounds.height_km),
            ),
            pads: pads_per_station,
        })
        .collect();

    let mut pairs = Vec::with_capacity(n_nodes * (n_nodes - 1) / 2);
    for i in 0..n_nodes {
        for j in i + 1..n_nodes {
            pairs.push((nodes[i].position.distance(&nodes[j].position), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut components = DisjointSet::new(n_nodes);
    let mut links = Vec::new();
    for &(d, i, j) in &pairs {
        if d <= max_segment_len {
            components.union(i, j);
            links.push((NodeId(i), NodeId(j)));
        }
    }
    for &(d, i, j) in &pairs {
        if components.count == 1 {
            break;
        }
        if d > max_segment_len && components.union(i, j) {
            links.push((NodeId(i), NodeId(j)));
        }
    }
    links.sort_unstable();

    SkywayNetwork::new(bounds, nodes, links)
}

struct DisjointSet {
    parent: Vec<usize>,
    count: usize,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            count: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        self.count -= 1;
        true
    }
}
