//! Skyway network model: stations and delivery targets joined by flyable segments.
//!
//! Every segment is one atomic drone service. Segments are undirected and the
//! network is immutable once built, so it can be shared freely across threads.

mod generate;
pub mod geometry;
mod io;
mod view;

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::NetworkError;
pub use generate::generate_network;
pub use geometry::{bearing, sector_cover, Point, Sector};
pub use io::{load_network, network_from_json, network_to_json, save_network, NETWORK_FORMAT};
pub use view::{induced_subgraph, sector_subgraph, NetworkView};

/// Segment lengths must agree with endpoint geometry to this tolerance (km).
pub const LENGTH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A rooftop: a recharging station when it has pads, otherwise a plain target.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub position: Point,
    pub pads: usize,
}

impl Node {
    pub fn is_station(&self) -> bool {
        self.pads > 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkywaySegment {
    pub from: NodeId,
    pub to: NodeId,
    pub length: f64,
}

impl SkywaySegment {
    /// The endpoint opposite `node`.
    pub fn other(&self, node: NodeId) -> NodeId {
        if node == self.from {
            self.to
        } else {
            self.from
        }
    }
}

/// Axis-aligned area with its corner at the origin, in km.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub width_km: f64,
    pub height_km: f64,
}

impl Bounds {
    pub fn new(width_km: f64, height_km: f64) -> Result<Self, NetworkError> {
        let b = Bounds {
            width_km,
            height_km,
        };
        b.validate()?;
        Ok(b)
    }

    fn validate(&self) -> Result<(), NetworkError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(self.width_km) && ok(self.height_km) {
            Ok(())
        } else {
            Err(NetworkError::InvalidBounds {
                width: self.width_km,
                height: self.height_km,
            })
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        (0.0..=self.width_km).contains(&p.x) && (0.0..=self.height_km).contains(&p.y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkywayNetwork {
    bounds: Bounds,
    nodes: Vec<Node>,
    segments: Vec<SkywaySegment>,
    // (neighbour, segment index), sorted by neighbour id
    adjacency: Vec<Vec<(NodeId, usize)>>,
}

impl SkywayNetwork {
    /// Builds and validates a network. Segment lengths are computed from
    /// the endpoint positions.
    pub fn new(
        bounds: Bounds,
        nodes: Vec<Node>,
        links: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self, NetworkError> {
        bounds.validate()?;
        if nodes.len() < 2 {
            return Err(NetworkError::TooFewNodes(nodes.len()));
        }
        let mut seen = HashSet::with_capacity(nodes.len());
        for (position, node) in nodes.iter().enumerate() {
            if !seen.insert(node.id) {
                return Err(NetworkError::DuplicateNode(node.id));
            }
            if node.id.0 != position {
                return Err(NetworkError::NonDenseIds {
                    position,
                    found: node.id.0,
                });
            }
            if !(node.position.x.is_finite() && node.position.y.is_finite()) {
                return Err(NetworkError::NonFinitePosition(node.id));
            }
            if !bounds.contains(node.position) {
                return Err(NetworkError::OutOfBounds(node.id));
            }
        }

        let n = nodes.len();
        let mut pairs = HashSet::new();
        let mut segments = Vec::new();
        let mut adjacency = vec![Vec::new(); n];
        for (a, b) in links {
            for id in [a, b] {
                if id.0 >= n {
                    return Err(NetworkError::UnknownNode(id));
                }
            }
            if a == b {
                return Err(NetworkError::SelfLoop(a));
            }
            let key = (a.min(b), a.max(b));
            if !pairs.insert(key) {
                return Err(NetworkError::DuplicateSegment(key.0, key.1));
            }
            let length = nodes[a.0].position.distance(&nodes[b.0].position);
            if !(length > 0.0) {
                // distinct nodes stacked on the same spot
                return Err(NetworkError::LengthMismatch {
                    from: a,
                    to: b,
                    stated: length,
                    actual: length,
                });
            }
            adjacency[a.0].push((b, segments.len()));
            adjacency[b.0].push((a, segments.len()));
            segments.push(SkywaySegment {
                from: a,
                to: b,
                length,
            });
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }

        let net = SkywayNetwork {
            bounds,
            nodes,
            segments,
            adjacency,
        };
        let reach = net.reachable_from(NodeId(0));
        if let Some(lost) = reach.iter().position(|r| !r) {
            return Err(NetworkError::Disconnected(NodeId(lost)));
        }
        Ok(net)
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn get(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(id.0)
    }

    pub fn segments(&self) -> &[SkywaySegment] {
        &self.segments
    }

    pub fn segment(&self, index: usize) -> &SkywaySegment {
        &self.segments[index]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn position(&self, id: NodeId) -> Point {
        self.nodes[id.0].position
    }

    pub fn distance(&self, a: NodeId, b: NodeId) -> f64 {
        self.position(a).distance(&self.position(b))
    }

    /// Neighbours of `id` with the index of the joining segment.
    pub fn neighbors(&self, id: NodeId) -> &[(NodeId, usize)] {
        &self.adjacency[id.0]
    }

    /// Segment index joining `a` and `b`, if any.
    pub fn segment_between(&self, a: NodeId, b: NodeId) -> Option<usize> {
        let adj = self.adjacency.get(a.0)?;
        adj.binary_search_by_key(&b, |&(n, _)| n)
            .ok()
            .map(|i| adj[i].1)
    }

    fn reachable_from(&self, src: NodeId) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([src]);
        seen[src.0] = true;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &self.adjacency[v.0] {
                if !seen[w.0] {
                    seen[w.0] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }
}
