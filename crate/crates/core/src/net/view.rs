use std::collections::VecDeque;

use super::{Node, NodeId, Sector, SkywayNetwork, SkywaySegment};

/// A node-induced subgraph of a [`SkywayNetwork`] that keeps the parent's ids.
#[derive(Debug, Clone)]
pub struct NetworkView<'a> {
    net: &'a SkywayNetwork,
    keep: Vec<bool>,
    kept: usize,
}

impl<'a> NetworkView<'a> {
    pub fn full(net: &'a SkywayNetwork) -> Self {
        NetworkView {
            net,
            keep: vec![true; net.node_count()],
            kept: net.node_count(),
        }
    }

    pub fn network(&self) -> &'a SkywayNetwork {
        self.net
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.keep.get(id.0).copied().unwrap_or(false)
    }

    pub fn node_count(&self) -> usize {
        self.kept
    }

    pub fn is_full(&self) -> bool {
        self.kept == self.net.node_count()
    }

    pub fn mask(&self) -> &[bool] {
        &self.keep
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.keep
            .iter()
            .enumerate()
            .filter(|(_, &k)| k)
            .map(|(i, _)| NodeId(i))
    }

    /// Neighbours of `id` inside the view, with the parent segment index.
    pub fn neighbors(&self, id: NodeId) -> impl Iterator<Item = (NodeId, usize)> + '_ {
        self.net
            .neighbors(id)
            .iter()
            .copied()
            .filter(move |(w, _)| self.keep[w.0])
    }

    /// Parent segments with both endpoints retained.
    pub fn segments(&self) -> impl Iterator<Item = (usize, &'a SkywaySegment)> + '_ {
        self.net
            .segments()
            .iter()
            .enumerate()
            .filter(|(_, s)| self.keep[s.from.0] && self.keep[s.to.0])
    }

    /// Nodes reachable from `src` using only retained segments.
    pub fn reachable_from(&self, src: NodeId) -> Vec<bool> {
        let mut seen = vec![false; self.keep.len()];
        if !self.contains(src) {
            return seen;
        }
        seen[src.0] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for (w, _) in self.neighbors(v) {
                if !seen[w.0] {
                    seen[w.0] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }
}

/// Keeps every node satisfying `keep` plus the `forced` ones.
///
/// The result may be disconnected; the composer decides what to do then.
pub fn induced_subgraph<'a>(
    net: &'a SkywayNetwork,
    keep: impl Fn(&Node) -> bool,
    forced: &[NodeId],
) -> NetworkView<'a> {
    let mut mask: Vec<bool> = net.nodes().iter().map(&keep).collect();
    for id in forced {
        if let Some(slot) = mask.get_mut(id.0) {
            *slot = true;
        }
    }
    let kept = mask.iter().filter(|&&k| k).count();
    NetworkView {
        net,
        keep: mask,
        kept,
    }
}

/// Subgraph of the nodes inside `sector`, with `forced` always retained.
pub fn sector_subgraph<'a>(
    net: &'a SkywayNetwork,
    sector: &Sector,
    forced: &[NodeId],
) -> NetworkView<'a> {
    induced_subgraph(net, |n| sector.contains(n.position), forced)
}
