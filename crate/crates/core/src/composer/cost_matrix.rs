use std::collections::HashMap;
use std::rc::Rc;

use super::search::{rcsp_frontier, SearchContext, SearchStats, SubPlan, TargetUse};
use crate::drone::BatteryState;
use crate::error::ComposeError;
use crate::net::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct EntryKey {
    from: NodeId,
    to: NodeId,
    clock: u64,
    battery: u64,
    payload: u64,
    // 0 = final leg, otherwise handling-time bits + 1
    target: u64,
}

/// Lazily filled delivery-time matrix between key nodes.
///
/// An entry depends on the departure clock, the charge and the payload on
/// board, so those are part of the cache key; entries are computed on first
/// use and reused by every destination ordering that reaches the same state.
pub struct CostMatrix<'v, 'a> {
    ctx: SearchContext<'v, 'a>,
    cache: HashMap<EntryKey, Rc<Result<Vec<SubPlan>, ComposeError>>>,
    pub stats: SearchStats,
    pub hits: u64,
    pub misses: u64,
}

impl<'v, 'a> CostMatrix<'v, 'a> {
    pub fn new(ctx: SearchContext<'v, 'a>) -> Self {
        CostMatrix {
            ctx,
            cache: HashMap::new(),
            stats: SearchStats::default(),
            hits: 0,
            misses: 0,
        }
    }

    pub fn context(&self) -> SearchContext<'v, 'a> {
        self.ctx
    }

    /// Non-dominated arrivals at `to` when leaving `from` at `clock` with
    /// `battery` charge and `payload` kg on board.
    pub fn entry(
        &mut self,
        from: NodeId,
        to: NodeId,
        clock: f64,
        battery: BatteryState,
        payload: f64,
        target: TargetUse,
    ) -> Rc<Result<Vec<SubPlan>, ComposeError>> {
        let key = EntryKey {
            from,
            to,
            clock: clock.to_bits(),
            battery: battery.fraction().to_bits(),
            payload: payload.to_bits(),
            target: match target {
                TargetUse::Final => 0,
                TargetUse::Continue { handling } => handling.to_bits().wrapping_add(1),
            },
        };
        if let Some(hit) = self.cache.get(&key) {
            self.hits += 1;
            return Rc::clone(hit);
        }
        self.misses += 1;
        let result = rcsp_frontier(
            self.ctx,
            payload,
            from,
            to,
            clock,
            battery,
            target,
            &mut self.stats,
        );
        let result = Rc::new(result);
        self.cache.insert(key, Rc::clone(&result));
        result
    }

    /// Earliest arrival clock for an entry, if reachable.
    pub fn arrival(
        &mut self,
        from: NodeId,
        to: NodeId,
        clock: f64,
        battery: BatteryState,
        payload: f64,
    ) -> Option<f64> {
        match &*self.entry(from, to, clock, battery, payload, TargetUse::Final) {
            Ok(subs) => subs.first().map(|s| s.arrive),
            Err(_) => None,
        }
    }

    pub fn len(&self) -> usize {
        self.cache.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cache.is_empty()
    }
}
