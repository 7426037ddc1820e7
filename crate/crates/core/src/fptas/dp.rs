//! The scaled dynamic program over one transfer window.
//!
//! Resources are scanned in [`ScanOrder`]. Each is sold, given to agent 1 or
//! given to agent 2, where the window decides which agents may receive it.
//! States are keyed by the number of sales and the scaled sums; each key
//! keeps its cheapest partial plan.

use indexmap::IndexMap;
use rustc_hash::FxBuildHasher;

use super::roles::ScanOrder;
use super::scaling::ScaledInstance;
use crate::instance::{Budget, Instance};
use crate::set::ResourceSet;

/// Which agent gives up resources inside the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Agent 1 hands the tail of its side to agent 2.
    OneToTwo,
    /// Agent 2 hands the head of its side to agent 1.
    TwoToOne,
}

/// Boundary positions (1-based, in scan order) of one transfer window.
///
/// With [`Direction::OneToTwo`], position `i` may go to agent 1 when it is
/// on agent 1's side and `i ≤ i_left`, and to agent 2 when it is on agent
/// 2's side or `i ≥ i_left`; `i_right` is `n`. With [`Direction::TwoToOne`],
/// position `i` may go to agent 1 when it is on agent 1's side or
/// `i ≤ i_right`, and to agent 2 when it is on agent 2's side and
/// `i ≥ i_right`; `i_left` is `0`. The boundary position itself may go to
/// either agent. Any position may be sold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TransferWindow {
    pub i_left: usize,
    pub i_right: usize,
    pub direction: Direction,
}

impl TransferWindow {
    /// Whether agent 1 and agent 2 may receive the resource at position `i`.
    pub fn allows(&self, scan: &ScanOrder, i: usize) -> (bool, bool) {
        let mine = scan.in_a1(i);
        match self.direction {
            Direction::OneToTwo => (mine && i <= self.i_left, !mine || i >= self.i_left),
            Direction::TwoToOne => (mine || i <= self.i_right, !mine && i >= self.i_right),
        }
    }
}

/// Every window of `scan` that yields a distinct set of allowed placements:
/// agent 1 keeps a prefix of its side, or agent 2 gives up a prefix of its.
pub fn windows_for(scan: &ScanOrder) -> Vec<TransferWindow> {
    let n = scan.len();
    let mut out: Vec<TransferWindow> = (0..=(scan.a1_len + 1).min(n))
        .map(|i_left| TransferWindow {
            i_left,
            i_right: n,
            direction: Direction::OneToTwo,
        })
        .collect();
    // i_right = a1_len coincides with i_left = a1_len + 1 (no transfer)
    let first = if scan.a1_len < n { scan.a1_len + 1 } else { n + 1 };
    out.extend((first..=n).map(|i_right| TransferWindow {
        i_left: 0,
        i_right,
        direction: Direction::TwoToOne,
    }));
    out
}

/// Number of sales and scaled sums of a partial plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DpKey {
    pub o: u32,
    pub su1: u64,
    pub su2: u64,
    /// Scaled revenue, rounded down per resource.
    pub sp: u64,
}

/// The cheapest partial plan reaching a key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DpEntry {
    pub s0: ResourceSet,
    pub s1: ResourceSet,
    pub s2: ResourceSet,
    pub cost: u64,
}

type Layer = IndexMap<DpKey, DpEntry, FxBuildHasher>;

/// Runs the program over all of `scan` and returns the final layer: every
/// reachable key with its cheapest plan, whose sale cost fits `budget`.
/// Placements whose scaled value is excluded by the guess are not taken.
pub fn dp_solve(
    inst: &Instance,
    scaled: &ScaledInstance,
    scan: &ScanOrder,
    window: TransferWindow,
    budget: Budget,
) -> Vec<(DpKey, DpEntry)> {
    let start = DpEntry {
        s0: ResourceSet::EMPTY,
        s1: ResourceSet::EMPTY,
        s2: ResourceSet::EMPTY,
        cost: 0,
    };
    let mut layer: Layer = Layer::default();
    layer.insert(
        DpKey {
            o: 0,
            su1: 0,
            su2: 0,
            sp: 0,
        },
        start,
    );

    for (pos, &r) in scan.order.iter().enumerate() {
        let (to_one, to_two) = window.allows(scan, pos + 1);
        let sale = match (scaled.p_down[r], inst.resource(r).cost.finite()) {
            (Some(p), Some(c)) if budget.admits(c) => Some((p, c)),
            _ => None,
        };
        let mut next: Layer = Layer::with_capacity_and_hasher(layer.len() * 2, FxBuildHasher);
        let mut offer = |key: DpKey, entry: DpEntry| {
            next.entry(key)
                .and_modify(|e| {
                    if entry.cost < e.cost {
                        *e = entry;
                    }
                })
                .or_insert(entry);
        };
        for (key, e) in &layer {
            if let Some((p, c)) = sale {
                let cost = e.cost + c;
                if budget.admits(cost) {
                    let k = DpKey {
                        o: key.o + 1,
                        sp: key.sp + p,
                        ..*key
                    };
                    offer(
                        k,
                        DpEntry {
                            s0: e.s0.with(r),
                            cost,
                            ..*e
                        },
                    );
                }
            }
            if to_one {
                if let Some(v) = scaled.u1[r] {
                    let k = DpKey {
                        su1: key.su1 + v,
                        ..*key
                    };
                    offer(k, DpEntry { s1: e.s1.with(r), ..*e });
                }
            }
            if to_two {
                if let Some(v) = scaled.u2[r] {
                    let k = DpKey {
                        su2: key.su2 + v,
                        ..*key
                    };
                    offer(k, DpEntry { s2: e.s2.with(r), ..*e });
                }
            }
        }
        layer = next;
    }
    layer.into_iter().collect()
}
