//! Resource roles for the dynamic program: who prefers what, which side each
//! resource starts on, and the order in which the program scans resources.

use crate::aw::RatioOrder;
use crate::instance::{Agent, Instance};
use crate::set::ResourceSet;

/// Resources by preference: `r1` strictly preferred by agent 1, `r2` by
/// agent 2, `r0` valued equally.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Preference {
    pub r0: ResourceSet,
    pub r1: ResourceSet,
    pub r2: ResourceSet,
}

impl Preference {
    pub fn of(inst: &Instance) -> Self {
        let mut p = Preference {
            r0: ResourceSet::EMPTY,
            r1: ResourceSet::EMPTY,
            r2: ResourceSet::EMPTY,
        };
        for (i, r) in inst.resources().iter().enumerate() {
            match r.u1.cmp(&r.u2) {
                std::cmp::Ordering::Greater => p.r1.insert(i),
                std::cmp::Ordering::Less => p.r2.insert(i),
                std::cmp::Ordering::Equal => p.r0.insert(i),
            }
        }
        p
    }
}

/// One way of seeding the two sides before transfers: `a1` starts with
/// agent 1, `a2` with agent 2. With `swapped` set, the sides refer to the
/// instance with agent names interchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RoleVariant {
    pub swapped: bool,
    pub a1: ResourceSet,
    pub a2: ResourceSet,
}

/// The preference partition of `inst` and every role variant: both agent
/// namings, each with equally valued resources seeded on either side. When no
/// resource is valued equally the two seedings coincide and only one is kept.
pub fn partition_roles(inst: &Instance) -> (Preference, Vec<RoleVariant>) {
    let pref = Preference::of(inst);
    let mut variants = Vec::with_capacity(4);
    for swapped in [false, true] {
        // under swapped names agent 1 is the original agent 2
        let (mine, theirs) = if swapped {
            (pref.r2, pref.r1)
        } else {
            (pref.r1, pref.r2)
        };
        variants.push(RoleVariant {
            swapped,
            a1: mine,
            a2: theirs.union(pref.r0),
        });
        if !pref.r0.is_empty() {
            variants.push(RoleVariant {
                swapped,
                a1: mine.union(pref.r0),
                a2: theirs,
            });
        }
    }
    (pref, variants)
}

/// Scan order of the dynamic program over an (already oriented) instance:
/// `a1` by non-increasing `u1/u2`, then `a2` likewise.
///
/// Equal ratios are ordered so that the tail of the `a1` part is exactly the
/// sequence agent 1 would transfer first, and the head of the `a2` part what
/// agent 2 would transfer first. Transfer windows therefore contain the
/// split-free Adjusted Winner allocations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanOrder {
    /// Resource index at each list position (0-based).
    pub order: Vec<usize>,
    /// Number of leading positions that belong to `a1`.
    pub a1_len: usize,
}

impl ScanOrder {
    pub fn new(inst: &Instance, a1: ResourceSet, a2: ResourceSet) -> Self {
        let mut order = RatioOrder::new(inst, a1, Agent::One).order;
        order.reverse();
        order.extend(RatioOrder::new(inst, a2, Agent::Two).order);
        ScanOrder {
            order,
            a1_len: a1.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Whether the resource at 1-based position `i` belongs to `a1`.
    pub fn in_a1(&self, i: usize) -> bool {
        i <= self.a1_len
    }
}
