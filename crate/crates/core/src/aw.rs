//! The Adjusted Winner procedure: the classic two-phase algorithm with its
//! single fractional split, and the split-free sub-plan that underlies every
//! AW-derived plan.

use std::cmp::Ordering;

use num_rational::BigRational;
use thiserror::Error;

use crate::instance::{Agent, Instance};
use crate::plan::Plan;
use crate::rational::{int, ratio};
use crate::set::ResourceSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AwError {
    #[error("ZeroTotalUtility: both agents value every resource at 0")]
    ZeroTotalUtility,
}

/// Transfer order away from the `advantaged` agent: `u_a(r)/u_b(r)`
/// non-decreasing, resources with `u_b(r) = 0` last, ties by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioOrder {
    pub order: Vec<usize>,
    pub advantaged: Agent,
}

/// Compares `u_a(i)/u_b(i)` with `u_a(j)/u_b(j)`; a zero denominator ranks as
/// +∞ and equal ratios fall back to the index.
pub fn compare_ratio(inst: &Instance, advantaged: Agent, i: usize, j: usize) -> Ordering {
    let b = advantaged.other();
    let (ri, rj) = (inst.resource(i), inst.resource(j));
    let (ai, bi) = (ri.utility(advantaged) as u128, ri.utility(b) as u128);
    let (aj, bj) = (rj.utility(advantaged) as u128, rj.utility(b) as u128);
    let by_ratio = match (bi == 0, bj == 0) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        (false, false) => (ai * bj).cmp(&(aj * bi)),
    };
    by_ratio.then(i.cmp(&j))
}

impl RatioOrder {
    /// Orders the resources in `candidates`.
    pub fn new(inst: &Instance, candidates: ResourceSet, advantaged: Agent) -> RatioOrder {
        let mut order: Vec<usize> = candidates.iter().collect();
        order.sort_by(|&i, &j| compare_ratio(inst, advantaged, i, j));
        RatioOrder { order, advantaged }
    }
}

/// Phase 1 on `set`: strictly preferred resources go to agent 1, the rest
/// (ties included) to agent 2.
pub fn phase_one(inst: &Instance, set: ResourceSet) -> (ResourceSet, ResourceSet) {
    let g1: ResourceSet = set
        .iter()
        .filter(|&i| {
            let r = inst.resource(i);
            r.u1 > r.u2
        })
        .collect();
    (g1, set.difference(g1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub resource: usize,
    /// Fraction of the resource retained by the advantaged agent, in (0, 1).
    pub retained: BigRational,
    pub advantaged: Agent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicAwOutcome {
    /// Whole resources of agent 1; a split resource is in neither set.
    pub s1: ResourceSet,
    pub s2: ResourceSet,
    pub split: Option<Split>,
    /// Whole-resource transfers of Phase 2, in order.
    pub transferred: Vec<usize>,
    /// Utilities `(u1(S1), u2(S2))` of the whole resources just before the
    /// split, split resource still with the advantaged agent.
    pub before_split: (u64, u64),
    pub w1: BigRational,
    pub w2: BigRational,
}

/// The classic procedure on all resources, ignoring prices, costs and budget.
pub fn classic_aw(inst: &Instance) -> Result<ClassicAwOutcome, AwError> {
    if inst.total(Agent::One) == 0 {
        return Err(AwError::ZeroTotalUtility);
    }
    let (mut s1, mut s2) = phase_one(inst, inst.all());
    let mut w = [inst.utility(Agent::One, s1), inst.utility(Agent::Two, s2)];
    let mut transferred = Vec::new();
    let mut split = None;

    if w[0] != w[1] {
        let a = if w[0] > w[1] { Agent::One } else { Agent::Two };
        let (ia, ib) = slot(a);
        let held = if a == Agent::One { s1 } else { s2 };
        for r in RatioOrder::new(inst, held, a).order {
            let res = inst.resource(r);
            let (ua, ub) = (res.utility(a), res.utility(a.other()));
            let (wa, wb) = (w[ia] - ua, w[ib] + ub);
            if wa < wb {
                let retained = int(1) - ratio(w[ia] - w[ib], ua + ub);
                split = Some(Split {
                    resource: r,
                    retained,
                    advantaged: a,
                });
                break;
            }
            move_resource(&mut s1, &mut s2, r, a);
            (w[ia], w[ib]) = (wa, wb);
            transferred.push(r);
            if wa == wb {
                break;
            }
        }
    }

    let before_split = (w[0], w[1]);
    let (w1, w2) = match &split {
        None => (int(w[0]), int(w[1])),
        Some(sp) => {
            let res = inst.resource(sp.resource);
            let keep = &sp.retained;
            let give = int(1) - keep;
            match sp.advantaged {
                Agent::One => {
                    s1 = s1.without(sp.resource);
                    (int(w[0] - res.u1) + keep * int(res.u1), int(w[1]) + give * int(res.u2))
                }
                Agent::Two => {
                    s2 = s2.without(sp.resource);
                    (int(w[0]) + give * int(res.u1), int(w[1] - res.u2) + keep * int(res.u2))
                }
            }
        }
    };
    Ok(ClassicAwOutcome {
        s1,
        s2,
        split,
        transferred,
        before_split,
        w1,
        w2,
    })
}

fn slot(a: Agent) -> (usize, usize) {
    match a {
        Agent::One => (0, 1),
        Agent::Two => (1, 0),
    }
}

fn move_resource(s1: &mut ResourceSet, s2: &mut ResourceSet, r: usize, from: Agent) {
    match from {
        Agent::One => {
            *s1 = s1.without(r);
            *s2 = s2.with(r);
        }
        Agent::Two => {
            *s2 = s2.without(r);
            *s1 = s1.with(r);
        }
    }
}

/// Why the split-free Phase 2 stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HaltReason {
    /// The next transfer would have made the advantaged agent worse off.
    SplitGuard,
    /// The remaining gap is no larger than the sale revenue.
    RevenueGuard,
    /// Both agents' utilities are equal.
    Equality,
}

impl HaltReason {
    pub fn as_str(self) -> &'static str {
        match self {
            HaltReason::SplitGuard => "split-guard",
            HaltReason::RevenueGuard => "revenue-guard",
            HaltReason::Equality => "equality",
        }
    }
}

/// Both transfer orders over all resources, computed once per instance so
/// repeated sub-plan queries only filter them.
#[derive(Clone, Debug)]
pub struct AwContext<'a> {
    inst: &'a Instance,
    /// Transfer order when agent 1 / agent 2 is advantaged.
    orders: [Vec<usize>; 2],
    preferred_by_one: ResourceSet,
}

impl<'a> AwContext<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        let all = inst.all();
        AwContext {
            inst,
            orders: [
                RatioOrder::new(inst, all, Agent::One).order,
                RatioOrder::new(inst, all, Agent::Two).order,
            ],
            preferred_by_one: phase_one(inst, all).0,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    /// Global transfer order away from `advantaged`.
    pub fn order(&self, advantaged: Agent) -> &[usize] {
        &self.orders[slot(advantaged).0]
    }

    /// Split-free Phase 1 and Phase 2 on `R \ s0`.
    pub fn subplan(&self, s0: ResourceSet) -> (ResourceSet, ResourceSet, HaltReason) {
        let inst = self.inst;
        let rest = inst.all().difference(s0);
        let mut s1 = self.preferred_by_one.intersection(rest);
        let mut s2 = rest.difference(s1);
        let revenue = inst.price(s0);
        let mut w = [inst.utility(Agent::One, s1), inst.utility(Agent::Two, s2)];

        if w[0] == w[1] {
            return (s1, s2, HaltReason::Equality);
        }
        if w[0].abs_diff(w[1]) <= revenue {
            return (s1, s2, HaltReason::RevenueGuard);
        }
        let a = if w[0] > w[1] { Agent::One } else { Agent::Two };
        let (ia, ib) = slot(a);
        let held = if a == Agent::One { s1 } else { s2 };
        for &r in self.order(a).iter().filter(|&&r| held.contains(r)) {
            let res = inst.resource(r);
            let (wa, wb) = (w[ia] - res.utility(a), w[ib] + res.utility(a.other()));
            if wa < wb {
                return (s1, s2, HaltReason::SplitGuard);
            }
            move_resource(&mut s1, &mut s2, r, a);
            (w[ia], w[ib]) = (wa, wb);
            if wa == wb {
                return (s1, s2, HaltReason::Equality);
            }
            if wa - wb <= revenue {
                return (s1, s2, HaltReason::RevenueGuard);
            }
        }
        // Giving away everything leaves the advantaged agent at 0, which is
        // only reachable without a sign flip when both sides are 0.
        (s1, s2, HaltReason::Equality)
    }

    pub fn derived_plan(&self, s0: ResourceSet) -> Plan {
        let (s1, s2, _) = self.subplan(s0);
        Plan::derived(self.inst, s0, s1, s2).expect("sub-plan partitions the resources")
    }
}

/// Split-free AW on `R \ s0`; returns the bundles and the halting reason.
pub fn aw_subplan(s0: ResourceSet, inst: &Instance) -> (ResourceSet, ResourceSet, HaltReason) {
    AwContext::new(inst).subplan(s0)
}

/// The AW-derived plan `⟨s0, g1, g2⟩` with the derived revenue share.
pub fn aw_derived_plan(s0: ResourceSet, inst: &Instance) -> Plan {
    AwContext::new(inst).derived_plan(s0)
}
