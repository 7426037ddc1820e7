//! Plans (sold / agent 1 / agent 2 tripartitions with a revenue share), their
//! welfare, fairness metrics, envy, and Pareto filtering.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{Agent, Instance};
use crate::rational::{int, parse_rational, to_fraction_string};
use crate::score::{audit, Tally};
use crate::set::ResourceSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("NotAPartition: s0, s1 and s2 must be disjoint and cover all resources")]
    NotAPartition,
    #[error("InvalidShare: revenue share {0} lies outside [0, 1]")]
    InvalidShare(String),
    #[error("UnknownResource: {0:?} is not a resource of the instance")]
    UnknownResource(String),
    #[error("Malformed: {0}")]
    Malformed(String),
    #[error("EmptyInput: no plans to filter")]
    EmptyInput,
}

/// Welfare ratio `max(W1/W2, W2/W1)`; infinite when an agent has no welfare.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rho {
    Finite(BigRational),
    Infinite,
}

impl Rho {
    pub fn is_one(&self) -> bool {
        matches!(self, Rho::Finite(r) if r.is_one())
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Rho::Finite(r) => Some(r),
            Rho::Infinite => None,
        }
    }
}

impl Ord for Rho {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rho::Finite(a), Rho::Finite(b)) => a.cmp(b),
            (Rho::Finite(_), Rho::Infinite) => Ordering::Less,
            (Rho::Infinite, Rho::Finite(_)) => Ordering::Greater,
            (Rho::Infinite, Rho::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Rho {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rho::Finite(r) => f.write_str(&to_fraction_string(r)),
            Rho::Infinite => f.write_str("inf"),
        }
    }
}

/// A tripartition ⟨S0, S1, S2⟩ of the resources plus the fraction q of the
/// sale revenue that goes to agent 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Plan {
    pub s0: ResourceSet,
    pub s1: ResourceSet,
    pub s2: ResourceSet,
    pub q: BigRational,
    /// The share was supplied rather than derived from the sets.
    pub q_pinned: bool,
}

fn check_partition(inst: &Instance, s0: ResourceSet, s1: ResourceSet, s2: ResourceSet) -> Result<(), PlanError> {
    let disjoint = s0.is_disjoint(s1) && s0.is_disjoint(s2) && s1.is_disjoint(s2);
    if disjoint && s0.union(s1).union(s2) == inst.all() {
        Ok(())
    } else {
        Err(PlanError::NotAPartition)
    }
}

/// The share q that balances both welfares as closely as possible:
/// `clamp((p(S0) - u1(S1) + u2(S2)) / (2·p(S0)), 0, 1)`, and 0 when nothing
/// is earned from the sale.
pub fn revenue_share(
    s0: ResourceSet,
    s1: ResourceSet,
    s2: ResourceSet,
    inst: &Instance,
) -> Result<BigRational, PlanError> {
    check_partition(inst, s0, s1, s2)?;
    Ok(Tally::of(inst, s0, s1, s2).share())
}

impl Plan {
    pub fn derived(inst: &Instance, s0: ResourceSet, s1: ResourceSet, s2: ResourceSet) -> Result<Plan, PlanError> {
        let q = revenue_share(s0, s1, s2, inst)?;
        Ok(Plan {
            s0,
            s1,
            s2,
            q,
            q_pinned: false,
        })
    }

    pub fn pinned(
        inst: &Instance,
        s0: ResourceSet,
        s1: ResourceSet,
        s2: ResourceSet,
        q: BigRational,
    ) -> Result<Plan, PlanError> {
        check_partition(inst, s0, s1, s2)?;
        if q.is_negative() || q > BigRational::one() {
            return Err(PlanError::InvalidShare(to_fraction_string(&q)));
        }
        Ok(Plan {
            s0,
            s1,
            s2,
            q,
            q_pinned: true,
        })
    }

    /// Bundles swapped, share `1 - q`, pinned.
    pub fn mirrored(&self) -> Plan {
        Plan {
            s0: self.s0,
            s1: self.s2,
            s2: self.s1,
            q: BigRational::one() - &self.q,
            q_pinned: true,
        }
    }

    /// Organizational cost `c(S0)`; `None` if an unsellable resource is sold.
    pub fn cost(&self, inst: &Instance) -> Option<u64> {
        inst.cost(self.s0)
    }

    pub fn to_json(&self, inst: &Instance) -> PlanJson {
        PlanJson {
            s0: inst.names(self.s0),
            s1: inst.names(self.s1),
            s2: inst.names(self.s2),
            q: to_fraction_string(&self.q),
        }
    }

    /// Reads a plan; it counts as pinned unless `q` equals the derived share.
    pub fn from_json(inst: &Instance, json: &PlanJson) -> Result<Plan, PlanError> {
        let set = |names: &[String]| inst.set_from_names(names).map_err(PlanError::UnknownResource);
        let (s0, s1, s2) = (set(&json.s0)?, set(&json.s1)?, set(&json.s2)?);
        let q = parse_rational(&json.q).map_err(|e| PlanError::Malformed(e.to_string()))?;
        let derived = Plan::derived(inst, s0, s1, s2)?;
        if derived.q == q {
            Ok(derived)
        } else {
            Plan::pinned(inst, s0, s1, s2, q)
        }
    }

    /// Serialized form used for canonical ordering.
    pub fn canonical_key(&self, inst: &Instance) -> String {
        serde_json::to_string(&self.to_json(inst)).expect("plan serializes")
    }
}

/// Wire form of a plan: resource names per set and `q` as `num/den`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanJson {
    pub s0: Vec<String>,
    pub s1: Vec<String>,
    pub s2: Vec<String>,
    pub q: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WelfareReport {
    pub w1: BigRational,
    pub w2: BigRational,
    /// `|W1 - W2|`
    pub d: BigRational,
    pub rho: Rho,
    pub envy1: BigRational,
    pub envy2: BigRational,
    /// Both welfares positive and the sale fits the budget.
    pub feasible: bool,
}

fn welfare_pair(plan: &Plan, inst: &Instance) -> (BigRational, BigRational) {
    let p = int(inst.price(plan.s0));
    let w1 = int(inst.utility(Agent::One, plan.s1)) + &plan.q * &p;
    let w2 = int(inst.utility(Agent::Two, plan.s2)) + (BigRational::one() - &plan.q) * &p;
    (w1, w2)
}

fn ratio_of(w1: &BigRational, w2: &BigRational) -> Rho {
    if w1.is_positive() && w2.is_positive() {
        Rho::Finite(if w1 >= w2 { w1 / w2 } else { w2 / w1 })
    } else {
        Rho::Infinite
    }
}

/// Welfare, equitability metrics, envy and feasibility of `plan`.
pub fn welfare(plan: &Plan, inst: &Instance) -> Result<WelfareReport, PlanError> {
    check_partition(inst, plan.s0, plan.s1, plan.s2)?;
    let (w1, w2) = welfare_pair(plan, inst);
    let d = (&w1 - &w2).abs();
    let rho = ratio_of(&w1, &w2);
    let positive = w1.is_positive() && w2.is_positive();
    audit::observe(d.is_zero(), rho.is_one(), positive);
    let (m1, m2) = welfare_pair(&plan.mirrored(), inst);
    Ok(WelfareReport {
        envy1: m1 - &w1,
        envy2: m2 - &w2,
        feasible: positive && inst.affordable(plan.s0),
        w1,
        w2,
        d,
        rho,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Envy {
    pub envy1: BigRational,
    pub envy2: BigRational,
    pub envy_free: bool,
}

/// Signed envies against the mirrored plan ⟨S0, S2, S1, 1 - q⟩.
pub fn envy(plan: &Plan, inst: &Instance) -> Result<Envy, PlanError> {
    let report = welfare(plan, inst)?;
    let envy_free = !report.envy1.is_positive() && !report.envy2.is_positive();
    Ok(Envy {
        envy1: report.envy1,
        envy2: report.envy2,
        envy_free,
    })
}

/// Keeps the plans not Pareto dominated by another input plan. Plans with
/// identical welfare pairs are all kept.
pub fn pareto_filter(plans: &[Plan], inst: &Instance) -> Result<Vec<Plan>, PlanError> {
    if plans.is_empty() {
        return Err(PlanError::EmptyInput);
    }
    let welfares = plans
        .iter()
        .map(|p| welfare(p, inst).map(|r| (r.w1, r.w2)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(non_dominated(&welfares).into_iter().map(|i| plans[i].clone()).collect())
}

/// Indices of the non-dominated pairs, in input order.
pub(crate) fn non_dominated<T: Ord>(points: &[(T, T)]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            let (a1, a2) = &points[i];
            !points
                .iter()
                .any(|(b1, b2)| b1 >= a1 && b2 >= a2 && (b1 > a1 || b2 > a2))
        })
        .collect()
}
