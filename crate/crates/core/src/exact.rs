//! Brute-force solvers: the AWNS problems over every affordable sale set, and
//! an oracle over every tripartition.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::aw::AwContext;
use crate::instance::{Agent, Instance};
use crate::plan::{welfare, Plan};
use crate::rational::{int, to_fraction_string};
use crate::result::{canonical_front, SolveResult, Solver};
use crate::score::{Doubled, Tally};
use crate::set::ResourceSet;

/// Default resource cap of [`solve_awns_exact`].
pub const EXACT_MAX_RESOURCES: usize = 20;
/// Default resource cap of [`oracle_best_plan`].
pub const ORACLE_MAX_RESOURCES: usize = 15;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("Infeasible: no feasible plan satisfies the objective")]
    Infeasible,
    #[error("InstanceTooLarge: {n} resources exceed the cap of {cap}")]
    InstanceTooLarge { n: usize, cap: usize },
    #[error("InvalidThreshold: {0}")]
    InvalidThreshold(String),
}

/// The AWNS problem to solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Minimize `d = |W1 - W2|`.
    MinD,
    /// Minimize `ρ = max(W1/W2, W2/W1)`.
    MinRho,
    /// Minimize `c(S0)` subject to `d ≤ threshold`.
    MinCostGivenD(BigRational),
    /// Minimize `c(S0)` subject to `ρ ≤ threshold`.
    MinCostGivenRho(BigRational),
    /// Maximize the Nash product `W1·W2`.
    MaxNash,
}

impl Objective {
    pub fn validate(&self) -> Result<(), ExactError> {
        match self {
            Objective::MinCostGivenD(t) if t.is_negative() => Err(ExactError::InvalidThreshold(format!(
                "d threshold {} is negative",
                to_fraction_string(t)
            ))),
            Objective::MinCostGivenRho(t) if *t < BigRational::one() => Err(ExactError::InvalidThreshold(format!(
                "rho threshold {} is below 1",
                to_fraction_string(t)
            ))),
            _ => Ok(()),
        }
    }
}

/// Threshold `a/b` tested against scaled welfares without rationals.
struct Threshold {
    num: BigInt,
    den: BigInt,
}

impl Threshold {
    fn new(t: &BigRational) -> Self {
        Threshold {
            num: t.numer().clone(),
            den: t.denom().clone(),
        }
    }

    /// `gap/scale ≤ a/b`.
    fn admits_d(&self, w: Doubled, scale: u128) -> bool {
        BigInt::from(w.gap()) * &self.den <= &self.num * BigInt::from(scale)
    }

    /// `hi/lo ≤ a/b`.
    fn admits_rho(&self, w: Doubled) -> bool {
        let (hi, lo) = (w.w1.max(w.w2), w.w1.min(w.w2));
        BigInt::from(hi) * &self.den <= &self.num * BigInt::from(lo)
    }
}

/// Incumbent set of plans that tie under an objective key.
struct Best<K> {
    key: Option<K>,
    plans: Vec<Plan>,
}

impl<K> Best<K> {
    fn new() -> Self {
        Best {
            key: None,
            plans: Vec::new(),
        }
    }

    /// `better(a, b)` orders keys so that `Less` means `a` is preferred.
    fn offer(&mut self, key: K, cmp: impl Fn(&K, &K) -> Ordering, plan: impl FnOnce() -> Plan) {
        let ord = match &self.key {
            None => Ordering::Less,
            Some(k) => cmp(&key, k),
        };
        match ord {
            Ordering::Less => {
                self.key = Some(key);
                self.plans.clear();
                self.plans.push(plan());
            }
            Ordering::Equal => self.plans.push(plan()),
            Ordering::Greater => {}
        }
    }
}

/// All subsets of `pool` whose cost fits the budget, by increasing
/// cardinality and then lexicographically by index.
pub fn affordable_sale_sets(inst: &Instance, pool: ResourceSet) -> Vec<ResourceSet> {
    let items: Vec<usize> = pool.iter().collect();
    let mut out = Vec::new();
    let mut level = vec![(ResourceSet::EMPTY, 0usize, 0u64)];
    while !level.is_empty() {
        let mut next = Vec::new();
        for &(set, from, cost) in &level {
            out.push(set);
            for (k, &i) in items.iter().enumerate().skip(from) {
                let Some(c) = inst.resource(i).cost.finite() else {
                    continue;
                };
                let total = cost + c;
                if inst.budget().admits(total) {
                    next.push((set.with(i), k + 1, total));
                }
            }
        }
        level = next;
    }
    out
}

fn check_size(inst: &Instance, cap: usize) -> Result<(), ExactError> {
    if inst.len() > cap {
        Err(ExactError::InstanceTooLarge { n: inst.len(), cap })
    } else {
        Ok(())
    }
}

/// Solves an AWNS problem by evaluating the AW-derived plan of every
/// affordable sale set (at most 20 resources).
pub fn solve_awns_exact(inst: &Instance, objective: &Objective) -> Result<SolveResult, ExactError> {
    solve_awns_exact_capped(inst, objective, EXACT_MAX_RESOURCES)
}

pub fn solve_awns_exact_capped(inst: &Instance, objective: &Objective, cap: usize) -> Result<SolveResult, ExactError> {
    objective.validate()?;
    check_size(inst, cap)?;
    let ctx = AwContext::new(inst);
    let candidates = affordable_sale_sets(inst, inst.sellable()).into_iter().map(|s0| {
        let (s1, s2, _) = ctx.subplan(s0);
        (s0, s1, s2)
    });
    let plans = optimize(inst, objective, candidates, QMode::Derived)?;
    finish(inst, objective, plans, Solver::ExactAwns)
}

/// How the oracle assigns the revenue share of each tripartition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QMode {
    /// The balancing share of the plan itself.
    Derived,
    /// One fixed share for every plan.
    Pinned(BigRational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleCriterion {
    MinD,
    MinRho,
    ExistsEnvyFree,
    MaxNash,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    Optimum(SolveResult),
    /// Whether a feasible envy-free plan exists, with the Pareto-optimal
    /// envy-free plans as witnesses.
    EnvyFree {
        exists: bool,
        witnesses: Vec<Plan>,
    },
}

/// Enumerates every tripartition with an affordable sale set (at most 15
/// resources) and returns the feasible optimum for `criterion`.
pub fn oracle_best_plan(inst: &Instance, criterion: &OracleCriterion, q: &QMode) -> Result<OracleOutcome, ExactError> {
    oracle_best_plan_capped(inst, criterion, q, ORACLE_MAX_RESOURCES)
}

pub fn oracle_best_plan_capped(
    inst: &Instance,
    criterion: &OracleCriterion,
    q: &QMode,
    cap: usize,
) -> Result<OracleOutcome, ExactError> {
    check_size(inst, cap)?;
    if let QMode::Pinned(v) = q {
        if v.is_negative() || *v > BigRational::one() {
            return Err(ExactError::InvalidThreshold(format!(
                "revenue share {} lies outside [0, 1]",
                to_fraction_string(v)
            )));
        }
    }
    let all = inst.all();
    let tripartitions = affordable_sale_sets(inst, inst.sellable())
        .into_iter()
        .flat_map(move |s0| {
            let rest = all.difference(s0);
            submasks(rest).map(move |s1| (s0, s1, rest.difference(s1)))
        });
    let objective = match criterion {
        OracleCriterion::MinD => Objective::MinD,
        OracleCriterion::MinRho => Objective::MinRho,
        OracleCriterion::MaxNash => Objective::MaxNash,
        OracleCriterion::ExistsEnvyFree => {
            let mut witnesses = Vec::new();
            for (s0, s1, s2) in tripartitions {
                let e = evaluate(inst, s0, s1, s2, q);
                if e.w.positive() && e.envy_free() {
                    witnesses.push(e.plan(inst, s0, s1, s2, q));
                }
            }
            let exists = !witnesses.is_empty();
            let witnesses = if exists {
                canonical_front(inst, witnesses)
            } else {
                witnesses
            };
            return Ok(OracleOutcome::EnvyFree { exists, witnesses });
        }
    };
    let plans = optimize(inst, &objective, tripartitions, q.clone())?;
    finish(inst, &objective, plans, Solver::Oracle).map(OracleOutcome::Optimum)
}

/// All subsets of `set`, starting from the empty set.
fn submasks(set: ResourceSet) -> impl Iterator<Item = ResourceSet> {
    let full = set.bits();
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == full {
            None
        } else {
            Some((cur.wrapping_sub(full)) & full)
        };
        Some(ResourceSet::from_bits(cur))
    })
}

/// Scaled welfares of a plan and of its mirror; the scale is 2 for derived
/// shares and the share's denominator for pinned ones.
struct Evaluation {
    w: Doubled,
    mirror: Doubled,
    scale: u128,
}

impl Evaluation {
    fn envy_free(&self) -> bool {
        self.mirror.w1 <= self.w.w1 && self.mirror.w2 <= self.w.w2
    }

    fn plan(&self, inst: &Instance, s0: ResourceSet, s1: ResourceSet, s2: ResourceSet, q: &QMode) -> Plan {
        match q {
            QMode::Derived => Plan::derived(inst, s0, s1, s2),
            QMode::Pinned(v) => Plan::pinned(inst, s0, s1, s2, v.clone()),
        }
        .expect("enumerated sets partition the resources")
    }
}

fn evaluate(inst: &Instance, s0: ResourceSet, s1: ResourceSet, s2: ResourceSet, q: &QMode) -> Evaluation {
    let p = inst.price(s0) as u128;
    let (u11, u22) = (
        inst.utility(Agent::One, s1) as u128,
        inst.utility(Agent::Two, s2) as u128,
    );
    let (u12, u21) = (
        inst.utility(Agent::One, s2) as u128,
        inst.utility(Agent::Two, s1) as u128,
    );
    let (num, scale) = match q {
        QMode::Derived => {
            let t = Tally::of(inst, s0, s1, s2).share_units() as u128;
            // q = t / (2p): scaled by 2 the shares are t/p · p = t
            return Evaluation {
                w: Doubled {
                    w1: 2 * u11 + t,
                    w2: 2 * u22 + 2 * p - t,
                }
                .audited(),
                mirror: Doubled {
                    w1: 2 * u12 + 2 * p - t,
                    w2: 2 * u21 + t,
                },
                scale: 2,
            };
        }
        QMode::Pinned(v) => (
            u128::try_from(v.numer()).expect("share numerator fits"),
            u128::try_from(v.denom()).expect("share denominator fits"),
        ),
    };
    Evaluation {
        w: Doubled {
            w1: scale * u11 + num * p,
            w2: scale * u22 + (scale - num) * p,
        }
        .audited(),
        mirror: Doubled {
            w1: scale * u12 + (scale - num) * p,
            w2: scale * u21 + num * p,
        },
        scale,
    }
}

/// Optimal plans among the candidate tripartitions, all of which must have
/// an affordable sale set.
fn optimize(
    inst: &Instance,
    objective: &Objective,
    candidates: impl Iterator<Item = (ResourceSet, ResourceSet, ResourceSet)>,
    q: QMode,
) -> Result<Vec<Plan>, ExactError> {
    let make = |s0, s1, s2, e: &Evaluation| e.plan(inst, s0, s1, s2, &q);
    let plans = match objective {
        Objective::MinD => {
            let mut best = Best::new();
            for (s0, s1, s2) in candidates {
                let e = evaluate(inst, s0, s1, s2, &q);
                if e.w.positive() {
                    best.offer(e.w.gap(), |a, b| a.cmp(b), || make(s0, s1, s2, &e));
                }
            }
            best.plans
        }
        Objective::MinRho => {
            let mut best = Best::new();
            for (s0, s1, s2) in candidates {
                let e = evaluate(inst, s0, s1, s2, &q);
                if e.w.positive() {
                    best.offer(e.w, |a, b| a.cmp_rho(*b), || make(s0, s1, s2, &e));
                }
            }
            best.plans
        }
        Objective::MaxNash => {
            let mut best = Best::new();
            for (s0, s1, s2) in candidates {
                let e = evaluate(inst, s0, s1, s2, &q);
                if e.w.positive() {
                    best.offer(e.w.nash(), |a, b| b.cmp(a), || make(s0, s1, s2, &e));
                }
            }
            best.plans
        }
        Objective::MinCostGivenD(t) | Objective::MinCostGivenRho(t) => {
            let limit = Threshold::new(t);
            let by_d = matches!(objective, Objective::MinCostGivenD(_));
            let mut best = Best::new();
            for (s0, s1, s2) in candidates {
                let e = evaluate(inst, s0, s1, s2, &q);
                let ok = e.w.positive()
                    && if by_d {
                        limit.admits_d(e.w, e.scale)
                    } else {
                        limit.admits_rho(e.w)
                    };
                if ok {
                    let cost = inst.cost(s0).expect("affordable sale set");
                    best.offer(cost, |a, b| a.cmp(b), || make(s0, s1, s2, &e));
                }
            }
            best.plans
        }
    };
    if plans.is_empty() {
        Err(ExactError::Infeasible)
    } else {
        Ok(plans)
    }
}

/// Exact objective value of an optimal plan.
pub fn objective_value(inst: &Instance, objective: &Objective, plan: &Plan) -> BigRational {
    let r = welfare(plan, inst).expect("plan partitions the instance");
    match objective {
        Objective::MinD => r.d,
        Objective::MinRho => r.rho.finite().expect("feasible plan").clone(),
        Objective::MaxNash => r.w1 * r.w2,
        Objective::MinCostGivenD(_) | Objective::MinCostGivenRho(_) => int(plan.cost(inst).expect("affordable plan")),
    }
}

fn finish(inst: &Instance, objective: &Objective, plans: Vec<Plan>, solver: Solver) -> Result<SolveResult, ExactError> {
    let value = objective_value(inst, objective, &plans[0]);
    Ok(SolveResult::new(inst, plans, value, solver))
}
