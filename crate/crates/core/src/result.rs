//! Solver output shared by the exact solvers and the approximation scheme.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::instance::Instance;
use crate::plan::{non_dominated, welfare, Plan, PlanJson};
use crate::rational::to_fraction_string;

/// Which algorithm produced a result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solver {
    /// Enumeration of all sale sets with their AW-derived plans.
    ExactAwns,
    /// Enumeration of every tripartition.
    Oracle,
    /// The approximation scheme with its accuracy parameter.
    Fptas { epsilon: BigRational },
}

impl Solver {
    pub fn tag(&self) -> &'static str {
        match self {
            Solver::ExactAwns => "exact-awns",
            Solver::Oracle => "oracle",
            Solver::Fptas { .. } => "fptas",
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Solver::Fptas { epsilon } => write!(f, "fptas({})", to_fraction_string(epsilon)),
            other => f.write_str(other.tag()),
        }
    }
}

/// Optimal plans of one solve: all attain `objective`, none Pareto dominates
/// another, and they are sorted by their serialized form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub plans: Vec<Plan>,
    pub objective: BigRational,
    /// Smallest `c(S0)` among the reported plans.
    pub cost: u64,
    pub solver: Solver,
}

impl SolveResult {
    /// Deduplicates, Pareto-filters and canonically sorts `plans`, all of
    /// which must be feasible in `inst`.
    pub fn new(inst: &Instance, plans: Vec<Plan>, objective: BigRational, solver: Solver) -> Self {
        let plans = canonical_front(inst, plans);
        let cost = plans
            .iter()
            .map(|p| p.cost(inst).expect("reported plans are affordable"))
            .min()
            .expect("at least one plan");
        SolveResult {
            plans,
            objective,
            cost,
            solver,
        }
    }

    /// The first plan in canonical order.
    pub fn best(&self) -> &Plan {
        &self.plans[0]
    }

    pub fn to_json(&self, inst: &Instance) -> SolveResultJson {
        SolveResultJson {
            plans: self.plans.iter().map(|p| p.to_json(inst)).collect(),
            objective: to_fraction_string(&self.objective),
            cost: self.cost,
            solver: self.solver.tag().to_string(),
            epsilon: match &self.solver {
                Solver::Fptas { epsilon } => Some(to_fraction_string(epsilon)),
                _ => None,
            },
        }
    }
}

/// Wire form of a [`SolveResult`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResultJson {
    pub plans: Vec<PlanJson>,
    pub objective: String,
    pub cost: u64,
    pub solver: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
}

/// Removes duplicates and dominated plans, then sorts by serialized form.
pub(crate) fn canonical_front(inst: &Instance, plans: Vec<Plan>) -> Vec<Plan> {
    assert!(!plans.is_empty(), "no plans to report");
    let mut keyed: Vec<(String, Plan)> = plans.into_iter().map(|p| (p.canonical_key(inst), p)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    let points: Vec<_> = keyed
        .iter()
        .map(|(_, p)| {
            let r = welfare(p, inst).expect("plans partition the instance");
            (r.w1, r.w2)
        })
        .collect();
    non_dominated(&points).into_iter().map(|i| keyed[i].1.clone()).collect()
}
