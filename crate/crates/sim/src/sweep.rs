//! The budget sweep: one agent pair per matrix, six cost/price modes, every
//! budget of the grid, both agent orderings and the forced variants.

use std::cmp::Ordering;
use std::fmt;

use dsirs::fptas::{fptas_sweep, FptasOptions, GuessMode, Orientation};
use dsirs::rational::ratio;
use dsirs::{welfare, Budget, Instance, Plan, ResourceSet, Rho};
use num_rational::BigRational;

use crate::build::{build_dsirs_instance, sample_pair, ModePair};
use crate::matrix::UtilityMatrix;
use crate::SimError;

/// Budgets swept unless configured otherwise.
pub const DEFAULT_BUDGETS: [u64; 8] = [0, 1, 2, 4, 8, 16, 32, 64];
/// A resource is heavily dominated when one agent values it at least this
/// many times the other.
pub const DEFAULT_DOMINANCE: u64 = 10;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub budgets: Vec<u64>,
    pub modes: Vec<ModePair>,
    pub epsilon: BigRational,
    pub seed: u64,
    pub dominance: u64,
    pub guess_mode: GuessMode,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            budgets: DEFAULT_BUDGETS.to_vec(),
            modes: ModePair::ALL.to_vec(),
            epsilon: ratio(1, 10),
            seed: DEFAULT_SEED,
            dominance: DEFAULT_DOMINANCE,
            guess_mode: GuessMode::PerScale,
        }
    }
}

/// How the instance was modified before solving.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Forcing {
    None,
    /// Dominated resources may not be sold.
    Allocation,
    /// Dominated resources are sold up front.
    Sale,
}

/// The solve that produced a record: a forcing, under the sampled agent
/// order or with the two agents interchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variant {
    pub forcing: Forcing,
    pub swapped: bool,
}

impl Variant {
    pub fn label(self) -> &'static str {
        match (self.forcing, self.swapped) {
            (Forcing::None, false) => "order-12",
            (Forcing::None, true) => "order-21",
            (Forcing::Allocation, false) => "forced-allocation-12",
            (Forcing::Allocation, true) => "forced-allocation-21",
            (Forcing::Sale, false) => "forced-sale-12",
            (Forcing::Sale, true) => "forced-sale-21",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Exact metrics of the retained plan, in the sampled agent order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metrics {
    pub rho: BigRational,
    pub d: BigRational,
    pub plan: Plan,
    pub variant: Variant,
}

impl Metrics {
    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.plan.s0.len(), self.plan.s1.len(), self.plan.s2.len())
    }

    fn better_than(&self, other: &Metrics) -> bool {
        (&self.rho, &self.d).cmp(&(&other.rho, &other.d)) == Ordering::Less
    }
}

/// Outcome for one (instance, mode, budget); `metrics` is `None` when no
/// variant found a plan giving both agents positive welfare.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRecord {
    pub instance_id: String,
    pub mode: ModePair,
    pub budget: u64,
    pub metrics: Option<Metrics>,
}

impl SweepRecord {
    pub fn feasible(&self) -> bool {
        self.metrics.is_some()
    }
}

/// Runs the sweep over `matrices` in order; matrix `k` uses agent pair
/// `sample_pair(seed, k)`.
pub fn run_sweep(matrices: &[UtilityMatrix], config: &SweepConfig) -> Result<Vec<SweepRecord>, SimError> {
    let mut out = Vec::new();
    for (k, m) in matrices.iter().enumerate() {
        out.extend(run_instance(m, k as u64, config)?);
    }
    Ok(out)
}

/// Records of one matrix, mode by mode and budget by budget.
pub fn run_instance(matrix: &UtilityMatrix, index: u64, config: &SweepConfig) -> Result<Vec<SweepRecord>, SimError> {
    let pair = sample_pair(config.seed, index, matrix.agents());
    let mut out = Vec::new();
    for &mode in &config.modes {
        let top = config.budgets.iter().copied().max().unwrap_or(0);
        let inst = build_dsirs_instance(matrix, pair, mode, Budget::Finite(top))?.instance;
        let best = solve_budgets(&inst, &config.budgets, config)?;
        out.extend(config.budgets.iter().zip(best).map(|(&budget, metrics)| SweepRecord {
            instance_id: matrix.id.clone(),
            mode,
            budget,
            metrics,
        }));
    }
    Ok(out)
}

/// Resources one agent values at least `factor` times the other.
pub fn dominated_resources(inst: &Instance, factor: u64) -> ResourceSet {
    (0..inst.len())
        .filter(|&i| {
            let r = inst.resource(i);
            let (hi, lo) = (r.u1.max(r.u2), r.u1.min(r.u2));
            hi > 0 && hi as u128 >= factor as u128 * lo as u128
        })
        .collect()
}

/// Best metrics per budget over every variant, carried forward so that a
/// larger budget never reports a worse plan than a smaller one.
fn solve_budgets(inst: &Instance, budgets: &[u64], config: &SweepConfig) -> Result<Vec<Option<Metrics>>, SimError> {
    let dominated = dominated_resources(inst, config.dominance);
    let mut forcings = vec![Forcing::None];
    if !dominated.is_empty() {
        forcings.extend([Forcing::Allocation, Forcing::Sale]);
    }
    let mut best: Vec<Option<Metrics>> = vec![None; budgets.len()];
    for forcing in forcings {
        for swapped in [false, true] {
            let variant = Variant { forcing, swapped };
            for (k, m) in solve_variant(inst, budgets, variant, dominated, config)?
                .into_iter()
                .enumerate()
            {
                if let Some(m) = m {
                    if best[k].as_ref().is_none_or(|b| m.better_than(b)) {
                        best[k] = Some(m);
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..budgets.len()).collect();
    order.sort_by_key(|&k| budgets[k]);
    let mut carried: Option<Metrics> = None;
    for k in order {
        match (&best[k], &carried) {
            (Some(m), Some(c)) if !m.better_than(c) => best[k] = Some(c.clone()),
            (None, Some(c)) => best[k] = Some(c.clone()),
            _ => {}
        }
        carried = best[k].clone();
    }
    Ok(best)
}

/// One variant's best plan per budget, in the original agent order.
fn solve_variant(
    inst: &Instance,
    budgets: &[u64],
    variant: Variant,
    dominated: ResourceSet,
    config: &SweepConfig,
) -> Result<Vec<Option<Metrics>>, SimError> {
    let opts = FptasOptions {
        guess_mode: config.guess_mode,
        orientation: Orientation::AsGiven,
        ..FptasOptions::default()
    };
    // instance to solve, pre-sold resources, and the budget left per grid budget
    let (base, sold, left): (Instance, ResourceSet, Vec<Option<Budget>>) = match variant.forcing {
        Forcing::None => (
            inst.clone(),
            ResourceSet::EMPTY,
            budgets.iter().map(|&b| Some(Budget::Finite(b))).collect(),
        ),
        Forcing::Allocation => (
            inst.with_unsellable(dominated),
            ResourceSet::EMPTY,
            budgets.iter().map(|&b| Some(Budget::Finite(b))).collect(),
        ),
        Forcing::Sale => {
            let cost = inst.cost(dominated).expect("simulated costs are finite");
            let left = budgets
                .iter()
                .map(|&b| b.checked_sub(cost).map(Budget::Finite))
                .collect();
            match inst.with_budget(Budget::Unlimited).presell(dominated) {
                Some(presold) => (presold, dominated, left),
                None => return Ok(vec![None; budgets.len()]),
            }
        }
    };
    let oriented = if variant.swapped { base.swapped() } else { base };
    let runnable: Vec<usize> = (0..budgets.len()).filter(|&k| left[k].is_some()).collect();
    let run_budgets: Vec<Budget> = runnable.iter().map(|&k| left[k].expect("filtered")).collect();
    let solved =
        fptas_sweep(&oriented, &run_budgets, &config.epsilon, &opts).map_err(|e| SimError::Solver(e.to_string()))?;

    let mut out: Vec<Option<Metrics>> = vec![None; budgets.len()];
    for (&k, res) in runnable.iter().zip(solved) {
        let Ok(outcome) = res else { continue };
        let original = inst.with_budget(Budget::Finite(budgets[k]));
        for p in &outcome.result.plans {
            let (s1, s2) = if variant.swapped { (p.s2, p.s1) } else { (p.s1, p.s2) };
            let plan = Plan::derived(&original, p.s0.union(sold), s1.difference(sold), s2.difference(sold))
                .expect("mapped plan partitions the instance");
            let Some(m) = metrics(&original, plan, variant) else {
                continue;
            };
            if out[k].as_ref().is_none_or(|b| m.better_than(b)) {
                out[k] = Some(m);
            }
        }
    }
    Ok(out)
}

fn metrics(inst: &Instance, plan: Plan, variant: Variant) -> Option<Metrics> {
    let r = welfare(&plan, inst).expect("plan partitions the instance");
    if !r.feasible {
        return None;
    }
    match r.rho {
        Rho::Finite(rho) => Some(Metrics {
            rho,
            d: r.d,
            plan,
            variant,
        }),
        Rho::Infinite => None,
    }
}
