//! Fully polynomial approximation scheme for the minimum welfare ratio over
//! split-free Adjusted Winner plans.
//!
//! For every role variant, guess of per-set maxima and transfer window, the
//! instance is scaled and a dynamic program enumerates cheapest partial
//! plans per scaled key. Every resulting plan, together with the
//! Adjusted-Winner-derived plan of its sale set, is re-scored exactly on the
//! original instance. A resource agent 1 values above twice agent 2's best
//! achievable welfare on the rest is handled separately: it is either given
//! to agent 1 while agent 2 takes or sells the rest, or sold outright.

pub mod dp;
pub mod heavy;
pub mod knapsack;
pub mod roles;
pub mod scaling;

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::{FxHashMap, FxHashSet};
use thiserror::Error;

use crate::aw::AwContext;
use crate::instance::{Budget, Instance};
use crate::plan::{welfare, Plan};
use crate::result::{SolveResult, Solver};
use crate::score::{Doubled, Tally};
use crate::set::ResourceSet;

pub use dp::{dp_solve, windows_for, Direction, DpEntry, DpKey, TransferWindow};
pub use heavy::{detect_heavy_resource, heavy_resources, o2_value, O2Mode, O2};
pub use knapsack::knapsack_fptas;
pub use roles::{partition_roles, Preference, RoleVariant, ScanOrder};
pub use scaling::{enumerate_guesses, eps_prime, scale_instance, Guess, GuessMode, ScaleError, ScaledInstance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FptasError {
    #[error("Infeasible: no affordable plan gives both agents positive welfare")]
    Infeasible,
    #[error("InvalidEpsilon: epsilon must be positive, with ε/(ε+2) fitting 64-bit numerator and denominator")]
    InvalidEpsilon,
}

/// Agent namings to search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// The instance as given and with agent names interchanged.
    #[default]
    Both,
    /// Only the instance as given; callers cover the other naming themselves.
    AsGiven,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct FptasOptions {
    pub guess_mode: GuessMode,
    pub orientation: Orientation,
    pub o2_mode: O2Mode,
}

/// Counters describing one solve.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FptasDiagnostics {
    pub dp_passes: u64,
    /// Final-layer entries over all passes, before deduplication.
    pub frontier_entries: u64,
    /// Distinct tripartitions offered for exact scoring.
    pub candidates: u64,
    /// Sale sets whose Adjusted-Winner-derived plan was not itself produced
    /// by the dynamic program.
    pub aw_not_in_frontier: u64,
    /// Whether the reported optimum is attained by a dynamic program plan,
    /// by an Adjusted-Winner-derived plan, or by a heavy-resource plan.
    pub best_from_frontier: bool,
    pub best_from_aw: bool,
    pub best_from_heavy: bool,
    /// Heavy resources handled, including those of pre-sold instances.
    pub heavy_resources: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FptasOutcome {
    pub result: SolveResult,
    pub diagnostics: FptasDiagnostics,
}

/// Approximately minimizes ρ: the returned plans have ρ at most `(1 + ε)`
/// times the best split-free Adjusted Winner plan.
pub fn fptas_awns_rho(inst: &Instance, eps: &BigRational) -> Result<SolveResult, FptasError> {
    fptas_awns_rho_with(inst, eps, &FptasOptions::default()).map(|o| o.result)
}

pub fn fptas_awns_rho_with(
    inst: &Instance,
    eps: &BigRational,
    opts: &FptasOptions,
) -> Result<FptasOutcome, FptasError> {
    fptas_sweep(inst, &[inst.budget()], eps, opts)?
        .pop()
        .expect("one budget in, one result out")
}

/// Solves `inst` under each budget of `budgets` (the instance's own budget
/// is ignored). The dynamic program runs once under the largest budget and
/// its cheapest plans are filtered per budget. Every plan found for a budget
/// is also offered to all larger budgets, so the reported ρ never increases
/// with the budget. Fails as a whole only for an invalid `eps`.
pub fn fptas_sweep(
    inst: &Instance,
    budgets: &[Budget],
    eps: &BigRational,
    opts: &FptasOptions,
) -> Result<Vec<Result<FptasOutcome, FptasError>>, FptasError> {
    check_epsilon(eps)?;
    let mut diag = FptasDiagnostics::default();
    let pools = cumulative(budgets, candidate_pools(inst, budgets, eps, opts, &mut diag));
    let aw = AwContext::new(inst);
    let mut aw_memo: FxHashMap<ResourceSet, (ResourceSet, ResourceSet)> = FxHashMap::default();
    let mut seen_s0: FxHashSet<ResourceSet> = FxHashSet::default();

    let mut out = Vec::with_capacity(budgets.len());
    for (&budget, pool) in budgets.iter().zip(pools) {
        let mut d = diag.clone();
        d.candidates = pool.len() as u64;
        let in_budget = inst.with_budget(budget);

        let mut best = Incumbent::default();
        let frontier: FxHashSet<(ResourceSet, ResourceSet, ResourceSet)> = pool
            .iter()
            .filter(|c| c.source == Source::Frontier)
            .map(|c| c.sets())
            .collect();
        let mut sale_sets: Vec<ResourceSet> = pool.iter().map(|c| c.s0).collect();
        sale_sets.sort_unstable_by_key(|s| s.bits());
        sale_sets.dedup();
        for c in &pool {
            best.offer(inst, c);
        }
        for s0 in sale_sets {
            let (s1, s2) = *aw_memo.entry(s0).or_insert_with(|| {
                let (s1, s2, _) = aw.subplan(s0);
                (s1, s2)
            });
            if seen_s0.insert(s0) && !frontier.contains(&(s0, s1, s2)) {
                d.aw_not_in_frontier += 1;
            }
            best.offer(
                inst,
                &Candidate {
                    s0,
                    s1,
                    s2,
                    q: None,
                    source: Source::Aw,
                },
            );
        }

        let Some(rho) = best.rho.and_then(|w| w.rho().finite().cloned()) else {
            out.push(Err(FptasError::Infeasible));
            continue;
        };
        d.best_from_frontier = best.sources.contains(&Source::Frontier);
        d.best_from_aw = best.sources.contains(&Source::Aw);
        d.best_from_heavy = best.sources.contains(&Source::Heavy);
        let result = SolveResult::new(&in_budget, best.plans, rho, Solver::Fptas { epsilon: eps.clone() });
        out.push(Ok(FptasOutcome { result, diagnostics: d }));
    }
    Ok(out)
}

/// Adds to each pool the candidates of every pool with a smaller or equal
/// budget.
fn cumulative(budgets: &[Budget], mut pools: Vec<Vec<Candidate>>) -> Vec<Vec<Candidate>> {
    let mut order: Vec<usize> = (0..budgets.len()).collect();
    order.sort_by(|&a, &b| budget_cmp(budgets[a], budgets[b]));
    let mut carried: Vec<Candidate> = Vec::new();
    let mut seen: FxHashSet<(ResourceSet, ResourceSet, ResourceSet, Option<BigRational>)> = FxHashSet::default();
    for k in order {
        for c in pools[k].drain(..) {
            if seen.insert((c.s0, c.s1, c.s2, c.q.clone())) {
                carried.push(c);
            }
        }
        pools[k] = carried.clone();
    }
    pools
}

fn check_epsilon(eps: &BigRational) -> Result<(), FptasError> {
    if !eps.is_positive() {
        return Err(FptasError::InvalidEpsilon);
    }
    let ep = eps_prime(eps);
    if ep.numer().to_u64().is_none() || ep.denom().to_u64().is_none() {
        return Err(FptasError::InvalidEpsilon);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Source {
    Frontier,
    Aw,
    Heavy,
}

/// A tripartition of the original instance; `q` is `None` for the derived
/// share.
#[derive(Clone, Debug)]
struct Candidate {
    s0: ResourceSet,
    s1: ResourceSet,
    s2: ResourceSet,
    q: Option<BigRational>,
    source: Source,
}

impl Candidate {
    fn sets(&self) -> (ResourceSet, ResourceSet, ResourceSet) {
        (self.s0, self.s1, self.s2)
    }
}

/// Plans with the smallest ρ seen so far. Welfares are compared as doubled
/// integers for derived shares; pinned shares are compared after scaling to
/// the same form.
#[derive(Default)]
struct Incumbent {
    rho: Option<Doubled>,
    plans: Vec<Plan>,
    sources: FxHashSet<Source>,
}

impl Incumbent {
    fn offer(&mut self, inst: &Instance, c: &Candidate) {
        let (w, plan) = match &c.q {
            None => {
                let w = Tally::of(inst, c.s0, c.s1, c.s2).doubled();
                (w, None)
            }
            Some(q) => {
                let plan = Plan::pinned(inst, c.s0, c.s1, c.s2, q.clone()).expect("candidate is a partition");
                let r = welfare(&plan, inst).expect("candidate is a partition");
                // both welfares over a common denominator keep their ratio
                let w1 = (r.w1.numer() * r.w2.denom()).to_u128();
                let w2 = (r.w2.numer() * r.w1.denom()).to_u128();
                match (w1, w2) {
                    (Some(w1), Some(w2)) => (Doubled { w1, w2 }, Some(plan)),
                    _ => return,
                }
            }
        };
        if !w.positive() {
            return;
        }
        let ord = match self.rho {
            None => Ordering::Less,
            Some(cur) => w.cmp_rho(cur),
        };
        if ord == Ordering::Greater {
            return;
        }
        if ord == Ordering::Less {
            self.rho = Some(w);
            self.plans.clear();
            self.sources.clear();
        }
        let plan = plan.unwrap_or_else(|| Plan::derived(inst, c.s0, c.s1, c.s2).expect("candidate is a partition"));
        self.plans.push(plan);
        self.sources.insert(c.source);
    }
}

/// Candidate tripartitions of `inst` for each budget, in the original agent
/// naming, every one affordable under its budget.
fn candidate_pools(
    inst: &Instance,
    budgets: &[Budget],
    eps: &BigRational,
    opts: &FptasOptions,
    diag: &mut FptasDiagnostics,
) -> Vec<Vec<Candidate>> {
    let Some(&top) = budgets.iter().max_by(|a, b| budget_cmp(**a, **b)) else {
        return Vec::new();
    };
    let frontier = frontier_plans(inst, top, eps, opts, diag);
    let mut pools: Vec<Vec<Candidate>> = budgets
        .iter()
        .map(|&b| {
            frontier
                .iter()
                .filter(|(_, cost)| b.admits(*cost))
                .map(|&((s0, s1, s2), _)| Candidate {
                    s0,
                    s1,
                    s2,
                    q: None,
                    source: Source::Frontier,
                })
                .collect()
        })
        .collect();

    // heavy resources, per budget, in every searched naming
    let mut presales: FxHashMap<usize, Vec<(usize, Budget)>> = FxHashMap::default();
    for (k, &b) in budgets.iter().enumerate() {
        let in_budget = inst.with_budget(b);
        for &swapped in namings(opts) {
            let oriented = if swapped {
                in_budget.swapped()
            } else {
                in_budget.clone()
            };
            for r in heavy_resources(&oriented, eps, opts.o2_mode) {
                diag.heavy_resources += 1;
                let rest = oriented.all().without(r);
                let o2 = o2_value(&oriented, rest, b, eps, opts.o2_mode);
                let (s1, s2) = (ResourceSet::singleton(r), rest.difference(o2.sold));
                let (s1, s2) = if swapped { (s2, s1) } else { (s1, s2) };
                // all revenue to agent 2 in the oriented naming
                let q_one = if swapped {
                    BigRational::zero()
                } else {
                    BigRational::one()
                };
                for q in [None, Some(q_one)] {
                    pools[k].push(Candidate {
                        s0: o2.sold,
                        s1,
                        s2,
                        q,
                        source: Source::Heavy,
                    });
                }
                if b.is_positive() && in_budget.presell(ResourceSet::singleton(r)).is_some() {
                    presales.entry(r).or_default().push((k, b));
                }
            }
        }
    }

    let mut resources: Vec<usize> = presales.keys().copied().collect();
    resources.sort_unstable();
    for r in resources {
        let jobs = &presales[&r];
        let sold = ResourceSet::singleton(r);
        let base = inst.presell(sold).expect("affordable under some budget");
        let cost = inst.cost(sold).expect("sellable");
        let reduced: Vec<Budget> = jobs
            .iter()
            .map(|&(_, b)| {
                b.spend(crate::instance::Cost::Finite(cost))
                    .expect("checked affordable")
            })
            .collect();
        let base = base.with_budget(reduced[0]);
        let sub = candidate_pools(&base, &reduced, eps, opts, diag);
        for (&(k, _), plans) in jobs.iter().zip(sub) {
            for c in plans {
                // the placeholder is sold whatever the sub-plan did with it
                pools[k].push(Candidate {
                    s0: c.s0.with(r),
                    s1: c.s1.without(r),
                    s2: c.s2.without(r),
                    q: c.q,
                    source: Source::Heavy,
                });
            }
        }
    }
    pools
}

fn budget_cmp(a: Budget, b: Budget) -> Ordering {
    match (a, b) {
        (Budget::Unlimited, Budget::Unlimited) => Ordering::Equal,
        (Budget::Unlimited, _) => Ordering::Greater,
        (_, Budget::Unlimited) => Ordering::Less,
        (Budget::Finite(x), Budget::Finite(y)) => x.cmp(&y),
    }
}

fn namings(opts: &FptasOptions) -> &'static [bool] {
    match opts.orientation {
        Orientation::Both => &[false, true],
        Orientation::AsGiven => &[false],
    }
}

/// Distinct tripartitions from every dynamic program pass under `budget`,
/// in the original naming, with their sale cost.
fn frontier_plans(
    inst: &Instance,
    budget: Budget,
    eps: &BigRational,
    opts: &FptasOptions,
    diag: &mut FptasDiagnostics,
) -> Vec<((ResourceSet, ResourceSet, ResourceSet), u64)> {
    let mut found: FxHashMap<(ResourceSet, ResourceSet, ResourceSet), u64> = FxHashMap::default();
    let (_, variants) = partition_roles(inst);
    let swapped_inst = inst.swapped();
    for v in variants.iter().filter(|v| namings(opts).contains(&v.swapped)) {
        let oriented = if v.swapped { &swapped_inst } else { inst };
        let scan = ScanOrder::new(oriented, v.a1, v.a2);
        let windows = windows_for(&scan);
        for guess in enumerate_guesses(oriented, budget, opts.guess_mode) {
            let scaled = scale_instance(oriented, guess, eps).expect("guesses are valid and epsilon checked");
            for &w in &windows {
                diag.dp_passes += 1;
                for (_, e) in dp_solve(oriented, &scaled, &scan, w, budget) {
                    diag.frontier_entries += 1;
                    let sets = if v.swapped {
                        (e.s0, e.s2, e.s1)
                    } else {
                        (e.s0, e.s1, e.s2)
                    };
                    found.insert(sets, e.cost);
                }
            }
        }
    }
    let mut out: Vec<_> = found.into_iter().collect();
    out.sort_unstable_by_key(|&((s0, s1, s2), _)| (s0.bits(), s1.bits(), s2.bits()));
    out
}
