//! Value scaling for the dynamic program: guesses of the largest value per
//! set, the scale `K = ε'·m_max/n`, and the rounded per-resource values.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::instance::{Budget, Instance};
use crate::rational::ratio;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScaleError {
    #[error("BadGuess: resource index {0} does not exist")]
    BadGuess(usize),
    #[error("ZeroScale: every guessed maximum is 0")]
    ZeroScale,
    #[error("InvalidEpsilon: epsilon must be a positive rational with 64-bit numerator and denominator")]
    InvalidEpsilon,
}

/// Resources whose values bound the sold set (`j0`, by price), agent 1's set
/// (`j1`, by `u1`) and agent 2's set (`j2`, by `u2`). `None` forces that set
/// to be empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Guess {
    pub j0: Option<usize>,
    pub j1: Option<usize>,
    pub j2: Option<usize>,
}

impl Guess {
    /// The bounds `(p(j0), u1(j1), u2(j2))`, `None` for empty markers.
    pub fn thresholds(&self, inst: &Instance) -> (Option<u64>, Option<u64>, Option<u64>) {
        (
            self.j0.map(|j| inst.resource(j).price),
            self.j1.map(|j| inst.resource(j).u1),
            self.j2.map(|j| inst.resource(j).u2),
        )
    }

    /// `⌈max/2⌉` over the guessed bounds.
    pub fn m_max(&self, inst: &Instance) -> u64 {
        let (t0, t1, t2) = self.thresholds(inst);
        let top = [t0, t1, t2].into_iter().flatten().max().unwrap_or(0);
        top.div_ceil(2)
    }
}

/// Which guesses to try.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum GuessMode {
    /// Every combination of `(j0, j1, j2)` with empty markers, deduplicated
    /// by the bounds they imply.
    #[default]
    Exhaustive,
    /// For each attainable `m_max`, only the guess with the loosest bounds at
    /// that scale. Its plans are a superset of every other guess with the
    /// same scale, and there are at most `3n` of them.
    PerScale,
}

/// Guesses for `inst` when sales must fit `budget`; resources that cannot be
/// sold within it are never guessed as `j0`. Guesses whose scale would be 0
/// are skipped: every plan under them leaves both agents without welfare.
pub fn enumerate_guesses(inst: &Instance, budget: Budget, mode: GuessMode) -> Vec<Guess> {
    let sellable: Vec<usize> = (0..inst.len())
        .filter(|&i| inst.resource(i).cost.finite().is_some_and(|c| budget.admits(c)))
        .collect();
    let all: Vec<usize> = (0..inst.len()).collect();
    let price = |i: usize| inst.resource(i).price;
    let u1 = |i: usize| inst.resource(i).u1;
    let u2 = |i: usize| inst.resource(i).u2;

    match mode {
        GuessMode::Exhaustive => {
            // one representative resource per distinct bound value
            let reps = |items: &[usize], value: &dyn Fn(usize) -> u64| {
                let mut seen = FxHashSet::default();
                let mut out = vec![None];
                for &i in items {
                    if seen.insert(value(i)) {
                        out.push(Some(i));
                    }
                }
                out
            };
            let (c0, c1, c2) = (reps(&sellable, &price), reps(&all, &u1), reps(&all, &u2));
            let mut out = Vec::new();
            for &j0 in &c0 {
                for &j1 in &c1 {
                    for &j2 in &c2 {
                        let g = Guess { j0, j1, j2 };
                        if g.m_max(inst) > 0 {
                            out.push(g);
                        }
                    }
                }
            }
            out
        }
        GuessMode::PerScale => {
            let scales: BTreeSet<u64> = sellable
                .iter()
                .map(|&i| price(i))
                .chain(all.iter().map(|&i| u1(i)))
                .chain(all.iter().map(|&i| u2(i)))
                .filter(|&v| v > 0)
                .map(|v| v.div_ceil(2))
                .collect();
            // largest value within 2M, lowest index among equals
            let loosest = |items: &[usize], value: &dyn Fn(usize) -> u64, m: u64| {
                items
                    .iter()
                    .copied()
                    .filter(|&i| value(i) <= 2 * m)
                    .max_by(|&a, &b| value(a).cmp(&value(b)).then(b.cmp(&a)))
            };
            scales
                .into_iter()
                .map(|m| Guess {
                    j0: loosest(&sellable, &price, m),
                    j1: loosest(&all, &u1, m),
                    j2: loosest(&all, &u2, m),
                })
                .collect()
        }
    }
}

/// `ε' = ε/(ε + 2)`, so that `1 + ε = (1 + ε')/(1 - ε')`.
pub fn eps_prime(eps: &BigRational) -> BigRational {
    eps / (eps + BigRational::from_integer(2.into()))
}

/// Per-resource rounded values under one guess. `None` is the infinity
/// sentinel of the respective rule: the resource cannot be placed in that
/// set under this guess.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledInstance {
    /// `⌈u1/K⌉`, `None` above the agent 1 bound.
    pub u1: Vec<Option<u64>>,
    /// `⌊u2/K⌋`, `None` above the agent 2 bound.
    pub u2: Vec<Option<u64>>,
    /// `⌊p/K⌋`, `None` above the price bound.
    pub p_down: Vec<Option<u64>>,
    /// `⌈p/K⌉`, `None` above the price bound.
    pub p_up: Vec<Option<u64>>,
    pub k: BigRational,
    pub eps_prime: BigRational,
    pub m_max: u64,
    pub guess: Guess,
}

impl ScaledInstance {
    pub fn len(&self) -> usize {
        self.u1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u1.is_empty()
    }

    /// Largest finite value any rule may produce: `⌈2n/ε'⌉ + 1`.
    pub fn value_bound(&self) -> BigRational {
        let n = BigRational::from_integer(self.len().into());
        (BigRational::from_integer(2.into()) * n / &self.eps_prime).ceil() + BigRational::one()
    }
}

/// Applies the four rounding rules of `guess` with accuracy `eps`.
pub fn scale_instance(inst: &Instance, guess: Guess, eps: &BigRational) -> Result<ScaledInstance, ScaleError> {
    for j in [guess.j0, guess.j1, guess.j2].into_iter().flatten() {
        if j >= inst.len() {
            return Err(ScaleError::BadGuess(j));
        }
    }
    if !eps.is_positive() {
        return Err(ScaleError::InvalidEpsilon);
    }
    let m_max = guess.m_max(inst);
    if m_max == 0 {
        return Err(ScaleError::ZeroScale);
    }
    let ep = eps_prime(eps);
    let (e_num, e_den) = match (ep.numer().to_u64(), ep.denom().to_u64()) {
        (Some(a), Some(b)) => (a as u128, b as u128),
        _ => return Err(ScaleError::InvalidEpsilon),
    };
    let n = inst.len() as u128;
    // v/K = v·n·den(ε') / (num(ε')·m_max)
    let top = n * e_den;
    let bottom = e_num * m_max as u128;
    let down = |v: u64| ((v as u128 * top) / bottom) as u64;
    let up = |v: u64| ((v as u128 * top).div_ceil(bottom)) as u64;

    let (t0, t1, t2) = guess.thresholds(inst);
    let within = |v: u64, t: Option<u64>| t.is_some_and(|t| v <= t);
    let rs = inst.resources();
    Ok(ScaledInstance {
        u1: rs.iter().map(|r| within(r.u1, t1).then(|| up(r.u1))).collect(),
        u2: rs.iter().map(|r| within(r.u2, t2).then(|| down(r.u2))).collect(),
        p_down: rs.iter().map(|r| within(r.price, t0).then(|| down(r.price))).collect(),
        p_up: rs.iter().map(|r| within(r.price, t0).then(|| up(r.price))).collect(),
        k: &ep * ratio(m_max, inst.len() as u64),
        eps_prime: ep,
        m_max,
        guess,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::instance::{Cost, Resource};
    use crate::rational::int;

    #[test]
    fn eps_prime_identity() {
        let e = ratio(1, 10);
        let ep = eps_prime(&e);
        assert_eq!(ep, ratio(1, 21));
        assert_eq!((int(1) + &ep) / (int(1) - &ep), int(1) + e);
    }

    #[test]
    fn ratio_seven_point_three() {
        // u/K = 7.3 with K = 10: n = 2, ε' = 1/2 (ε = 2), m_max = 40
        let inst = Instance::new(
            vec![
                Resource::new("a", 73, 73, 73, Cost::Finite(0)),
                Resource::new("b", 80, 80, 0, Cost::Finite(0)),
            ],
            Budget::Finite(0),
        )
        .unwrap();
        let g = Guess {
            j0: Some(0),
            j1: Some(1),
            j2: Some(1),
        };
        let s = scale_instance(&inst, g, &int(2)).unwrap();
        assert_eq!(s.k, int(10));
        assert_eq!(s.u1[0], Some(8));
        assert_eq!(s.u2[0], Some(7));
        assert_eq!((s.p_down[0], s.p_up[0]), (Some(7), Some(8)));
    }

    #[test]
    fn prices_above_the_guess_are_excluded() {
        let inst = fixtures::alex_belle();
        let g = Guess {
            j0: Some(1),
            j1: Some(0),
            j2: Some(5),
        };
        let s = scale_instance(&inst, g, &ratio(1, 10)).unwrap();
        assert_eq!(s.p_down[0], None);
        assert_eq!(s.p_up[0], None);
        assert!(s.p_down[1].is_some());
    }

    #[test]
    fn alex_belle_values_within_bound() {
        let inst = fixtures::alex_belle();
        let g = Guess {
            j0: Some(0),
            j1: Some(0),
            j2: Some(5),
        };
        let s = scale_instance(&inst, g, &ratio(1, 10)).unwrap();
        assert_eq!(s.eps_prime, ratio(1, 21));
        assert_eq!(s.value_bound(), int(253));
        let bound = 253u64;
        for v in s.u1.iter().chain(&s.u2).chain(&s.p_down).chain(&s.p_up).flatten() {
            assert!(*v <= bound);
        }
    }

    #[test]
    fn bad_guesses() {
        let inst = fixtures::alex_belle();
        let g = Guess {
            j0: Some(9),
            j1: None,
            j2: None,
        };
        assert_eq!(scale_instance(&inst, g, &ratio(1, 10)), Err(ScaleError::BadGuess(9)));
        let g = Guess {
            j0: None,
            j1: None,
            j2: None,
        };
        assert_eq!(scale_instance(&inst, g, &ratio(1, 10)), Err(ScaleError::ZeroScale));
    }

    #[test]
    fn guess_counts() {
        let inst = fixtures::alex_belle();
        // distinct values: p {50, 5}, u1 {56, 11, 0}, u2 {50, 10}
        let ex = enumerate_guesses(&inst, Budget::Finite(1), GuessMode::Exhaustive);
        // (2+1)·(3+1)·(2+1) = 36 combinations minus those with scale 0:
        // all-empty and (empty, u1 = 0, empty)
        assert_eq!(ex.len(), 34);
        let per = enumerate_guesses(&inst, Budget::Finite(1), GuessMode::PerScale);
        // scales ⌈v/2⌉ over {50, 5, 56, 11, 10}: {25, 3, 28, 6, 5}
        assert_eq!(per.len(), 5);
        let g = per.last().unwrap();
        assert_eq!(g.m_max(&inst), 28);
        assert_eq!(
            *g,
            Guess {
                j0: Some(0),
                j1: Some(0),
                j2: Some(0)
            }
        );
        // nothing is sellable without budget
        let none = enumerate_guesses(&inst, Budget::Finite(0), GuessMode::Exhaustive);
        assert!(none.iter().all(|g| g.j0.is_none()));
    }
}
