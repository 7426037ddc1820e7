//! Turning one agent pair of a utility matrix into a sale instance.

use std::fmt;

use dsirs::{Budget, Cost, Instance, Resource};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::UtilityMatrix;
use crate::SimError;

/// How item values of several agents combine into one number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    /// Arithmetic mean rounded half up.
    Avg,
    Max,
    Min,
}

impl Op {
    pub fn label(self) -> &'static str {
        match self {
            Op::Avg => "avg",
            Op::Max => "max",
            Op::Min => "min",
        }
    }

    pub fn parse(text: &str) -> Option<Op> {
        match text {
            "avg" => Some(Op::Avg),
            "max" => Some(Op::Max),
            "min" => Some(Op::Min),
            _ => None,
        }
    }

    /// Combines a non-empty list of values.
    pub fn apply(self, values: impl IntoIterator<Item = u64>) -> u64 {
        let values: Vec<u64> = values.into_iter().collect();
        match self {
            Op::Max => values.iter().copied().max().unwrap_or(0),
            Op::Min => values.iter().copied().min().unwrap_or(0),
            Op::Avg => {
                let k = values.len() as u64;
                if k == 0 {
                    return 0;
                }
                let sum: u64 = values.iter().sum();
                (2 * sum + k) / (2 * k)
            }
        }
    }
}

/// Operators for item costs (over the pair) and prices (over all agents).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModePair {
    pub cost: Op,
    pub price: Op,
}

impl ModePair {
    /// The six studied combinations.
    pub const ALL: [ModePair; 6] = [
        ModePair {
            cost: Op::Avg,
            price: Op::Avg,
        },
        ModePair {
            cost: Op::Max,
            price: Op::Max,
        },
        ModePair {
            cost: Op::Avg,
            price: Op::Max,
        },
        ModePair {
            cost: Op::Max,
            price: Op::Avg,
        },
        ModePair {
            cost: Op::Max,
            price: Op::Min,
        },
        ModePair {
            cost: Op::Avg,
            price: Op::Min,
        },
    ];
}

impl fmt::Display for ModePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.cost.label(), self.price.label())
    }
}

/// A built instance together with the prices before clamping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuiltInstance {
    pub instance: Instance,
    pub raw_prices: Vec<u64>,
}

/// Agent 1 and agent 2 are rows `pair.0` and `pair.1`. Item `j` costs
/// `mode.cost` over the two sampled values and sells for `mode.price` over
/// every agent's value, clamped to the larger sampled value.
pub fn build_dsirs_instance(
    matrix: &UtilityMatrix,
    pair: (usize, usize),
    mode: ModePair,
    budget: Budget,
) -> Result<BuiltInstance, SimError> {
    let (a, b) = pair;
    if a == b {
        return Err(SimError::SameAgentSampled(a));
    }
    if a >= matrix.agents() || b >= matrix.agents() {
        return Err(SimError::AgentOutOfRange {
            instance: matrix.id.clone(),
            agent: a.max(b),
        });
    }
    let mut resources = Vec::with_capacity(matrix.items());
    let mut raw_prices = Vec::with_capacity(matrix.items());
    for j in 0..matrix.items() {
        let (u1, u2) = (matrix.values[a][j], matrix.values[b][j]);
        let cost = mode.cost.apply([u1, u2]);
        let raw = mode.price.apply(matrix.values.iter().map(|row| row[j]));
        raw_prices.push(raw);
        resources.push(Resource::new(
            format!("r{}", j + 1),
            u1,
            u2,
            raw.min(u1.max(u2)),
            Cost::Finite(cost),
        ));
    }
    let instance = Instance::new(resources, budget).map_err(|e| SimError::Instance {
        instance: matrix.id.clone(),
        detail: e.to_string(),
    })?;
    Ok(BuiltInstance { instance, raw_prices })
}

/// The agent pair of instance number `index`, drawn from a generator keyed
/// on `(seed, index)` alone.
pub fn sample_pair(seed: u64, index: u64, agents: usize) -> (usize, usize) {
    assert!(agents >= 2, "a pair needs two agents");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let a = rng.random_range(0..agents);
    let mut b = rng.random_range(0..agents - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::synthesize_matrices;

    fn two_agents() -> UtilityMatrix {
        UtilityMatrix {
            id: "t".into(),
            values: vec![vec![101, 300, 0, 599], vec![100, 0, 301, 599]],
        }
    }

    #[test]
    fn half_up_average() {
        assert_eq!(Op::Avg.apply([101, 100]), 101);
        assert_eq!(Op::Avg.apply([1, 2]), 2);
        assert_eq!(Op::Avg.apply([1, 1, 2]), 1);
        assert_eq!(Op::Avg.apply([1, 2, 2, 2]), 2);
    }

    #[test]
    fn pair_population_average() {
        let mode = ModePair {
            cost: Op::Avg,
            price: Op::Avg,
        };
        let built = build_dsirs_instance(&two_agents(), (0, 1), mode, Budget::Finite(0)).unwrap();
        let costs: Vec<Cost> = built.instance.resources().iter().map(|r| r.cost).collect();
        assert_eq!(
            costs,
            vec![
                Cost::Finite(101),
                Cost::Finite(150),
                Cost::Finite(151),
                Cost::Finite(599)
            ]
        );
        let prices: Vec<u64> = built.instance.resources().iter().map(|r| r.price).collect();
        assert_eq!(prices, vec![101, 150, 151, 599]);
    }

    #[test]
    fn minimum_price_with_a_zero_value() {
        let m = UtilityMatrix {
            id: "z".into(),
            values: vec![
                vec![250, 250, 250, 250],
                vec![400, 200, 200, 200],
                vec![0, 500, 250, 250],
                vec![100, 100, 400, 400],
            ],
        };
        let mode = ModePair {
            cost: Op::Max,
            price: Op::Min,
        };
        let built = build_dsirs_instance(&m, (0, 1), mode, Budget::Finite(8)).unwrap();
        assert_eq!(built.instance.resource(0).price, 0);
        assert_eq!(built.instance.resource(0).cost, Cost::Finite(400));
    }

    #[test]
    fn population_prices_are_clamped() {
        let mode = ModePair {
            cost: Op::Avg,
            price: Op::Max,
        };
        let mut clamped = false;
        for (k, m) in synthesize_matrices(40, 42).iter().enumerate() {
            if m.agents() < 5 {
                continue;
            }
            let pair = sample_pair(42, k as u64, m.agents());
            let built = build_dsirs_instance(m, pair, mode, Budget::Finite(0)).unwrap();
            for (j, r) in built.instance.resources().iter().enumerate() {
                assert!(r.price <= r.u1.max(r.u2));
                clamped |= built.raw_prices[j] > r.u1.max(r.u2);
            }
        }
        assert!(clamped);
    }

    #[test]
    fn same_agent_is_rejected() {
        let mode = ModePair::ALL[0];
        assert_eq!(
            build_dsirs_instance(&two_agents(), (1, 1), mode, Budget::Finite(0)),
            Err(SimError::SameAgentSampled(1))
        );
    }

    #[test]
    fn pairs_are_distinct_and_keyed() {
        for i in 0..200 {
            let (a, b) = sample_pair(42, i, 3);
            assert!(a != b && a < 3 && b < 3);
            assert_eq!(sample_pair(42, i, 3), (a, b));
        }
        let draws: Vec<_> = (0..50).map(|i| sample_pair(42, i, 6)).collect();
        assert!(draws.iter().any(|&p| p != draws[0]));
    }
}
