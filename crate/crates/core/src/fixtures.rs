//! Small hand-built instances with known answers, shared by tests, examples
//! and the CLI documentation.

use crate::instance::{Budget, Cost, Instance, Resource};

fn build(rows: &[(&str, u64, u64, u64, Cost)], budget: Budget) -> Instance {
    let resources = rows
        .iter()
        .map(|&(name, u1, u2, p, c)| Resource::new(name, u1, u2, p, c))
        .collect();
    Instance::new(resources, budget).expect("fixture is a valid instance")
}

/// A watch, four art pieces and a bag. Classic AW must split the watch;
/// selling it balances both agents at 52. Every resource costs 1 and the
/// budget allows a single sale.
pub fn alex_belle() -> Instance {
    let c = Cost::Finite(1);
    build(
        &[
            ("r1", 56, 50, 50, c),
            ("r2", 11, 10, 5, c),
            ("r3", 11, 10, 5, c),
            ("r4", 11, 10, 5, c),
            ("r5", 11, 10, 5, c),
            ("r6", 0, 10, 5, c),
        ],
        Budget::Finite(1),
    )
}

/// Minimum difference and minimum ratio are attained by different plans:
/// d = 1 at ⟨{a},{b},{c}⟩ while ρ = 99/92 at ⟨∅,{a},{b,c}⟩. Only `a` fits
/// the budget.
pub fn difference_vs_ratio() -> Instance {
    build(
        &[
            ("a", 99, 8, 0, Cost::Finite(1)),
            ("b", 1, 90, 0, Cost::Finite(2)),
            ("c", 0, 2, 0, Cost::Finite(2)),
        ],
        Budget::Finite(1),
    )
}

/// No feasible plan is envy-free.
pub fn envy_impossible() -> Instance {
    build(
        &[("a", 70, 60, 20, Cost::Finite(1)), ("b", 30, 40, 20, Cost::Finite(1))],
        Budget::Finite(1),
    )
}

/// An equitable plan that is not envy-free next to an envy-free plan that is
/// not equitable.
pub fn equity_vs_envy() -> Instance {
    let c = Cost::Finite(1);
    build(
        &[
            ("v", 22, 39, 2, c),
            ("w", 56, 2, 5, c),
            ("x", 16, 28, 4, c),
            ("y", 1, 27, 10, c),
            ("z", 25, 24, 5, c),
        ],
        Budget::Finite(1),
    )
}
