//! Agent 2's best welfare over a resource subset when it receives all sale
//! revenue, and detection of resources agent 1 values above twice that.

use num_rational::BigRational;

use super::knapsack::knapsack_fptas;
use crate::instance::{Agent, Budget, Instance};
use crate::set::ResourceSet;

/// Item values of the knapsack behind the agent 2 optimum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum O2Mode {
    /// Selling `r` gains `p(r) - u2(r)` over keeping it.
    #[default]
    Opportunity,
    /// Selling `r` is valued at its full price `p(r)`.
    StrictPaper,
}

/// An approximate agent 2 optimum: the welfare of the chosen sale set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct O2 {
    /// `u2(R_S \ sold) + p(sold)`.
    pub value: u64,
    pub sold: ResourceSet,
}

/// Agent 2 keeps or sells each resource of `subset`, selling within `budget`
/// and receiving all revenue. Only resources priced above their agent 2
/// utility are worth selling; among those a knapsack approximation picks the
/// sale set.
pub fn o2_value(inst: &Instance, subset: ResourceSet, budget: Budget, eps: &BigRational, mode: O2Mode) -> O2 {
    let worth: Vec<usize> = subset
        .iter()
        .filter(|&i| {
            let r = inst.resource(i);
            r.price > r.u2 && r.cost.finite().is_some()
        })
        .collect();
    let items: Vec<(u64, u64)> = worth
        .iter()
        .map(|&i| {
            let r = inst.resource(i);
            let value = match mode {
                O2Mode::Opportunity => r.price - r.u2,
                O2Mode::StrictPaper => r.price,
            };
            (value, r.cost.finite().expect("filtered to sellable"))
        })
        .collect();
    let sold: ResourceSet = knapsack_fptas(&items, budget, eps)
        .into_iter()
        .map(|k| worth[k])
        .collect();
    O2 {
        value: inst.utility(Agent::Two, subset.difference(sold)) + inst.price(sold),
        sold,
    }
}

/// Every resource `r` with `u1(r) > 2·O2(R \ {r})` under the instance budget.
/// Valid instances have at most one; instances with pre-sold placeholders may
/// have more.
pub fn heavy_resources(inst: &Instance, eps: &BigRational, mode: O2Mode) -> Vec<usize> {
    let all = inst.all();
    (0..inst.len())
        .filter(|&i| {
            let u1 = inst.resource(i).u1 as u128;
            u1 > 0 && u1 > 2 * o2_value(inst, all.without(i), inst.budget(), eps, mode).value as u128
        })
        .collect()
}

/// The unique heavy resource of a valid instance, if any.
pub fn detect_heavy_resource(inst: &Instance, eps: &BigRational, mode: O2Mode) -> Option<usize> {
    let found = heavy_resources(inst, eps, mode);
    assert!(found.len() <= 1, "two heavy resources in one instance: {found:?}");
    found.first().copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::instance::{Cost, Resource};
    use crate::rational::ratio;

    fn zero_price(u1: &[u64], u2: &[u64]) -> Instance {
        let resources = u1
            .iter()
            .zip(u2)
            .enumerate()
            .map(|(i, (&a, &b))| Resource::new(format!("r{}", i + 1), a, b, 0, Cost::Finite(1)))
            .collect();
        Instance::new(resources, Budget::Finite(1)).unwrap()
    }

    #[test]
    fn nothing_worth_selling_without_prices() {
        let inst = zero_price(&[97, 1, 1, 1], &[25, 25, 25, 25]);
        let o2 = o2_value(
            &inst,
            inst.all().without(0),
            Budget::Finite(1),
            &ratio(1, 10),
            O2Mode::Opportunity,
        );
        assert_eq!(o2.value, 75);
        assert!(o2.sold.is_empty());
    }

    #[test]
    fn keeping_beats_selling_below_utility() {
        let inst = fixtures::envy_impossible();
        let b = ResourceSet::singleton(1);
        let o2 = o2_value(&inst, b, Budget::Finite(1), &ratio(1, 10), O2Mode::Opportunity);
        assert_eq!(o2.value, 40);
    }

    #[test]
    fn selling_above_utility_is_chosen() {
        // agent 2 values x at 10 but it sells for 60
        let inst = Instance::new(
            vec![
                Resource::new("x", 60, 10, 60, Cost::Finite(2)),
                Resource::new("y", 10, 60, 0, Cost::Finite(0)),
            ],
            Budget::Finite(2),
        )
        .unwrap();
        let o2 = o2_value(&inst, inst.all(), Budget::Finite(2), &ratio(1, 10), O2Mode::Opportunity);
        assert_eq!((o2.value, o2.sold), (120, ResourceSet::singleton(0)));
        let o2 = o2_value(&inst, inst.all(), Budget::Finite(1), &ratio(1, 10), O2Mode::Opportunity);
        assert_eq!(o2.value, 70);
    }

    #[test]
    fn heavy_examples() {
        let e = ratio(1, 10);
        let m = O2Mode::Opportunity;
        assert_eq!(
            detect_heavy_resource(&zero_price(&[97, 1, 1, 1], &[25, 25, 25, 25]), &e, m),
            None
        );
        assert_eq!(detect_heavy_resource(&zero_price(&[99, 1], &[50, 50]), &e, m), None);
        assert_eq!(detect_heavy_resource(&fixtures::difference_vs_ratio(), &e, m), None);
        assert_eq!(
            detect_heavy_resource(&zero_price(&[98, 1, 1], &[2, 49, 49]), &e, m),
            None
        );
        assert_eq!(
            detect_heavy_resource(&zero_price(&[90, 5, 5], &[10, 4, 86]), &e, m),
            None
        );
        // 99 > 2·(20 + 10)
        assert_eq!(
            detect_heavy_resource(&zero_price(&[99, 1, 0], &[70, 20, 10]), &e, m),
            Some(0)
        );
    }
}
