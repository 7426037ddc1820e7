//! 0/1 knapsack approximation by profit scaling.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::instance::Budget;

/// Chooses items with total weight within `capacity` and total value at
/// least `(1 - ε)` times the optimum. Returns the selected item indices in
/// increasing order.
///
/// Profits are rounded down to multiples of `K = ε·v_max/n` and a
/// minimum-weight table over scaled profits picks the best affordable set.
pub fn knapsack_fptas(items: &[(u64, u64)], capacity: Budget, eps: &BigRational) -> Vec<usize> {
    assert!(eps.is_positive(), "epsilon must be positive");
    let fits = |w: u64| capacity.admits(w);
    let usable: Vec<usize> = (0..items.len())
        .filter(|&i| items[i].0 > 0 && fits(items[i].1))
        .collect();
    if usable.is_empty() {
        return Vec::new();
    }
    if let Budget::Unlimited = capacity {
        return usable;
    }

    let n = BigInt::from(usable.len());
    let v_max = BigInt::from(usable.iter().map(|&i| items[i].0).max().unwrap_or(0));
    // scaled profit = floor(v / K) = floor(v·n·den / (num·v_max)); when K < 1
    // the profits are used unscaled, which is exact and no larger
    let divisor = eps.numer() * &v_max;
    let scaled: Vec<usize> = usable
        .iter()
        .map(|&i| {
            let v = BigInt::from(items[i].0);
            let s = (&v * &n * eps.denom()) / &divisor;
            s.min(v).to_usize().expect("scaled profit fits in memory")
        })
        .collect();
    let total: usize = scaled.iter().sum();

    // min_weight[j][s]: least weight of a subset of the first j usable items
    // with scaled profit exactly s
    const NONE: u64 = u64::MAX;
    let mut table = vec![vec![NONE; total + 1]; usable.len() + 1];
    table[0][0] = 0;
    for (j, &i) in usable.iter().enumerate() {
        let (w, s) = (items[i].1, scaled[j]);
        for prof in 0..=total {
            let skip = table[j][prof];
            let take = if prof >= s && table[j][prof - s] != NONE {
                table[j][prof - s].saturating_add(w)
            } else {
                NONE
            };
            table[j + 1][prof] = skip.min(take);
        }
    }
    let last = &table[usable.len()];
    let Some(best) = (0..=total).rev().find(|&s| last[s] != NONE && fits(last[s])) else {
        return Vec::new();
    };

    // walk back, preferring to skip an item whenever that keeps the weight
    let mut chosen = Vec::new();
    let mut prof = best;
    for j in (0..usable.len()).rev() {
        if table[j][prof] == table[j + 1][prof] {
            continue;
        }
        chosen.push(usable[j]);
        prof -= scaled[j];
    }
    debug_assert!(prof.is_zero());
    chosen.reverse();
    chosen
}
