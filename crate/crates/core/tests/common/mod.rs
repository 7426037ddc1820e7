//! Seeded random instances shared by the property tests.

#![allow(dead_code)]

use dsirs::{Budget, Cost, Instance, Resource};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `n` resources with utilities below 100 (the last one absorbs the
/// difference so both totals agree), prices up to the larger utility, costs
/// up to 4 or unsellable, and a budget up to 8 or unlimited.
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> Instance {
    let u1: Vec<u64> = (0..n).map(|_| rng.random_range(0..100)).collect();
    let u2: Vec<u64> = (0..n).map(|_| rng.random_range(0..100)).collect();
    assemble(rng, u1, u2)
}

/// Like [`random_instance`], but resource 0 is worth far more to agent 1
/// than anything agent 2 can collect elsewhere.
pub fn heavy_instance(rng: &mut ChaCha8Rng, n: usize) -> Instance {
    let mut u1: Vec<u64> = (0..n).map(|_| rng.random_range(0..10)).collect();
    let mut u2: Vec<u64> = (0..n).map(|_| rng.random_range(0..20)).collect();
    u1[0] = rng.random_range(300..600);
    u2[0] = rng.random_range(0..u1[0]);
    let (t1, t2): (u64, u64) = (u1.iter().sum(), u2.iter().sum());
    // spread agent 2's shortfall over the other resources
    if t1 > t2 && n > 1 {
        let extra = t1 - t2;
        for k in 0..extra {
            u2[1 + (k as usize) % (n - 1)] += 1;
        }
    } else if t2 > t1 {
        u1[0] += t2 - t1;
    }
    assemble(rng, u1, u2)
}

fn assemble(rng: &mut ChaCha8Rng, mut u1: Vec<u64>, mut u2: Vec<u64>) -> Instance {
    let n = u1.len();
    let (t1, t2): (u64, u64) = (u1.iter().sum(), u2.iter().sum());
    if t1 < t2 {
        u1[n - 1] += t2 - t1;
    } else {
        u2[n - 1] += t1 - t2;
    }
    if u1.iter().sum::<u64>() == 0 {
        u1[0] += 1;
        u2[0] += 1;
    }
    let resources = (0..n)
        .map(|i| {
            let price = rng.random_range(0..=u1[i].max(u2[i]));
            let cost = if rng.random_bool(0.15) {
                Cost::Unsellable
            } else {
                Cost::Finite(rng.random_range(0..=4))
            };
            Resource::new(format!("r{}", i + 1), u1[i], u2[i], price, cost)
        })
        .collect();
    let budget = if rng.random_bool(0.05) {
        Budget::Unlimited
    } else {
        Budget::Finite(rng.random_range(0..=8))
    };
    Instance::new(resources, budget).expect("generated instance is valid")
}
