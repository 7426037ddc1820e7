//! Synthetic matrices in the token-allocation format.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::matrix::{UtilityMatrix, MAX_ITEMS, MIN_ITEMS, TOKENS};

/// Fewest and most agents per synthetic matrix.
pub const MIN_AGENTS: usize = 2;
pub const MAX_AGENTS: usize = 6;

/// `count` matrices with item counts uniform in `[4, 15]` and agent counts
/// uniform in `[2, 6]`. Each row splits 1000 tokens proportionally to
/// exponential weights (a flat Dirichlet draw), rounding down and handing the
/// leftover tokens to the largest remainders. Identical seeds give identical
/// output.
pub fn synthesize_matrices(count: usize, seed: u64) -> Vec<UtilityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let items = rng.random_range(MIN_ITEMS..=MAX_ITEMS);
            let agents = rng.random_range(MIN_AGENTS..=MAX_AGENTS);
            UtilityMatrix {
                id: format!("syn-{k}"),
                values: (0..agents).map(|_| token_row(&mut rng, items)).collect(),
            }
        })
        .collect()
}

fn token_row(rng: &mut ChaCha8Rng, items: usize) -> Vec<u64> {
    let weights: Vec<f64> = (0..items).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = weights.iter().sum();
    let exact: Vec<f64> = weights.iter().map(|w| w / total * TOKENS as f64).collect();
    let mut row: Vec<u64> = exact.iter().map(|x| x.floor() as u64).collect();
    let assigned: u64 = row.iter().sum();
    // largest remainders first, lower index among equals
    let mut order: Vec<usize> = (0..items).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (exact[a] - exact[a].floor(), exact[b] - exact[b].floor());
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &j in order.iter().cycle().take((TOKENS - assigned) as usize) {
        row[j] += 1;
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_sum_to_tokens() {
        for m in synthesize_matrices(200, 7) {
            assert!(m.accepted());
            assert!((MIN_AGENTS..=MAX_AGENTS).contains(&m.agents()));
            for row in &m.values {
                assert_eq!(row.iter().sum::<u64>(), TOKENS);
            }
        }
    }

    #[test]
    fn same_seed_same_output() {
        assert_eq!(synthesize_matrices(30, 42), synthesize_matrices(30, 42));
        assert_ne!(synthesize_matrices(30, 42), synthesize_matrices(30, 43));
    }

    #[test]
    fn item_counts_look_uniform() {
        // 100 draws over 12 counts: each cell is Binomial(100, 1/12)
        let ms = synthesize_matrices(100, 42);
        let mut hist = [0u32; MAX_ITEMS + 1];
        for m in &ms {
            hist[m.items()] += 1;
        }
        let (n, p) = (100.0f64, 1.0 / 12.0);
        let sigma = (n * p * (1.0 - p)).sqrt();
        for &c in &hist[MIN_ITEMS..=MAX_ITEMS] {
            assert!((c as f64 - n * p).abs() <= 4.0 * sigma, "{hist:?}");
        }
        let chi2: f64 = hist[MIN_ITEMS..=MAX_ITEMS]
            .iter()
            .map(|&c| (c as f64 - n * p).powi(2) / (n * p))
            .sum();
        // 99.9th percentile of chi-square with 11 degrees of freedom
        assert!(chi2 < 31.26, "chi2 = {chi2}");
    }
}
