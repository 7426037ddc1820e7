//! Rounded values bracket the originals within one scale unit each, and the
//! error over any set stays within ε'·m_max.

mod common;

use dsirs::fptas::{enumerate_guesses, scale_instance, GuessMode};
use dsirs::rational::{int, ratio};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn rounding_brackets_and_aggregate_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let epsilons = [ratio(1, 2), ratio(1, 4), ratio(1, 10), ratio(3, 7)];
    let mut checked = 0;
    for _ in 0..120 {
        let n = rng.random_range(1..=12);
        let inst = if rng.random_bool(0.2) {
            common::heavy_instance(&mut rng, n)
        } else {
            common::random_instance(&mut rng, n)
        };
        let eps = &epsilons[rng.random_range(0..epsilons.len())];
        let guesses = enumerate_guesses(&inst, inst.budget(), GuessMode::Exhaustive);
        let picked: Vec<_> = guesses.into_iter().filter(|_| rng.random_bool(0.3)).collect();
        for g in &picked {
            let s = scale_instance(&inst, *g, eps).unwrap();
            let k = &s.k;
            let bound = s.value_bound();
            let total_slack = &s.eps_prime * int(s.m_max as i64);
            let (mut e1, mut e2, mut e0) = (int(0), int(0), int(0));
            for (i, r) in inst.resources().iter().enumerate() {
                let v = |x: u64| BigRational::from_integer(x.into());
                if let Some(a) = s.u1[i] {
                    let ka = k * v(a);
                    assert!(ka >= v(r.u1) && &ka - v(r.u1) < *k);
                    assert!(v(a) <= bound);
                    if rng.random_bool(0.5) {
                        e1 += ka - v(r.u1);
                    }
                }
                if let Some(b) = s.u2[i] {
                    let kb = k * v(b);
                    assert!(kb <= v(r.u2) && v(r.u2) - &kb < *k);
                    if rng.random_bool(0.5) {
                        e2 += v(r.u2) - kb;
                    }
                }
                match (s.p_down[i], s.p_up[i]) {
                    (Some(lo), Some(hi)) => {
                        let (klo, khi) = (k * v(lo), k * v(hi));
                        assert!(klo <= v(r.price) && v(r.price) <= khi);
                        assert!(v(r.price) - &klo < *k && &khi - v(r.price) < *k);
                        if rng.random_bool(0.5) {
                            e0 += v(r.price) - klo;
                        }
                    }
                    (None, None) => {}
                    other => panic!("price rounding disagrees on exclusion: {other:?}"),
                }
            }
            for e in [e1, e2, e0] {
                assert!(e <= total_slack);
            }
            checked += 1;
        }
    }
    assert!(checked >= 100, "only {checked} scaled instances checked");
}
