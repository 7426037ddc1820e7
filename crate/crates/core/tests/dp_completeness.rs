//! On small random instances the dynamic program reaches exactly the keys a
//! full enumeration of window-respecting placements reaches, each at its
//! least cost; and the role partition matches the utilities.

mod common;

use std::collections::BTreeMap;

use dsirs::fptas::{
    dp_solve, enumerate_guesses, partition_roles, scale_instance, windows_for, Direction, DpKey, GuessMode, ScanOrder,
};
use dsirs::rational::ratio;
use dsirs::Cost;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn dp_frontier_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let eps = ratio(1, 4);
    let mut runs = 0;
    for _ in 0..150 {
        let n = rng.random_range(1..=8);
        let given = common::random_instance(&mut rng, n);
        let (_, variants) = partition_roles(&given);
        let v = variants[rng.random_range(0..variants.len())];
        let inst = if v.swapped { given.swapped() } else { given.clone() };
        let scan = ScanOrder::new(&inst, v.a1, v.a2);
        let guesses = enumerate_guesses(&inst, inst.budget(), GuessMode::Exhaustive);
        for _ in 0..3 {
            let g = guesses[rng.random_range(0..guesses.len())];
            let s = scale_instance(&inst, g, &eps).unwrap();
            for w in windows_for(&scan) {
                // placement options per scan position, written out from the
                // window definition
                let options: Vec<[bool; 3]> = (1..=n)
                    .map(|i| {
                        let r = scan.order[i - 1];
                        let mine = i <= scan.a1_len;
                        let (one, two) = match w.direction {
                            Direction::OneToTwo => (mine && i <= w.i_left, !mine || i >= w.i_left),
                            Direction::TwoToOne => (mine || i <= w.i_right, !mine && i >= w.i_right),
                        };
                        let sell = s.p_down[r].is_some()
                            && matches!(inst.resource(r).cost, Cost::Finite(c) if inst.budget().admits(c));
                        [sell, one && s.u1[r].is_some(), two && s.u2[r].is_some()]
                    })
                    .collect();
                let mut expected: BTreeMap<DpKey, u64> = BTreeMap::new();
                for code in 0..3usize.pow(n as u32) {
                    let (mut c, mut key, mut cost, mut ok) = (
                        code,
                        DpKey {
                            o: 0,
                            su1: 0,
                            su2: 0,
                            sp: 0,
                        },
                        0u64,
                        true,
                    );
                    for (pos, opt) in options.iter().enumerate() {
                        let r = scan.order[pos];
                        let choice = c % 3;
                        c /= 3;
                        if !opt[choice] {
                            ok = false;
                            break;
                        }
                        match choice {
                            0 => {
                                key.o += 1;
                                key.sp += s.p_down[r].unwrap();
                                cost += inst.resource(r).cost.finite().unwrap();
                            }
                            1 => key.su1 += s.u1[r].unwrap(),
                            _ => key.su2 += s.u2[r].unwrap(),
                        }
                    }
                    if ok && inst.budget().admits(cost) {
                        let e = expected.entry(key).or_insert(cost);
                        *e = (*e).min(cost);
                    }
                }
                let got = dp_solve(&inst, &s, &scan, w, inst.budget());
                let got_map: BTreeMap<DpKey, u64> = got.iter().map(|(k, e)| (*k, e.cost)).collect();
                assert_eq!(got_map.len(), got.len(), "duplicate keys");
                assert_eq!(got_map, expected, "window {w:?}");
                for (k, e) in &got {
                    assert_eq!(e.s0.union(e.s1).union(e.s2), inst.all());
                    assert_eq!(k.o as usize, e.s0.len());
                    assert_eq!(Some(e.cost), inst.cost(e.s0));
                }
                runs += 1;
            }
        }
    }
    assert!(runs > 200, "only {runs} windows checked");
}

#[test]
fn roles_follow_the_utilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..300 {
        let n = rng.random_range(1..=12);
        let inst = common::random_instance(&mut rng, n);
        let (pref, variants) = partition_roles(&inst);
        assert_eq!(pref.r0.union(pref.r1).union(pref.r2), inst.all());
        assert!(pref.r0.is_disjoint(pref.r1) && pref.r0.is_disjoint(pref.r2) && pref.r1.is_disjoint(pref.r2));
        for i in 0..n {
            let r = inst.resource(i);
            let side = if r.u1 > r.u2 {
                pref.r1
            } else if r.u1 < r.u2 {
                pref.r2
            } else {
                pref.r0
            };
            assert!(side.contains(i));
        }
        let expected = if pref.r0.is_empty() { 2 } else { 4 };
        assert_eq!(variants.len(), expected);
        for v in &variants {
            assert!(v.a1.is_disjoint(v.a2));
            assert_eq!(v.a1.union(v.a2), inst.all());
            let theirs = if v.swapped { pref.r1 } else { pref.r2 };
            assert!(theirs.is_subset(v.a2));
            assert!(v.a1.difference(pref.r0) == if v.swapped { pref.r2 } else { pref.r1 });
        }
    }
}
