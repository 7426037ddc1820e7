//! End-to-end properties of the simulation: parsing round trips, budget-0
//! behaviour, determinism, monotonicity in the budget and symmetry in the
//! agent order.

use dsirs::{aw_derived_plan, welfare, Budget, ResourceSet, Rho};
use dsirs_sim::{
    build_dsirs_instance, format_matrices, parse_matrices, results_csv, run_sweep, sample_pair, synthesize_matrices,
    SweepConfig, SweepRecord, UtilityMatrix,
};

/// Reads blocks with plain string splitting, independently of the library
/// parser.
fn naive_parse(text: &str) -> Vec<(String, Vec<Vec<u64>>)> {
    let mut out: Vec<(String, Vec<Vec<u64>>)> = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(id) = line.strip_prefix("instance,") {
            out.push((id.to_string(), Vec::new()));
        } else {
            let row = line.split(',').map(|x| x.trim().parse().unwrap()).collect();
            out.last_mut().unwrap().1.push(row);
        }
    }
    out
}

#[test]
fn synthetic_blocks_recount() {
    let matrices = synthesize_matrices(20, 42);
    let text = format_matrices(&matrices);
    let naive = naive_parse(&text);
    assert_eq!(naive.len(), 20);
    for ((id, rows), m) in naive.iter().zip(&matrices) {
        assert_eq!(*id, m.id);
        assert_eq!(*rows, m.values);
        assert!((2..=6).contains(&rows.len()));
        assert!((4..=15).contains(&rows[0].len()));
        for row in rows {
            assert_eq!(row.len(), rows[0].len());
            assert_eq!(row.iter().sum::<u64>(), 1000);
        }
    }
    assert_eq!(parse_matrices(&text).unwrap(), matrices);
}

#[test]
fn budget_zero_sells_only_free_resources_and_beats_plain_aw() {
    let matrices = synthesize_matrices(20, 3);
    let config = SweepConfig {
        budgets: vec![0],
        ..SweepConfig::default()
    };
    let records = run_sweep(&matrices, &config).unwrap();
    assert_eq!(records.len(), 20 * 6);
    for (k, m) in matrices.iter().enumerate() {
        let pair = sample_pair(config.seed, k as u64, m.agents());
        for r in records.iter().filter(|r| r.instance_id == m.id) {
            let inst = build_dsirs_instance(m, pair, r.mode, Budget::Finite(0))
                .unwrap()
                .instance;
            let plain = welfare(&aw_derived_plan(ResourceSet::EMPTY, &inst), &inst).unwrap();
            match (&r.metrics, plain.rho) {
                (Some(got), Rho::Finite(aw)) => {
                    assert_eq!(inst.cost(got.plan.s0), Some(0));
                    assert!(
                        got.rho <= aw,
                        "{}: {} above the plain split-free ratio {aw}",
                        m.id,
                        got.rho
                    );
                }
                (Some(got), Rho::Infinite) => assert_eq!(inst.cost(got.plan.s0), Some(0)),
                (None, Rho::Finite(aw)) => panic!("{}: infeasible although plain AW gives {aw}", m.id),
                (None, Rho::Infinite) => {}
            }
        }
    }
}

#[test]
fn repeated_runs_are_identical() {
    let matrices = synthesize_matrices(15, 42);
    let a = results_csv(&run_sweep(&matrices, &SweepConfig::default()).unwrap());
    let b = results_csv(&run_sweep(&matrices, &SweepConfig::default()).unwrap());
    assert_eq!(a, b);
}

#[test]
fn larger_budgets_never_hurt() {
    let matrices = synthesize_matrices(20, 5);
    let records = run_sweep(&matrices, &SweepConfig::default()).unwrap();
    // records come mode by mode, budgets ascending
    for cell in records.chunks(SweepConfig::default().budgets.len()) {
        for w in cell.windows(2) {
            assert_eq!((&w[0].instance_id, w[0].mode), (&w[1].instance_id, w[1].mode));
            assert!(w[0].budget < w[1].budget);
            match (&w[0].metrics, &w[1].metrics) {
                (Some(a), Some(b)) => assert!(
                    b.rho <= a.rho,
                    "{} {}: ρ rose with the budget",
                    w[0].instance_id,
                    w[0].mode
                ),
                (Some(_), None) => panic!("{}: feasibility lost at budget {}", w[0].instance_id, w[1].budget),
                _ => {}
            }
        }
    }
}

fn rho_d(records: &[SweepRecord]) -> Vec<Option<(String, String)>> {
    records
        .iter()
        .map(|r| r.metrics.as_ref().map(|m| (m.rho.to_string(), m.d.to_string())))
        .collect()
}

#[test]
fn agent_order_does_not_matter() {
    // two-agent matrices and their mirror images
    let base: Vec<UtilityMatrix> = synthesize_matrices(20, 9)
        .into_iter()
        .map(|m| UtilityMatrix {
            id: m.id,
            values: m.values[..2].to_vec(),
        })
        .collect();
    let mirrored: Vec<UtilityMatrix> = base
        .iter()
        .map(|m| UtilityMatrix {
            id: m.id.clone(),
            values: vec![m.values[1].clone(), m.values[0].clone()],
        })
        .collect();
    let config = SweepConfig::default();
    let a = run_sweep(&base, &config).unwrap();
    let b = run_sweep(&mirrored, &config).unwrap();
    assert_eq!(rho_d(&a), rho_d(&b));
}
