//! Per-record and aggregate CSV output.

use std::collections::BTreeMap;

use dsirs::rational::to_significant;
use num_rational::BigRational;
use num_traits::Zero;

use crate::build::ModePair;
use crate::sweep::SweepRecord;
use crate::SimError;

pub const RESULTS_HEADER: [&str; 13] = [
    "instance_id",
    "mode_cost",
    "mode_price",
    "budget",
    "rho_num",
    "rho_den",
    "d_num",
    "d_den",
    "s0_size",
    "s1_size",
    "s2_size",
    "variant",
    "feasible",
];

pub const AGGREGATES_HEADER: [&str; 7] = [
    "mode_cost",
    "mode_price",
    "budget",
    "mean_rho",
    "mean_d",
    "n_feasible",
    "n_infeasible",
];

/// Significant digits of aggregate means.
pub const MEAN_DIGITS: usize = 12;

/// Means over the feasible records of one (mode, budget) cell; `None` when
/// the cell has no feasible record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AggregateRow {
    pub mode: ModePair,
    pub budget: u64,
    pub mean_rho: Option<BigRational>,
    pub mean_d: Option<BigRational>,
    pub n_feasible: usize,
    pub n_infeasible: usize,
}

/// Exact means per (mode, budget), ordered by mode as the records first
/// mention it and then by budget.
pub fn aggregate(records: &[SweepRecord]) -> Result<Vec<AggregateRow>, SimError> {
    if records.is_empty() {
        return Err(SimError::EmptyInput);
    }
    let mut modes: Vec<ModePair> = Vec::new();
    let mut cells: BTreeMap<(usize, u64), (BigRational, BigRational, usize, usize)> = BTreeMap::new();
    for r in records {
        let slot = match modes.iter().position(|&m| m == r.mode) {
            Some(i) => i,
            None => {
                modes.push(r.mode);
                modes.len() - 1
            }
        };
        let cell = cells
            .entry((slot, r.budget))
            .or_insert_with(|| (BigRational::zero(), BigRational::zero(), 0, 0));
        match &r.metrics {
            Some(m) => {
                cell.0 += &m.rho;
                cell.1 += &m.d;
                cell.2 += 1;
            }
            None => cell.3 += 1,
        }
    }
    Ok(cells
        .into_iter()
        .map(|((slot, budget), (rho, d, n, bad))| {
            let mean = |sum: BigRational| (n > 0).then(|| sum / BigRational::from_integer(n.into()));
            AggregateRow {
                mode: modes[slot],
                budget,
                mean_rho: mean(rho),
                mean_d: mean(d),
                n_feasible: n,
                n_infeasible: bad,
            }
        })
        .collect())
}

fn to_csv<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for row in rows {
        w.write_record(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing memory")).expect("CSV is UTF-8")
}

/// `results.csv`: exact ratios as numerator and denominator; infeasible
/// records leave the metric fields empty.
pub fn results_csv(records: &[SweepRecord]) -> String {
    to_csv(
        &RESULTS_HEADER,
        records.iter().map(|r| {
            let mut row = vec![
                r.instance_id.clone(),
                r.mode.cost.label().to_string(),
                r.mode.price.label().to_string(),
                r.budget.to_string(),
            ];
            match &r.metrics {
                Some(m) => {
                    let (s0, s1, s2) = m.sizes();
                    row.extend([
                        m.rho.numer().to_string(),
                        m.rho.denom().to_string(),
                        m.d.numer().to_string(),
                        m.d.denom().to_string(),
                        s0.to_string(),
                        s1.to_string(),
                        s2.to_string(),
                        m.variant.label().to_string(),
                        "true".to_string(),
                    ]);
                }
                None => {
                    row.extend(std::iter::repeat_n(String::new(), 8));
                    row.push("false".to_string());
                }
            }
            row
        }),
    )
}

/// `aggregates.csv`: means with 12 significant digits, empty when a cell
/// has no feasible record.
pub fn aggregates_csv(rows: &[AggregateRow]) -> String {
    let fmt = |v: &Option<BigRational>| v.as_ref().map_or(String::new(), |x| to_significant(x, MEAN_DIGITS));
    to_csv(
        &AGGREGATES_HEADER,
        rows.iter().map(|a| {
            vec![
                a.mode.cost.label().to_string(),
                a.mode.price.label().to_string(),
                a.budget.to_string(),
                fmt(&a.mean_rho),
                fmt(&a.mean_d),
                a.n_feasible.to_string(),
                a.n_infeasible.to_string(),
            ]
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::Op;
    use crate::sweep::{Forcing, Metrics, Variant};
    use dsirs::rational::{int, ratio};
    use dsirs::{fixtures, Plan, ResourceSet};

    fn record(budget: u64, rho: Option<BigRational>) -> SweepRecord {
        let inst = fixtures::envy_impossible();
        let plan = Plan::derived(
            &inst,
            ResourceSet::EMPTY,
            ResourceSet::singleton(0),
            ResourceSet::singleton(1),
        )
        .unwrap();
        SweepRecord {
            instance_id: "i,1".into(),
            mode: ModePair {
                cost: Op::Avg,
                price: Op::Min,
            },
            budget,
            metrics: rho.map(|rho| Metrics {
                d: &rho - int(1),
                rho,
                plan,
                variant: Variant {
                    forcing: Forcing::None,
                    swapped: false,
                },
            }),
        }
    }

    #[test]
    fn single_record_mean() {
        let rows = aggregate(&[record(0, Some(int(1)))]).unwrap();
        assert_eq!(rows[0].mean_rho, Some(int(1)));
        assert_eq!(rows[0].mean_d, Some(int(0)));
    }

    #[test]
    fn means_skip_infeasible_records() {
        let rows = aggregate(&[record(4, Some(int(1))), record(4, Some(int(3))), record(4, None)]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].mean_rho, Some(int(2)));
        assert_eq!((rows[0].n_feasible, rows[0].n_infeasible), (2, 1));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert_eq!(aggregate(&[]), Err(SimError::EmptyInput));
    }

    #[test]
    fn csv_layout() {
        let recs = [record(2, Some(ratio(7, 6))), record(2, None)];
        let text = results_csv(&recs);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], RESULTS_HEADER.join(","));
        assert_eq!(lines[1], "\"i,1\",avg,min,2,7,6,1,6,0,1,1,order-12,true");
        assert_eq!(lines[2], "\"i,1\",avg,min,2,,,,,,,,,false");
        let agg = aggregates_csv(&aggregate(&recs).unwrap());
        let lines: Vec<&str> = agg.lines().collect();
        assert_eq!(lines[0], AGGREGATES_HEADER.join(","));
        assert_eq!(lines[1], "avg,min,2,1.16666666667,0.166666666667,1,1");
    }
}
