//! Budget-sweep simulations on token-allocation utility matrices: parse or
//! synthesize matrices, build a sale instance per sampled agent pair and
//! cost/price mode, solve every budget of a grid with the approximation
//! scheme, and write per-record and aggregate CSV.

pub mod build;
pub mod matrix;
pub mod report;
pub mod sweep;
pub mod synth;

use thiserror::Error;

pub use build::{build_dsirs_instance, sample_pair, BuiltInstance, ModePair, Op};
pub use matrix::{accepted_matrices, format_matrices, load_utility_matrices, parse_matrices, UtilityMatrix};
pub use report::{aggregate, aggregates_csv, results_csv, AggregateRow};
pub use sweep::{dominated_resources, run_instance, run_sweep, Forcing, Metrics, SweepConfig, SweepRecord, Variant};
pub use synth::synthesize_matrices;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("MalformedRow: instance '{instance}', row {row}: {detail}")]
    MalformedRow {
        instance: String,
        row: usize,
        detail: String,
    },
    #[error("RowSumNot1000: instance '{instance}', row {row} sums to {sum}")]
    RowSumNot1000 { instance: String, row: usize, sum: u64 },
    #[error("SameAgentSampled: agent {0} sampled twice")]
    SameAgentSampled(usize),
    #[error("AgentOutOfRange: instance '{instance}' has no agent {agent}")]
    AgentOutOfRange { instance: String, agent: usize },
    #[error("Instance: instance '{instance}': {detail}")]
    Instance { instance: String, detail: String },
    #[error("Solver: {0}")]
    Solver(String),
    #[error("EmptyInput: no records to aggregate")]
    EmptyInput,
    #[error("Io: {path}: {detail}")]
    Io { path: String, detail: String },
}
