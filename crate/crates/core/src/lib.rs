//! Adjusted Winner allocations without splitting, for two agents who may
//! also sell resources under a budget and share the revenue.
//!
//! The crate provides the instance and plan model ([`Instance`], [`Plan`],
//! [`welfare`]), the classic and split-free Adjusted Winner procedures
//! ([`aw`]), brute-force exact solvers ([`exact`]) and a fully polynomial
//! approximation scheme for the welfare-ratio objective ([`fptas`]).

pub mod aw;
pub mod exact;
pub mod fixtures;
pub mod fptas;
pub mod instance;
pub mod plan;
pub mod rational;
pub mod result;
pub mod score;
pub mod set;

pub use aw::{aw_derived_plan, aw_subplan, classic_aw, AwContext, HaltReason, RatioOrder};
pub use exact::{oracle_best_plan, solve_awns_exact, ExactError, Objective, OracleCriterion, OracleOutcome, QMode};
pub use fptas::{fptas_awns_rho, fptas_awns_rho_with, fptas_sweep, FptasError, FptasOptions, FptasOutcome};
pub use instance::{validate_instance, Agent, Budget, Cost, Instance, InstanceError, Resource};
pub use plan::{envy, pareto_filter, revenue_share, welfare, Plan, PlanError, PlanJson, Rho, WelfareReport};
pub use result::{SolveResult, SolveResultJson, Solver};
pub use set::ResourceSet;
