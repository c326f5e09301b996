//! Config-driven Monte Carlo experiments, reports and the command line.

pub mod cli;
pub mod config;
pub mod experiments;
pub mod report;

pub use config::{ExperimentConfig, ExperimentKind};
pub use experiments::{run, run_infinite_order, run_m1_counterexample, run_marginal_convergence, run_negligibility};
pub use report::{Check, ExperimentReport, RawSample, Row};
