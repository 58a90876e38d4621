//! Seeded multi-trial experiments over the classical and variational
//! solvers, with success-rate, feasibility, uncertainty and timing metrics.

pub mod cli;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentOutcome};
pub use metrics::{
    average_times, format_percent, success_rates, summarize, uncertainty_stats, MetricsSummary,
};
pub use report::{emit_report, ReportFormat};
