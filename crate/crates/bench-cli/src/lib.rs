//! Experiment driver for the distance sensitivity oracle: configuration,
//! query workloads, campaigns and their reports.

mod campaign;
mod config;

pub use campaign::{
    generate_workload, oracle_digest, report_for, run_campaign, run_queries, run_query, summarize, write_csv, Query,
    QueryRecord, Report, Summary, Timings,
};
pub use config::{ExperimentConfig, GraphSource, GraphSpec, OracleSpec, Thresholds, Workload};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Graph(#[from] graph_core::GraphError),
    #[error(transparent)]
    Oracle(#[from] dso::DsoError),
}

impl CliError {
    /// Process exit code: 3 for an exceeded budget, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Oracle(dso::DsoError::BudgetExceeded { .. }) => 3,
            _ => 1,
        }
    }
}

impl From<graph_core::envelope::EnvelopeError> for CliError {
    fn from(e: graph_core::envelope::EnvelopeError) -> Self {
        CliError::Oracle(dso::DsoError::Format(e))
    }
}

/// Exit code for a finished campaign: 2 when a threshold is violated.
pub fn verdict(summary: &Summary, thresholds: &Thresholds) -> i32 {
    if summary.soundness_violations > 0 || summary.stretch_violation_rate > thresholds.max_stretch_violation_rate {
        2
    } else {
        0
    }
}
