//! Batch front end: scenario documents in, reports and plot-ready tables out.

pub mod export;
pub mod report;
pub mod scenario;
pub mod suites;

use std::path::PathBuf;

pub use report::{Check, Report, Table};
pub use scenario::{Scenario, SuiteKind};
pub use suites::{run, Outcome, Verb};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 2 for configuration and I/O problems.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// 0 when every check passed, 1 otherwise.
pub fn exit_code(report: &Report) -> i32 {
    if report.passed {
        0
    } else {
        1
    }
}
