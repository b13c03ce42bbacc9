//! Experiment runner for compressed generalized weighted composition
//! operators: configuration, single runs, grid scans and report rendering.
//! The `gwc` binary is a thin wrapper around this crate.

pub mod complex;
pub mod config;
pub mod error;
pub mod report;
pub mod scan;

pub use config::{ExperimentConfig, RawConfig};
pub use error::CliError;
pub use report::{run_experiment, ExperimentReport};
pub use scan::{scan_grid, ScanAxis, ScanResult};
