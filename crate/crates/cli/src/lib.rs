//! Benchmark harness for the tile-based reduction model: runs the
//! reduction strategies over seeded input grids, validates simulated
//! ledgers against closed-form step predictions, measures precision loss
//! against the exact oracle, and emits machine-readable reports.

pub mod config;
pub mod dist;
pub mod experiment;
pub mod report;

pub use config::{ConfigError, Distribution, ExperimentConfig, Mode, OutputFormat, Policy};
pub use experiment::{precision_sweep, run_experiment};
pub use report::{check_report, emit_report, Algorithm, ExperimentReport, ReportRow};
