//! Experiment harness for the sparsketch library: configs, runners for each
//! experiment id, report emission and the deterministic acceptance checks.

pub mod acceptance;
pub mod checks;
pub mod config;
pub mod experiments;
pub mod probes;
pub mod report;
pub mod sizing;

pub use config::{ExperimentConfig, ExperimentId};
pub use experiments::run_experiment;
pub use report::{emit_report, ExperimentReport, Format};
