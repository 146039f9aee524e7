//! Parameter sweeps, verification runs and Table-style summaries for the
//! `isoenergy` models, with deterministic CSV and JSON output.

pub mod commands;
pub mod config;
pub mod error;
pub mod rows;

pub use config::ExperimentConfig;
pub use error::CliError;
