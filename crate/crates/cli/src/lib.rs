//! Configuration, orchestration and reproducible output for the
//! `strip-boussinesq` experiments.

pub mod config;
pub mod runner;

pub use config::{load, parse_config, to_toml, ConfigError, Experiment, ExperimentConfig, LoadedConfig};
pub use runner::{run, RunError, RunOutcome};
