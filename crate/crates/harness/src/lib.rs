//! Experiment harness for the QAOA MaxCut workbench: JSON configs, single
//! runs, sweeps, artifact files, SVG plots and the `qaoa` CLI.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod plot;
pub mod sweep;

pub use config::{ExperimentConfig, SweepConfig};
pub use error::{HarnessError, Result};
pub use experiment::{run_experiment, RunArtifacts, Summary};
pub use sweep::{run_sweep, SweepRow};
