//! Experiment harness for approximation-by-pruning of QUBO encodings.
//!
//! An experiment loads one problem instance, prunes its QUBO at every step
//! of a `p` schedule, samples each pruned QUBO with simulated annealing,
//! scores the samples on the original instance and measures embedding
//! footprints. Results go to CSV tables (with the full config on the first
//! line) and two-panel SVG plots.

pub mod config;
pub mod error;
pub mod experiment;
pub mod io;
pub mod output;
pub mod plot;
pub mod stats;

pub use config::{ChimeraDims, ExperimentConfig, SamplerConfig};
pub use error::{HarnessError, Result};
pub use experiment::{compare_strategies, run_experiment, sweep_effort, ResultRow, Table};
pub use output::{emit_csv, read_csv};
pub use plot::emit_plot;
