//! Run configuration, experiment presets and the workflows behind each
//! command-line command.

pub mod commands;
pub mod config;
pub mod preset;

pub use commands::{
    run_forward, run_invert, run_observability, run_preset, run_spectrum, RunSummary,
};
pub use config::RunConfig;
pub use preset::{presets, Preset, RowSpec, TableRow};
