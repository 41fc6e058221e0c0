//! Experiment runner: configuration, dispatch and report files.
//!
//! A run reads a JSON configuration, executes one subcommand and writes
//! `<subcommand>.csv` (the table) and `<subcommand>.json` (an envelope with
//! the validated config and summary values). Every stochastic step draws
//! from a stream derived from the master seed and a fixed task label, so
//! reports are byte-identical for a given `(config, seed)` whatever the
//! worker count.

mod config;
mod run;

pub use config::{
    parse_config, parse_config_for, DirectionPreset, DirectionSpec, DistanceParams, DivergenceParams,
    ExperimentConfig, IdentifyCheck, IdentifyParams, LeCamCase, MinimaxParams, PosteriorParams, ProbeParams,
    Subcommand, Task, WitnessParams,
};
pub use run::{execute, exit_code, run, Report, RunOutput};
