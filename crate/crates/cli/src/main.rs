//! `lab`: command-line front end of the mixprod experiment runner.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use mixprod::lab::{exit_code, parse_config_for, run, Subcommand};
use mixprod::Error;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    Distance,
    Divergence,
    Identify,
    Witness,
    Probe,
    Minimax,
    PosteriorSim,
}

impl From<Command> for Subcommand {
    fn from(c: Command) -> Self {
        match c {
            Command::Distance => Subcommand::Distance,
            Command::Divergence => Subcommand::Divergence,
            Command::Identify => Subcommand::Identify,
            Command::Witness => Subcommand::Witness,
            Command::Probe => Subcommand::Probe,
            Command::Minimax => Subcommand::Minimax,
            Command::PosteriorSim => Subcommand::PosteriorSim,
        }
    }
}

/// Run one experiment and write `<subcommand>.csv` and `<subcommand>.json`.
#[derive(Debug, Parser)]
#[command(name = "lab", version)]
struct Cli {
    #[arg(value_enum)]
    subcommand: Command,
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Master seed; replaces the `seed` field of the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (results do not depend on it).
    #[arg(long, env = "LAB_WORKERS")]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn load(cli: &Cli) -> mixprod::Result<mixprod::lab::ExperimentConfig> {
    let text = std::fs::read_to_string(&cli.config)?;
    let text = match cli.seed {
        Some(seed) => {
            let mut v: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Error::Schema { path: ".".into(), message: e.to_string() })?;
            if let Some(obj) = v.as_object_mut() {
                obj.insert("seed".into(), seed.into());
            }
            v.to_string()
        }
        None => text,
    };
    let mut config = parse_config_for(&text, Some(cli.subcommand.into()))?;
    if cli.workers.is_some() {
        config.workers = cli.workers;
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load(&cli).and_then(|config| run(&config, &cli.out));
    let code = exit_code(&result);
    match result {
        Ok(out) => {
            println!("{}", out.csv.display());
            println!("{}", out.json.display());
        }
        Err(e) => {
            let line = serde_json::json!({"status": "error", "kind": e.kind(), "message": e.to_string()});
            eprintln!("{line}");
        }
    }
    ExitCode::from(code as u8)
}
