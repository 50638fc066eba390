//! Command-line front end: configuration parsing, batch experiments and plots.

pub mod commands;
pub mod config;
pub mod plot;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use qsync_core::EntropyUnit;
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("cannot write output: {0}")]
    Output(String),
    #[error("numerical failure at {point}: {source}")]
    Numerical { point: String, source: qsync_core::Error },
}

impl CliError {
    /// 1 for configuration problems (including an unwritable output directory), 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output(_) => 1,
            CliError::Numerical { .. } => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitArg {
    Bits,
    Nats,
}

impl From<UnitArg> for EntropyUnit {
    fn from(u: UnitArg) -> Self {
        match u {
            UnitArg::Bits => EntropyUnit::Bits,
            UnitArg::Nats => EntropyUnit::Nats,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qsync", version, about = "Synchronization and correlations of two qubits in correlated baths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// INI-style configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides [output] dir).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub unit: Option<UnitArg>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trajectories of ⟨σz⟩ for each configured ξ.
    Evolve,
    /// Phase difference and PLV across the ξ grid.
    SyncSweep,
    /// Steady-state mutual information and degree of quantumness over (ξ, γ, J).
    InfoSweep,
    /// Discord of random fixed-rank states.
    DiscordBench {
        #[arg(long)]
        n_states: Option<usize>,
        /// Comma-separated ranks, e.g. `1,2,3,4`.
        #[arg(long, value_delimiter = ',')]
        ranks: Option<Vec<usize>>,
    },
}

/// Loads the config file (or defaults) and applies command-line overrides.
pub fn resolve_config(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(unit) = cli.unit {
        cfg.unit = unit.into();
    }
    if let Command::DiscordBench { n_states, ranks } = &cli.command {
        if let Some(n) = n_states {
            cfg.n_states = *n;
        }
        if let Some(r) = ranks {
            cfg.ranks = r.clone();
        }
    }
    Ok(cfg)
}

pub fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let cfg = resolve_config(cli)?;
    match cli.command {
        Command::Evolve => commands::cmd_evolve(&cfg),
        Command::SyncSweep => commands::cmd_sync_sweep(&cfg),
        Command::InfoSweep => commands::cmd_info_sweep(&cfg),
        Command::DiscordBench { .. } => commands::cmd_discord_bench(&cfg),
    }
}
