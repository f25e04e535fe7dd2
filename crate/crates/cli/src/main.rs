//! `pov`: run Propose-or-Vote scenarios from JSON configs.
//!
//! Exit status is 0 on success, 2 for invalid input and 3 when an instance
//! exceeds the enumeration limits.

mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pov_core::Rational;

use config::{CliError, Overrides, Scenario, ScenarioConfig, Variant};
use report::{render_csv, render_json, Report};

#[derive(Parser)]
#[command(name = "pov", version, about = "Certify, enumerate and sample Propose-or-Vote scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the configured profile, or the median profile if none is given.
    Verify(Common),
    /// List every certified equilibrium up to the proposer limit.
    Enumerate(Common),
    /// Enumerate under elimination semantics and check uniqueness of the median equilibrium.
    Tournament(Common),
    /// Scan every election profile for equilibria.
    Election(Common),
    /// Draw realisations of the baseline procedure.
    Sample {
        #[command(flatten)]
        common: Common,
        /// Number of draws.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

#[derive(clap::Args)]
struct Common {
    /// Scenario JSON file.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Proposal grid spacing, e.g. `1/10`.
    #[arg(long, value_name = "R")]
    grid_step: Option<Rational>,
    /// Offset around critical deviation points, e.g. `0.001`.
    #[arg(long, value_name = "R")]
    epsilon: Option<Rational>,
    #[arg(long, value_name = "N")]
    max_proposers: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Common {
    fn scenario(&self, force: Option<Variant>) -> Result<Scenario, CliError> {
        let mut config = ScenarioConfig::load(&self.config)?;
        if let Some(variant) = force {
            config.variant = variant;
        }
        let overrides = Overrides {
            seed: self.seed,
            grid_step: self.grid_step,
            epsilon: self.epsilon,
            max_proposers: self.max_proposers,
        };
        Scenario::resolve(config, &overrides)
    }

    fn emit<R: Report>(&self, report: &R) -> Result<(), CliError> {
        let text = match self.format {
            Format::Json => render_json(report)?,
            Format::Csv => render_csv(report)?,
        };
        match &self.out {
            Some(path) => {
                std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
            }
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Verify(c) => c.emit(&report::verify(&c.scenario(None)?)?),
        Command::Enumerate(c) => c.emit(&report::enumerate(&c.scenario(None)?)?),
        Command::Tournament(c) => c.emit(&report::tournament(&c.scenario(Some(Variant::Tournament))?)?),
        Command::Election(c) => c.emit(&report::enumerate(&c.scenario(Some(Variant::Election))?)?),
        Command::Sample { common, samples } => common.emit(&report::sample(&common.scenario(None)?, samples)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pov: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
