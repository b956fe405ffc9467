//! `kitaev` command-line front end.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod presets;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use kitaev_core::CheckConfig;

use config::{CheckArgs, CommandName, Overrides, RunConfig};
use error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "kitaev", version, about = "Exact dynamics and entanglement of short Kitaev chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Even- and odd-parity levels along an ε axis
    Spectrum(RunArgs),
    /// Time traces at fixed parameters
    Evolve(RunArgs),
    /// (ε, t) maps, the max-C13 (ε, Δ) map, or any preset
    Sweep(RunArgs),
    /// Run the numerical invariant suite
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub params: Overrides,
    /// Flat `section.key = value` file; flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl RunArgs {
    pub fn resolve(&self, command: CommandName) -> CliResult<RunConfig> {
        let file = match &self.config {
            Some(p) => Overrides::load(p)?,
            None => Overrides::default(),
        };
        RunConfig::resolve(command, &file.overlay(self.params.clone()))
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    let (args, name) = match &cli.command {
        Command::Spectrum(a) => (a, CommandName::Spectrum),
        Command::Evolve(a) => (a, CommandName::Evolve),
        Command::Sweep(a) => (a, CommandName::Sweep),
        Command::Check(c) => {
            let out = commands::open_output(c.out.as_deref())?;
            return commands::check(
                &CheckConfig {
                    samples: c.samples,
                    seed: c.seed,
                },
                out,
            );
        }
    };
    commands::execute(&args.resolve(name)?)
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
