//! kerrline: normal modes, Kerr couplings and dynamics of Josephson-embedded
//! transmission-line resonators, from JSON configs to CSV/JSON artifacts.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "kerrline", version, about = "Josephson-embedded resonator modes, couplings and dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Circuit config (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output directory for artifacts.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,

    /// Dotted-path override, e.g. `junction.d=0.1` (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,

    /// Number of modes.
    #[arg(long, global = true, value_name = "M")]
    pub modes: Option<usize>,

    /// Points per sweep axis (or envelope samples for `spectrum`).
    #[arg(long, global = true, value_name = "N")]
    pub grid: Option<usize>,

    /// Fock-space truncation for dynamics.
    #[arg(long, global = true, value_name = "N")]
    pub fock: Option<usize>,

    /// Worker threads; falls back to KERRLINE_THREADS.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check a config and print derived constants.
    Validate,
    /// Modes, envelopes and lumped properties at one flux.
    Spectrum,
    /// Frequencies, Kerr and pump couplings against flux.
    SweepFlux,
    /// Frequencies and Kerr against junction position (and E_J).
    SweepPosition,
    /// First mode against total line length, compared with a lumped transmon.
    SweepLength,
    /// Converter couplings and detunings at an operating point.
    Jpc,
    /// Driven Kerr mode line cuts.
    Blockade,
    /// Flux-pulsed cat-state preparation.
    Cat,
    /// Avoided crossing of a junction near the line end.
    Ultrastrong,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Spectrum => "spectrum",
            Command::SweepFlux => "sweep-flux",
            Command::SweepPosition => "sweep-position",
            Command::SweepLength => "sweep-length",
            Command::Jpc => "jpc",
            Command::Blockade => "blockade",
            Command::Cat => "cat",
            Command::Ultrastrong => "ultrastrong",
        }
    }
}

fn thread_count(cli: &Cli) -> Result<Option<usize>, CliError> {
    if let Some(n) = cli.threads {
        return Ok(Some(n));
    }
    match std::env::var("KERRLINE_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::usage(format!("KERRLINE_THREADS must be a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = thread_count(cli)? {
        if n == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    }
    commands::dispatch(cli)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
