//! Command-line front end for `pctc`.

pub mod format;
pub mod run;
pub mod table;
pub mod verify;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pctc_core::otoc::{otoc_average_exact, otoc_average_sampled, state_design_average};
use pctc_core::scramblers::ScramblerSpec;

pub use run::{Mode, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "pctc", version, about = "Postselected-teleportation decoding of scrambled qubits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decode states and write a results table (CSV) plus a JSON sidecar.
    Run(RunArgs),
    /// Average out-of-time-order correlator of a scrambler.
    Otoc(OtocArgs),
    /// Run the invariant battery.
    Verify,
    /// Ideal values next to the reported hardware numbers.
    Table(TableArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// `uq`, `uc` or `haar:SEED`.
    #[arg(long, default_value = "uq")]
    pub scrambler: String,
    /// `all`, or a comma-separated list of labels (`x+`, `z-`, ...) and `theta:phi` pairs.
    #[arg(long, default_value = "all", allow_hyphen_values = true)]
    pub states: String,
    #[arg(long, value_enum, default_value_t = Mode::Analytic)]
    pub mode: Mode,
    /// Shots per tomography basis.
    #[arg(long, default_value_t = 4000)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON noise file with keys p1, p2, readout_eps.
    #[arg(long)]
    pub noise: Option<PathBuf>,
    /// CSV destination; the sidecar goes next to it with a `.json` extension.
    /// Without it the CSV is printed.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Re-run the configuration echoed in a JSON sidecar; other run flags are ignored.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OtocArgs {
    #[arg(long, default_value = "uq")]
    pub scrambler: String,
    /// Haar samples; 0 computes the exact average.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Main,
    Supp,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_enum, default_value_t = Which::Main)]
    pub which: Which,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or arguments (exit 2).
    Usage(String),
    /// Statistics or verification failure (exit 1).
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("i/o error: {e}"))
    }
}

pub fn scrambler(name: &str) -> Result<ScramblerSpec, CliError> {
    ScramblerSpec::from_name(name).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => run::cmd_run(&args, out),
        Command::Otoc(args) => cmd_otoc(&args, out),
        Command::Verify => verify::cmd_verify(out),
        Command::Table(args) => {
            out.write_all(table::render(args.which).as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_otoc(args: &OtocArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let u = scrambler(&args.scrambler)?;
    let fail = |e: pctc_core::Error| CliError::Failure(e.to_string());
    writeln!(out, "scrambler: {}", u.name())?;
    if args.samples == 0 {
        let exact = otoc_average_exact(&u).map_err(fail)?;
        writeln!(out, "O_avg (exact): {}", format::sig(exact))?;
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let rep = otoc_average_sampled(&u, args.samples, &mut rng).map_err(|e| CliError::Usage(e.to_string()))?;
        writeln!(
            out,
            "O_avg (sampled, n={}): {} +/- {}",
            args.samples,
            format::sig(rep.average()),
            format::sig(rep.standard_error.unwrap_or(0.0))
        )?;
    }
    writeln!(out, "six-state average P: {}", format::sig(state_design_average(&u).map_err(fail)?))?;
    Ok(())
}
