//! Argument parsing, command dispatch and report output for the `noframe`
//! binary.

mod commands;
mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use commands::run_command;
pub use report::{emit_report, write_report, Report, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Subcommand)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Multiplicity table of the collective SU(2) action on n qubits.
    Decompose,
    /// Classical and quantum rates per qubit for 1..=max-n.
    Rates,
    /// Idempotence, trace and fixed-point residuals of both channels.
    TwirlCheck,
    /// Send every classical message through random frame mismatches.
    Classical,
    /// Round-trip fidelity of the DFS, noiseless-subsystem and dephasing codes.
    Quantum,
    /// Two-photon polarization protocol with a beam-splitter analyser.
    Optics,
    /// CHSH value of a logical Bell pair on two four-qubit blocks.
    Bell,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Decompose => "decompose",
            Command::Rates => "rates",
            Command::TwirlCheck => "twirl-check",
            Command::Classical => "classical",
            Command::Quantum => "quantum",
            Command::Optics => "optics",
            Command::Bell => "bell",
        }
    }

    fn default_n(self) -> usize {
        match self {
            Command::Decompose => 4,
            Command::Quantum => 3,
            Command::Bell => 8,
            _ => 2,
        }
    }

    /// Inclusive bounds on `--n`.
    fn n_range(self) -> (usize, usize) {
        match self {
            Command::Decompose => (1, 12),
            Command::TwirlCheck => (1, 8),
            Command::Classical => (1, noframe::protocols::classical::MAX_CODEBOOK_QUBITS),
            Command::Quantum => (2, noframe::protocols::encoding::MAX_SUBSYSTEM_QUBITS),
            Command::Bell => (8, 8),
            Command::Rates | Command::Optics => (0, usize::MAX),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "noframe", version, about = "Communication without a shared reference frame")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Number of qubits.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Largest n in the rate table.
    #[arg(long = "max-n", global = true, default_value_t = 64)]
    max_n: usize,
    #[arg(long, global = true, default_value_t = 1000)]
    trials: usize,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
    /// Write the report here instead of standard output.
    #[arg(long = "out-file", global = true)]
    out_file: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub max_n: usize,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub output: OutputFormat,
    pub out_file: Option<PathBuf>,
}

#[derive(Debug)]
pub enum ArgError {
    /// Help, version, or a syntax error; clap knows how to report it.
    Clap(clap::Error),
    /// Parsed, but a value is outside its allowed range.
    Invalid(String),
}

impl std::fmt::Display for ArgError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ArgError::Clap(e) => write!(f, "{e}"),
            ArgError::Invalid(msg) => write!(f, "error: {msg}"),
        }
    }
}

/// Parses `argv` (program name first).
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, ArgError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(ArgError::Clap)?;
    let command = cli.command;
    let n = cli.n.unwrap_or(command.default_n());
    let (lo, hi) = command.n_range();
    if n < lo || n > hi {
        return Err(ArgError::Invalid(format!(
            "--n {n} is out of range for {} (allowed {lo}..={hi})",
            command.name()
        )));
    }
    let max_rate = noframe::protocols::rates::MAX_RATE_QUBITS;
    if cli.max_n == 0 || cli.max_n > max_rate {
        return Err(ArgError::Invalid(format!(
            "--max-n {} is out of range (allowed 1..={max_rate})",
            cli.max_n
        )));
    }
    if cli.trials == 0 {
        return Err(ArgError::Invalid("--trials must be at least 1".into()));
    }
    if !(cli.tolerance > 0.0) || !cli.tolerance.is_finite() {
        return Err(ArgError::Invalid(format!(
            "--tolerance must be a positive number, got {}",
            cli.tolerance
        )));
    }
    Ok(RunConfig {
        command,
        n,
        max_n: cli.max_n,
        trials: cli.trials,
        seed: cli.seed,
        tolerance: cli.tolerance,
        output: cli.output,
        out_file: cli.out_file,
    })
}
