//! Command-line driver: configuration, experiments and CSV output.

pub mod commands;
pub mod config;
pub mod output;
pub mod stats;

use std::io::Write;

use clap::{Parser, Subcommand};

pub use commands::{
    cmd_entanglement, cmd_evolve, cmd_grover, cmd_scaling, cmd_spectrum, cmd_sweep,
};
pub use config::{ExperimentConfig, Flags, InitialSpec, ScheduleChoice};
pub use output::{format_sci, Cell, Table};

use crate::error::Error;

#[derive(Debug, Parser)]
#[command(name = "adiasearch", version, about = "Adiabatic quantum search simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Instantaneous spectrum, gap and adiabatic matrix element along s.
    Spectrum(Flags),
    /// Ground-state concurrence and entropy of entanglement along s.
    Entanglement(Flags),
    /// Entanglement, minimum gap and runtime over a family of initial states.
    Sweep(Flags),
    /// Minimum runtime against problem size for both schedules.
    Scaling(Flags),
    /// Success probability of discrete Grover iteration.
    Grover(Flags),
    /// Full Schrödinger propagation with fidelity diagnostics.
    Evolve(Flags),
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical contract violated: {0}")]
    Numeric(String),
}

impl CliError {
    /// 2 for configuration errors, 3 for numerical-contract violations.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::GapTooSmall { .. } | Error::StepTooCoarse(_) | Error::NoConvergence => {
                CliError::Numeric(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl Command {
    pub fn flags(&self) -> &Flags {
        match self {
            Command::Spectrum(f)
            | Command::Entanglement(f)
            | Command::Sweep(f)
            | Command::Scaling(f)
            | Command::Grover(f)
            | Command::Evolve(f) => f,
        }
    }
}

/// Runs one subcommand and returns its table.
pub fn execute(command: &Command) -> Result<Table, CliError> {
    let cfg = ExperimentConfig::from_flags(command.flags())?;
    match command {
        Command::Spectrum(_) => cmd_spectrum(&cfg),
        Command::Entanglement(_) => cmd_entanglement(&cfg),
        Command::Sweep(_) => cmd_sweep(&cfg),
        Command::Scaling(_) => cmd_scaling(&cfg),
        Command::Grover(_) => cmd_grover(&cfg),
        Command::Evolve(_) => cmd_evolve(&cfg),
    }
}

/// Runs `cli` and writes the CSV to `--out` or stdout.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let csv = execute(&cli.command)?.to_csv();
    match &cli.command.flags().out {
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(csv.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Config(format!("cannot write output: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        let numeric = [
            Error::GapTooSmall { s: 0.5, gap: 0.0 },
            Error::StepTooCoarse(1e-3),
            Error::NoConvergence,
        ];
        for e in numeric {
            assert_eq!(CliError::from(e).exit_code(), 3);
        }
        let config = [
            Error::MarkedOutOfRange { marked: 9, n: 2 },
            Error::ZeroOverlap,
            Error::InvalidParameter("epsilon".into()),
        ];
        for e in config {
            assert_eq!(CliError::from(e).exit_code(), 2);
        }
    }

    #[test]
    fn parses_subcommands() {
        let cli = Cli::try_parse_from(["adiasearch", "grover", "--n", "3", "--k-max", "4"]).unwrap();
        assert!(matches!(cli.command, Command::Grover(_)));
        assert_eq!(cli.command.flags().n, Some(3));
        assert!(Cli::try_parse_from(["adiasearch", "grover", "--bogus"]).is_err());
    }
}
