//! Command-line front end: each subcommand maps onto one part of the library
//! (splitting tables, population series, basis decomposition, pseudospin
//! switching, decay recovery, dephasing) and emits CSV or JSON for external
//! plotting.  Exit code 0 means every internal residual check passed.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    decay::DecayArgs, decompose::DecomposeArgs, dephasing::DephasingArgs,
    populations::PopulationsArgs, splittings::SplittingsArgs, switch::SwitchArgs, OutputSink,
};

#[derive(Parser)]
#[command(
    name = "pseudospin",
    about = "Simulator for identical qubits resonantly coupled to one bosonic mode",
    version
)]
struct Cli {
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,

    /// Output format.
    #[arg(long, global = true, default_value = "csv")]
    format: commands::Format,

    /// JSON file with the subcommand's parameters; takes precedence over the
    /// corresponding flags.
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rabi splitting spectra: analytic vs numeric, with large-n fit residuals.
    Splittings(SplittingsArgs),
    /// Population time series on a ladder sector or in the full product space.
    Populations(PopulationsArgs),
    /// Multiplet basis construction and block-diagonalization report.
    Decompose(DecomposeArgs),
    /// Pseudospin switching: solutions, circuits and the end-to-end protocol.
    Switch(SwitchArgs),
    /// Single-qubit decay recovery tree (and spectroscopy of decayed states).
    Decay(DecayArgs),
    /// Dephasing: closed form vs numerics, steady state, characteristic roots.
    Dephasing(DephasingArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let sink = OutputSink {
        path: cli.output.clone(),
        format: cli.format,
    };
    let result = match cli.command {
        Command::Splittings(args) => commands::splittings::run(args, &cli.config, &sink),
        Command::Populations(args) => commands::populations::run(args, &cli.config, &sink),
        Command::Decompose(args) => commands::decompose::run(args, &cli.config, &sink),
        Command::Switch(args) => commands::switch::run(args, &cli.config, &sink),
        Command::Decay(args) => commands::decay::run(args, &cli.config, &sink),
        Command::Dephasing(args) => commands::dephasing::run(args, &cli.config, &sink),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
