//! `compoundkit` command-line front end.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

mod commands;
mod input;
mod report;

use report::{Format, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Analysis(#[from] compoundkit::Error),
}

#[derive(Parser, Debug)]
#[command(name = "compoundkit", version, about = "Compound-matrix analysis of matrices and dynamical systems")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Multiplicative, additive or α-compound of a matrix, with index-set labels.
    Compound(commands::CompoundArgs),
    /// Sign regularity, total positivity, Metzler patterns, Jacobi and cyclic structure.
    Classify(commands::ClassifyArgs),
    /// Sampled matrix-measure test for k- or α-contraction.
    Contract(commands::ContractArgs),
    /// Integrate a system, a frame of solutions, or a parallelotope volume.
    Simulate(commands::SimulateArgs),
    /// k-diagonal stability: verify a certificate or construct one.
    Diagstab(commands::DiagstabArgs),
    /// Hankel k-positivity of a realization or an impulse-response sequence.
    Hankel(commands::HankelArgs),
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Compound(a) => commands::compound(a),
        Command::Classify(a) => commands::classify(a, cli.seed),
        Command::Contract(a) => commands::contract(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Diagstab(a) => commands::diagstab(a),
        Command::Hankel(a) => commands::hankel(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = report.render(cli.format);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    // kept off stdout so reports stay byte-identical between runs
    eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    match report.outcome() {
        Some(false) => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}
