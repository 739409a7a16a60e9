//! `qdesign` command-line tool. Results go to stdout as one JSON document (CSV
//! for `ame region`); diagnostics go to stderr.
//!
//! Exit codes: 0 when the computation completed (a negative verdict included),
//! 2 for malformed input or flags, 3 for numerical failure.

mod ame;
mod avg;
mod birkhoff;
mod gates;
mod sudoq;
mod util;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use util::CliError;

#[derive(Debug, Parser)]
#[command(name = "qdesign", version, about = "Unistochastic matrices, entangling power, 2-unitary searches and SudoQ designs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gate functionals e_p, g_t, s_e and the derivatives of e_p.
    #[command(subcommand)]
    Gates(gates::GatesCmd),
    /// Families, iterations and searches for 2-unitary matrices of order 36.
    #[command(subcommand)]
    Ame(ame::AmeCmd),
    /// Bracelet test, unistochasticity decisions and Hadamard-based constructions.
    #[command(subcommand)]
    Birkhoff(birkhoff::BirkhoffCmd),
    /// Haar averages of multipartite entangling power.
    #[command(subcommand)]
    Avg(avg::AvgCmd),
    /// Quantum Sudoku verification, cardinality and constructions.
    #[command(subcommand)]
    Sudoq(sudoq::SudoqCmd),
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gates(c) => gates::run(c),
        Command::Ame(c) => ame::run(c),
        Command::Birkhoff(c) => birkhoff::run(c),
        Command::Avg(c) => avg::run(c),
        Command::Sudoq(c) => sudoq::run(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // Collapse clap's report (up to the usage block) onto one line.
            let text = e.to_string();
            let reason: Vec<&str> = text
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:"))
                .filter(|l| !l.is_empty() && !l.starts_with("For more information"))
                .collect();
            eprintln!("{}", reason.join(" "));
            return ExitCode::from(2);
        }
    };
    match qdesign::parallel::install(|| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
