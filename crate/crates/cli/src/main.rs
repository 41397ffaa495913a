//! `bnsi`: validate, solve, bound, construct and simulate linear encoders
//! for broadcasting with noisy side information.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Exit status for command-line usage errors.
const EXIT_USAGE: u8 = 64;
/// Exit status for malformed problem, matrix or vector input.
const EXIT_DATA: u8 = 65;
/// Exit status when a search guard stops the computation.
const EXIT_GUARD: u8 = 3;

#[derive(Parser)]
#[command(name = "bnsi", version, about = "Linear coding for broadcasting with noisy side information")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// JSON.
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an encoder matrix is valid (exit 0 valid, 2 invalid).
    Validate {
        /// Problem file or built-in problem name.
        #[arg(long)]
        problem: String,
        /// Matrix file or built-in matrix name.
        #[arg(long)]
        matrix: String,
        #[arg(long, value_enum, default_value_t = ValidateMethod::Both)]
        method: ValidateMethod,
    },
    /// Compute the optimal codelength exactly.
    Solve {
        #[arg(long)]
        problem: String,
        #[arg(long, value_enum, default_value_t = SolveMethod::Subspace)]
        method: SolveMethod,
        /// Largest codelength tried by the exhaustive method (default n).
        #[arg(long)]
        n_max: Option<usize>,
        /// Write the optimal encoder here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report every lower and upper bound on the optimal codelength.
    Bounds {
        #[arg(long)]
        problem: String,
        /// Also compute the exact optimum.
        #[arg(long)]
        oracle: bool,
    },
    /// Build an encoder with one of the constructions.
    Construct {
        #[arg(long)]
        problem: String,
        #[arg(long, value_enum)]
        scheme: Scheme,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structure of the problem: Phi emptiness, C_max, B_max, disjoint collection.
    Analyze {
        #[arg(long)]
        problem: String,
    },
    /// Decode one user's demand from a codeword and noisy side information.
    Decode {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        matrix: String,
        /// 1-based user index.
        #[arg(long)]
        user: usize,
        /// Comma-separated codeword symbols.
        #[arg(long)]
        codeword: String,
        /// Comma-separated noisy copy of the user's demand.
        #[arg(long)]
        sideinfo: String,
        /// Also print the parity check and syndrome table.
        #[arg(long)]
        show_table: bool,
    },
    /// Reduce to an index-coding problem.
    Reduce {
        #[arg(long)]
        problem: String,
        /// Write the index-coding problem here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run broadcast rounds with random messages and side-information errors.
    Simulate {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Give every user delta_s + 1 errors and count the failures.
        #[arg(long)]
        fault_injection: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ValidateMethod {
    Enum,
    Rank,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveMethod {
    Subspace,
    Exhaustive,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    Simple,
    Mds,
    Disjoint,
    MdsDisjoint,
    Partition,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli.command) {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{}", report.text),
                Format::Structured => {
                    println!("{}", serde_json::to_string_pretty(&report.json).expect("reports serialize"))
                }
            }
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    use bnsi_core::Error as E;
    if e.downcast_ref::<input::UsageError>().is_some() {
        return EXIT_USAGE;
    }
    if e.downcast_ref::<input::InputError>().is_some() {
        return EXIT_DATA;
    }
    match e.downcast_ref::<E>() {
        Some(err) if err.is_guard() => EXIT_GUARD,
        Some(E::Parse { .. } | E::InvalidProblem(_) | E::UnsupportedField(_) | E::DimensionMismatch(_)) => EXIT_DATA,
        _ => 1,
    }
}
