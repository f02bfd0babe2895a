//! `spmat`: exact disjoint-pair counts for S-permutation matrices.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage, 3 resource guard,
//! 4 verification failure.

mod commands;
mod record;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use record::Quantity;

#[derive(Parser, Debug)]
#[command(name = "spmat", version, about = "Exact counts of disjoint S-permutation matrix pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Worker threads for the class enumeration.
    #[arg(long, env = "SPMAT_WORKERS")]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Allow n above the default guard of 6.
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute one quantity for one n.
    Compute {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        quantity: Quantity,
        /// Weight for `--quantity q`.
        #[arg(long)]
        k: Option<usize>,
        /// Significant digits for `--quantity p` (round half to even).
        #[arg(long)]
        digits: Option<usize>,
        /// Render p as the shortest form of the nearest double instead.
        #[arg(long, conflicts_with = "digits")]
        float: bool,
        /// Resume from and save progress to this file.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate xi, eta and p for n = 2..=max-n.
    Table {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        digits: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Check the engine against the golden table, the brute-force oracle and
    /// the closed-form identities.
    Verify {
        #[arg(long)]
        max_n: usize,
        /// Golden table to check against instead of the built-in one.
        #[arg(long)]
        golden: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Print seeded random S-permutation matrices.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report how many consecutive pairs (1,2), (3,4), ... are disjoint;
        /// pairs of two equal matrices are skipped.
        #[arg(long)]
        check_disjoint: bool,
        /// Omit the matrices themselves.
        #[arg(long)]
        summary_only: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Brute-force counts for n <= 3.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
