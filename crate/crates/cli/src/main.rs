//! `gscaffold`: build towers, verify scaffolds, evaluate freeness criteria.

mod commands;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "gscaffold",
    version,
    about = "Galois scaffolds for elementary abelian towers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON (or CSV) report here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Break conversions, assumptions, tolerances and verdicts for a profile file.
    Analyze { input: PathBuf },
    /// Build a tower from a spec file and run its structural checks.
    Build { input: PathBuf },
    /// Verify the scaffold of a tower spec file.
    Scaffold {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Finite tolerance for `--mode tolerance`; infinite when omitted.
        #[arg(long)]
        tolerance: Option<i64>,
    },
    /// Evaluate one freeness criterion.
    Freeness {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        b1: Option<i64>,
        #[arg(long)]
        b2: Option<i64>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        h: i64,
        #[arg(long)]
        u: Option<i64>,
        /// `v_0(p)` as a positive integer or `inf`.
        #[arg(long, default_value = "inf")]
        v0p: String,
    },
    /// Hopf order parameters (`{"p", "vkp", "M"}`) or a tower spec with breaks ≡ -1 mod p^n.
    Hopf {
        input: PathBuf,
        /// Require the extra divisibility conditions; overrides the file, default true.
        #[arg(long)]
        strict: Option<bool>,
    },
    /// Grids and randomized batches, written as CSV.
    Sweep {
        #[arg(long, value_enum)]
        family: SweepFamily,
        /// Largest `v_0(2)` in the biquadratic grids.
        #[arg(long, default_value_t = 8)]
        v_max: i64,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 25)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; results are ordered the same for any value.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Tolerance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Martel,
    Biquadratic,
    WeakIdeal,
    Abrashkin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepFamily {
    /// The eight `(b, h, L_1, L_2)` rows.
    Biquadratic,
    /// Verdicts `(b_1, b_2, h, v_0(2), verdict)` over a grid.
    BiquadraticGrid,
    /// Martel inequality against the table at `h = 0`.
    MartelAgreement,
    /// Seeded random towers: exact scaffold and brute-force breaks.
    RandomTowers,
}

/// Input problems exit with 2, failed checks with 1.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Check(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
