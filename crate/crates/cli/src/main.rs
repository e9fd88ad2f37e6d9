//! `orbit-lift`: lift sampled curves over orbit maps, measure the lifts,
//! scan for critical exponents, build interval covers and verify
//! admissibility.
//!
//! Reports go to stdout as JSON (`schema: 1`, with the resolved config);
//! diagnostics go to stderr as JSON lines. Exit codes: 0 success, 2 input
//! error, 3 numerical failure, 4 property violation.

mod commands;
mod config;
mod preset;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

pub const SCHEMA: u32 = 1;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
    pub t: Option<f64>,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
            t: None,
        }
    }

    pub fn property(message: impl Into<String>, t: Option<f64>) -> Self {
        Self {
            code: 4,
            message: message.into(),
            t,
        }
    }
}

impl From<orbit_lift::Error> for CliError {
    fn from(e: orbit_lift::Error) -> Self {
        use orbit_lift::Error as E;
        let (code, t) = match &e {
            E::CoverPropertyViolation { t, .. } => (4, Some(*t)),
            E::RefinementBudgetExhausted { t, .. }
            | E::RootSolveFailure { t, .. }
            | E::DiscontinuousAtZeroSet { t, .. }
            | E::VanishingDominant { t }
            | E::DominantVanishes { t }
            | E::IntervalUnresolved { t }
            | E::ClustersNotSeparated { t } => (3, Some(*t)),
            E::NoReconcilingElement { .. } | E::AllZeroAtPoint { .. } => (3, None),
            _ => (2, None),
        };
        Self {
            code,
            message: e.to_string(),
            t,
        }
    }
}

pub fn warn(message: impl Into<String>) {
    eprintln!("{}", json!({"level": "warning", "message": message.into()}));
}

#[derive(Parser, Debug)]
#[command(
    name = "orbit-lift",
    version,
    about = "Continuous lifts over finite-group orbit maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// `key = value` file; flags take precedence over it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for report.json and CSV tables.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Residual tolerance of the lifts.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Invariant magnitudes below this count as zero.
    #[arg(long = "zero-tol", global = true)]
    pub zero_tol: Option<f64>,
    /// Maximal bisection depth per input cell.
    #[arg(long = "max-depth", global = true)]
    pub max_depth: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lift a scalar curve through the d-th root and measure the lift.
    Radical(commands::RadicalArgs),
    /// Lift the roots of a polynomial curve given by (e_1, ..., e_Q).
    Roots(commands::RootsArgs),
    /// Locate the critical exponent by refinement.
    Scan(commands::ScanArgs),
    /// Build prepared intervals and select a two-overlap cover.
    Cover(commands::CoverArgs),
    /// Maximal admissible intervals and their checks at every node.
    Verify(commands::VerifyArgs),
    /// Distances between unordered tuples.
    Qdist(commands::QdistArgs),
    /// Lift a sampled map on a plane grid, or report its monodromy.
    Grid2d(commands::Grid2dArgs),
}

fn configure_threads() {
    if let Ok(raw) = std::env::var("ORBIT_LIFT_THREADS") {
        match raw.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    warn(format!("thread pool: {e}"));
                }
            }
            _ => warn(format!("ignoring ORBIT_LIFT_THREADS = `{raw}`")),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let mut line = json!({"level": "error", "code": e.code, "message": e.message});
            if let Some(t) = e.t {
                line["t"] = json!(t);
            }
            eprintln!("{line}");
            ExitCode::from(e.code)
        }
    }
}
