//! `l2cox`: growth series, Euler characteristics, identity checks and
//! weighted L² Betti number estimates for Coxeter groups.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use l2coxeter::davis::Cellulation;
use l2coxeter::spectral::Scheme;

#[derive(Parser, Debug)]
#[command(name = "l2cox", version, about = "Weighted L² invariants of Coxeter groups")]
pub struct Cli {
    /// Cache directory for balls and slices (overrides $L2COX_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Growth series W(t), its Taylor coefficients and radius of convergence.
    Growth {
        system: PathBuf,
        /// Number of Taylor coefficients to print.
        #[arg(long, default_value_t = 8)]
        terms: usize,
    },
    /// Euler characteristic χ_t of the Davis chamber.
    Euler {
        system: PathBuf,
        /// Compute χ as a rational function of t and compare with 1/W(t).
        #[arg(long)]
        formal: bool,
        /// Evaluate at this weight (exact fraction).
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
    /// Run the exact identity suite (default corpus when no system is given).
    Verify {
        systems: Vec<PathBuf>,
        #[arg(long, default_value_t = 120)]
        cases: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Radius of the complex slices.
        #[arg(long, default_value_t = 4)]
        radius: usize,
    },
    /// Estimate b^i_t on a ball of the Davis complex.
    Betti {
        system: PathBuf,
        #[command(flatten)]
        est: EstimateArgs,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Print the per-base-cell contributions.
        #[arg(long)]
        verbose: bool,
        /// Write the result as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Estimates over several weights, as CSV.
    Sweep {
        system: PathBuf,
        #[command(flatten)]
        est: EstimateArgs,
        /// Comma-separated exact weights, e.g. 1/4,1/2,2.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        t: Vec<String>,
        /// CSV output path (stdout when absent).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Compare b^i_t (ghd cellulation) with b^{n-i}_{1/t} (dual cellulation).
    Duality {
        system: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 8)]
        radius: usize,
        #[arg(long, default_value = "interior")]
        scheme: Scheme,
    },
    /// Right-angled building of thickness q+1: structure checks and b^i.
    Building {
        system: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 8)]
        radius: usize,
        /// Degrees to estimate (all when absent).
        #[arg(long)]
        i: Vec<usize>,
        /// CSV output path for the estimates.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct EstimateArgs {
    /// Cohomological degree.
    #[arg(long)]
    pub i: usize,
    #[arg(long, default_value = "dual")]
    pub cellulation: Cellulation,
    #[arg(long, default_value_t = 8)]
    pub radius: usize,
    #[arg(long, default_value = "interior")]
    pub scheme: Scheme,
    /// Relative tolerance of the least-squares solver.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
