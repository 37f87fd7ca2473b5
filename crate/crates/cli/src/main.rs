use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod error;
mod manifest;
mod report;

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "framekit", version, about = "Finite frame analysis from the command line")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Numerical tolerance (command-specific default)
    #[arg(long, global = true, value_parser = positive_f64)]
    pub tol: Option<f64>,

    /// Seed for the random generator
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Frame bounds, tight/Parseval/Riesz flags, canonical dual and Parseval transform
    Analyze {
        /// Matrix file whose columns are the frame vectors
        frame: PathBuf,
    },
    /// Fit T with T f_k = f_{k+1}
    Represent { frame: PathBuf },
    /// Decide whether the orbit of a seed is a frame
    Orbit {
        operator: PathBuf,
        /// Seed vector as a d×1 or 1×d matrix file
        seed_vector: PathBuf,
        #[command(flatten)]
        truncation: Truncation,
        /// Also write the truncated orbit as a matrix file
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Test whether one frame element can be removed
    Remove {
        frame: PathBuf,
        /// One-based index of the element
        #[arg(long)]
        index: usize,
    },
    /// Perturbation bound for a nearby seed
    Perturb {
        operator: PathBuf,
        base_seed: PathBuf,
        perturbed_seed: PathBuf,
        /// Orbit length minus one
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Norm, spectral radius and invertibility neighborhood of an operator
    Spectral { operator: PathBuf },
    /// Check orbit-ball inclusion for a set of seeds
    Vset {
        operator: PathBuf,
        /// Matrix file whose columns are the seeds; random seeds when omitted
        #[arg(long)]
        seeds: Option<PathBuf>,
        /// Number of random seeds when no seed file is given
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Ball indices k (radius 1/k)
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
        ks: Vec<u32>,
        #[command(flatten)]
        truncation: Truncation,
    },
    /// Execute a run manifest
    Run { manifest: PathBuf },
}

#[derive(Args, Debug, Clone)]
pub struct Truncation {
    /// Longest orbit to compute
    #[arg(long, default_value_t = framekit::orbit::DEFAULT_MAX_LENGTH)]
    pub n_max: usize,
    /// Tail estimate at which the orbit is cut
    #[arg(long, default_value_t = framekit::orbit::DEFAULT_TAIL_TOL, value_parser = positive_f64)]
    pub tail_tol: f64,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("{s} is not a positive number"))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("FRAMEKIT_LOG", "error"))
        .format_timestamp(None)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl From<clap::Error> for CliError {
    fn from(e: clap::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}
