pub mod commands;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use twistfold::config::{parse_seed, ExperimentConfig};
use twistfold::Error;

pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "twistfold",
    version,
    about = "Toral linked twist maps: entropy, stretching, slopes and kinks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Burau matrix, spectral radius and entropy bound of a 3-strand braid word.
    EntropyBound {
        /// Word such as "s1 s2^-1"; several arguments are joined with spaces.
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        word: Vec<String>,
    },
    /// Advect a seed line, fit the growth rate and write CSV/SVG output.
    LtmRun(ExperimentArgs),
    /// Sample the unstable-manifold slope on a grid of cell centres.
    SlopeField(ExperimentArgs),
    /// Count kinks per iteration for the seed line and optional random seeds.
    Kinks(ExperimentArgs),
}

#[derive(Debug, Args, Default)]
pub struct ExperimentArgs {
    /// Flat key = value config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub ell: Option<i64>,
    /// Number of iterations.
    #[arg(long)]
    pub iters: Option<usize>,
    /// Seed segment as x0,y0,x1,y1.
    #[arg(long)]
    pub seed: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Slope-field cells per side.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub rng_seed: Option<u64>,
    /// Extra random positive-slope seeds for `kinks`.
    #[arg(long)]
    pub random_seeds: Option<usize>,
    #[arg(long)]
    pub vertex_budget: Option<usize>,
    /// Largest line written as a snapshot.
    #[arg(long)]
    pub snapshot_limit: Option<usize>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Keep at most this many vertices between census iterations.
    #[arg(long)]
    pub window: Option<usize>,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::VertexBudgetExceeded { .. } | Error::Overflow => EXIT_RESOURCE,
            Error::EmptyWord | Error::BraidParse(_) | Error::Config(_) => EXIT_USAGE,
            _ => EXIT_DOMAIN,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

pub fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

impl ExperimentArgs {
    pub fn resolve(&self) -> Result<ExperimentConfig, Failure> {
        let mut c = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Failure {
                    code: EXIT_IO,
                    message: format!("{}: {e}", path.display()),
                })?;
                ExperimentConfig::from_text(&text)?
            }
            None => ExperimentConfig::default(),
        };
        if let Some(v) = self.alpha {
            c.alpha = v;
        }
        if let Some(v) = self.beta {
            c.beta = v;
        }
        if let Some(v) = self.k {
            c.k = v;
        }
        if let Some(v) = self.ell {
            c.ell = v;
        }
        if let Some(v) = self.iters {
            c.n_iter = v;
        }
        if let Some(v) = &self.seed {
            c.seed = parse_seed(v)?;
        }
        if let Some(v) = &self.out {
            c.out_dir = v.clone();
        }
        if let Some(v) = self.grid {
            c.grid = v;
        }
        if self.threads.is_some() {
            c.threads = self.threads;
        }
        if let Some(v) = self.rng_seed {
            c.rng_seed = v;
        }
        if let Some(v) = self.random_seeds {
            c.random_seeds = v;
        }
        if let Some(v) = self.vertex_budget {
            c.vertex_budget = v;
        }
        if let Some(v) = self.snapshot_limit {
            c.snapshot_limit = v;
        }
        if let Some(v) = self.burn_in {
            c.burn_in = v;
        }
        if self.window.is_some() {
            c.census_window = self.window;
        }
        Ok(c)
    }
}

fn init_threads(threads: Option<usize>) -> Result<(), Failure> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| usage(e.to_string()))?;
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::EntropyBound { word } => commands::entropy_bound(&word.join(" ")),
        Command::LtmRun(args) => {
            let c = args.resolve()?;
            init_threads(c.threads)?;
            commands::ltm_run(&c)
        }
        Command::SlopeField(args) => {
            let c = args.resolve()?;
            init_threads(c.threads)?;
            commands::slope_field(&c)
        }
        Command::Kinks(args) => {
            let c = args.resolve()?;
            init_threads(c.threads)?;
            commands::kinks(&c)
        }
    }
}
