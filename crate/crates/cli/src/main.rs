//! `sgdp`: simulate data, fit the spatial mixture model, and evaluate fits.

mod files;
mod fit;
mod report;
mod simulate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sgdp_core::sampler::Model;

#[derive(Debug, Parser)]
#[command(name = "sgdp", version, about = "Spatial random-partition clustering of functional data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic dataset with known clusters.
    Simulate(SimulateArgs),
    /// Run MCMC chains on a dataset directory.
    Fit(FitArgs),
    /// Compare a fit against a truth file.
    Metrics(MetricsArgs),
    /// Print posterior summaries of a fit.
    Summarize(SummarizeArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// JSON simulation config; defaults apply to missing keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Dataset directory with observations.csv, calendar.csv and adjacency.csv.
    #[arg(long)]
    pub data: PathBuf,
    /// JSON chain config with an optional "priors" block.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub model: Option<Model>,
    /// Named hyperprior set: prior1, prior2, application or sdp.
    #[arg(long)]
    pub priors: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub chains: usize,
    /// Worker threads for running chains; defaults to one per chain.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Standardize each curve before fitting.
    #[arg(long)]
    pub standardize: bool,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Fit output directory.
    #[arg(long)]
    pub data: PathBuf,
    /// truth.json written by `simulate`.
    #[arg(long)]
    pub truth: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub chain: u64,
    #[arg(long, default_value_t = 0)]
    pub period: usize,
    /// Also write the metrics JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SummarizeArgs {
    /// Fit output directory.
    #[arg(long)]
    pub data: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate::run(&a),
        Command::Fit(a) => fit::run(&a),
        Command::Metrics(a) => report::metrics(&a),
        Command::Summarize(a) => report::summarize(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for validation errors, 3 for numeric failures, 1 otherwise.
fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(core) = cause.downcast_ref::<sgdp_core::Error>() {
            if core.is_numeric() {
                return 3;
            }
            if core.is_validation() {
                return 2;
            }
        }
        if cause.is::<serde_json::Error>() || cause.is::<files::Invalid>() {
            return 2;
        }
    }
    1
}
