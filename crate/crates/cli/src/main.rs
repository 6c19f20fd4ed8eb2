//! Command-line front end for the biased-crossover search toolkit.
//!
//! Each subcommand runs one experiment and writes a CSV of per-replica
//! rows, a JSON summary beside it, and (for the tour experiments) a
//! trajectory CSV. Given the same configuration and seed the output bytes
//! are identical, whatever the thread count.

use clap::{Args, Parser, Subcommand};
use crossquad::config::{self, Experiment, GammaChoice, Overrides};
use crossquad::errors::CliError;
use crossquad::experiments;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "crossquad",
    version,
    about = "Biased-crossover global search on random cost landscapes, with closed-form \
             predictions and a travelling-salesman demonstrator",
    after_help = "Outputs: <out>.csv with one row per measurement, <out>.json with run \
                  aggregates, and <out>_trajectories.csv for the tour experiments. \
                  Unset flags fall back to the JSON config (--config), then to \
                  per-experiment defaults. Runs are deterministic in (config, --seed)."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Exhaustive global minima across small dimensions vs. the closed-form
    /// extreme-value predictions
    Fig1c(RunArgs),
    /// Exhaustive local-minimum counts across small dimensions vs. the
    /// closed-form growth law
    Fig2b(RunArgs),
    /// Bias sweep of selection crossover on raw states: offspring
    /// statistics vs. forecasts
    Fig3(RunArgs),
    /// Bias sweep of the combined descend/cross/descend pipeline on proxy
    /// costs
    Fig3e(RunArgs),
    /// Batch of random planar tour instances through the
    /// descend/cross/descend pipeline
    Fig4(RunArgs),
    /// Monte Carlo minima of M Gaussians vs. the predicted mean and spread
    Lemma2(RunArgs),
    /// Closed-form predictions at dimensions far beyond enumeration
    Predict(RunArgs),
    /// Tour search on a single instance, from a file or generated
    TspSolve(RunArgs),
}

impl Cmd {
    fn split(&self) -> (Experiment, &RunArgs) {
        match self {
            Cmd::Fig1c(a) => (Experiment::Fig1c, a),
            Cmd::Fig2b(a) => (Experiment::Fig2b, a),
            Cmd::Fig3(a) => (Experiment::Fig3, a),
            Cmd::Fig3e(a) => (Experiment::Fig3e, a),
            Cmd::Fig4(a) => (Experiment::Fig4, a),
            Cmd::Lemma2(a) => (Experiment::Lemma2, a),
            Cmd::Predict(a) => (Experiment::Predict, a),
            Cmd::TspSolve(a) => (Experiment::TspSolve, a),
        }
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON config file; flags given here override it
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Landscape dimensions (comma-separated list)
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    n: Option<Vec<usize>>,

    /// Interaction degrees (comma-separated list)
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    k: Option<Vec<usize>>,

    /// Samples per generation (parents and offspring)
    #[arg(long)]
    m: Option<u64>,

    /// Crossover bias in [0, 0.5], or "auto" to solve for it per
    /// realization; omitted = experiment default (a sweep where one applies)
    #[arg(long)]
    gamma: Option<GammaChoice>,

    /// Independent repetitions
    #[arg(long)]
    replicas: Option<u64>,

    /// Master seed; all randomness derives from it
    #[arg(long)]
    seed: Option<u64>,

    /// Output CSV path (JSON summary lands beside it)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads (default: all cores); never changes the results
    #[arg(long)]
    threads: Option<usize>,

    /// Largest dimension exhaustive sweeps may enumerate
    #[arg(long)]
    exhaustive_cap: Option<usize>,

    /// Full-size runs instead of the quick desk-scale defaults (slow;
    /// large memory for the landscape sweeps)
    #[arg(long)]
    full_scale: bool,

    /// Cities per generated tour instance
    #[arg(long)]
    cities: Option<usize>,

    /// Parent pool size for the tour pipeline
    #[arg(long)]
    pool_size: Option<usize>,

    /// Tour instance file ("x y" per line) instead of a generated one
    #[arg(long, value_name = "PATH")]
    instance: Option<PathBuf>,

    /// Effective interaction degree for the prediction formulas
    #[arg(long)]
    k_hat: Option<f64>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            n: self.n.clone(),
            k: self.k.clone(),
            m: self.m,
            gamma: self.gamma,
            replicas: self.replicas,
            seed: self.seed,
            out: self.out.clone(),
            threads: self.threads,
            exhaustive_cap: self.exhaustive_cap,
            full_scale: self.full_scale,
            cities: self.cities,
            pool_size: self.pool_size,
            instance: self.instance.clone(),
            k_hat: self.k_hat,
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let (experiment, args) = cli.cmd.split();
    let cfg = config::resolve(experiment, args.config.as_deref(), &args.overrides())?;

    if let Some(threads) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("setting up {threads} threads: {e}")))?;
    }

    let artifacts = experiments::dispatch(experiment, &cfg)?;
    for path in experiments::write_artifacts(&cfg, &artifacts)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
