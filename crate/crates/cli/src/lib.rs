//! Command-line front end for the beepnet simulator.

pub mod commands;
pub mod config;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{ExperimentConfig, GraphSpec, WakeSpec};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{}: {}", .0.display(), .1)]
    Io(PathBuf, #[source] std::io::Error),
    #[error(transparent)]
    Core(#[from] beepnet::Error),
}

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "beepnet", version, about = "Beeping-model MIS simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one (graph, seed) pair and write its CSV row.
    Run(RunArgs),
    /// Sweep sizes and seeds; one CSV row per (n, seed) plus per-size medians.
    Experiment(RunArgs),
    /// Replay a lower-bound construction or run the pair symmetry oracle.
    Scenario(ScenarioArgs),
    /// Re-check a stored trace's feedback and final MIS.
    VerifyTrace(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub algorithm: Option<String>,
    /// clique | path | pairs | gnp:<p> | gnp-degree:<d> | file:<path>
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated sizes (experiment).
    #[arg(long)]
    pub ns: Option<String>,
    /// Known size bound for alg1 (defaults to n).
    #[arg(long = "N")]
    pub n_bound: Option<u64>,
    #[arg(long)]
    pub c: Option<u64>,
    /// plain | sender-cd
    #[arg(long)]
    pub feedback: Option<String>,
    /// all-at-0 | all-at:<r> | staggered:<stride> | file:<path>
    #[arg(long)]
    pub wake: Option<String>,
    /// adversarial | wake-on-beep
    #[arg(long)]
    pub wake_mode: Option<String>,
    #[arg(long, conflicts_with = "seeds")]
    pub seed: Option<u64>,
    /// `a..b` or a comma-separated list.
    #[arg(long)]
    pub seeds: Option<String>,
    #[arg(long)]
    pub horizon: Option<u64>,
    /// CSV output path (stdout if absent).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Trace output path (run only).
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

impl RunArgs {
    pub fn resolve(self) -> Result<ExperimentConfig, CliError> {
        let file = match &self.config {
            Some(path) => config::FileConfig::load(path)?,
            None => config::FileConfig::default(),
        };
        let flags = config::Overrides {
            algorithm: self.algorithm,
            n_bound: self.n_bound,
            c: self.c,
            feedback: self.feedback,
            wake_mode: self.wake_mode,
            n: self.n,
            ns: self.ns,
            seed: self.seed,
            seeds: self.seeds,
            horizon: self.horizon,
            csv: self.csv,
            trace: self.trace,
            graph: self.graph,
            wake: self.wake,
        };
        ExperimentConfig::resolve(file, flags)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioCase {
    Case1,
    Case2,
    Pairs,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    #[arg(value_enum)]
    pub case: ScenarioCase,
    #[arg(long, default_value_t = 6)]
    pub k: usize,
    #[arg(long, default_value_t = 4)]
    pub clique_scale: usize,
    #[arg(long, default_value_t = 0.9)]
    pub p: f64,
    #[arg(long, default_value_t = 2)]
    pub ell: u64,
    /// Case 2: rounds before a node that heard a beep may beep again.
    #[arg(long, default_value_t = 2)]
    pub m: u64,
    /// Case 2: beep probability after hearing a beep.
    #[arg(long, default_value_t = 0.5)]
    pub p_prime: f64,
    /// Replay seeds, `a..b` or a list.
    #[arg(long, default_value = "0..500")]
    pub seeds: String,
    /// Replay length; defaults to `ell + 2k`.
    #[arg(long)]
    pub horizon: Option<u64>,
    /// Pairs: number of nodes.
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    /// Pairs: Monte Carlo trials.
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// Pairs: RNG seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the constructed scenario (edge list with wake/label comments).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Trace file written by `run --trace`.
    #[arg(long)]
    pub trace: PathBuf,
    #[arg(long)]
    pub graph: String,
    #[arg(long)]
    pub n: Option<usize>,
    /// Seed the graph was generated with.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Runs a parsed command line and returns the process exit code.
pub fn dispatch(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Run(args) => args.resolve().and_then(|c| commands::cmd_run(&c)),
        Command::Experiment(args) => args.resolve().and_then(|c| commands::cmd_experiment(&c)),
        Command::Scenario(args) => commands::cmd_scenario(&args),
        Command::VerifyTrace(args) => commands::cmd_verify_trace(&args),
    };
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            eprintln!("beepnet: {e}");
            EXIT_CONFIG
        }
    }
}
