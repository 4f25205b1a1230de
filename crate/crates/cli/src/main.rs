//! `dlab <experiment> [--config file.json] [flags] [--out dir] [--seed k] [--threads m]`
//!
//! Exit codes: 0 success, 1 I/O failure, 2 validation error, 3 numerical
//! contract violation.

mod config;
mod csv;
mod experiments;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Map;

use experiments::{
    BilinearDecayArgs, DecayArgs, EmbeddingArgs, InlsArgs, QuotientArgs, RegionArgs, Run, ScalingArgs, ScatterArgs,
    WhitneyArgs, EXPERIMENTS,
};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Contract(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Contract(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Contract(m) => write!(f, "contract violation: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<dlab_core::Error> for CliError {
    fn from(e: dlab_core::Error) -> Self {
        if e.is_contract_violation() {
            CliError::Contract(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "dlab", version, about = "Weighted Strichartz and INLS experiments")]
struct Cli {
    #[command(subcommand)]
    experiment: Option<Experiment>,
    /// JSON object of experiment parameters; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: $DLAB_OUT, else ./dlab-out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Experiment {
    /// Vertices A-F, the k range and membership of a point.
    Region(RegionArgs),
    /// Weighted dispersive decay of a Gaussian and its log-log slope.
    Decay(DecayArgs),
    /// Sobolev embedding ratios on the sphere as l_max grows.
    Embedding(EmbeddingArgs),
    /// Whitney decomposition of the time cone.
    Whitney(WhitneyArgs),
    /// Localized bilinear decay across Whitney scales.
    BilinearDecay(BilinearDecayArgs),
    /// Empirical Strichartz quotients over a data family.
    Quotient(QuotientArgs),
    /// Picard and split-step solves of the INLS.
    Inls(InlsArgs),
    /// Cauchy differences of the pulled-back solution.
    Scatter(ScatterArgs),
    /// Mass-critical scaling symmetry.
    Scaling(ScalingArgs),
}

impl Experiment {
    fn name(&self) -> &'static str {
        let i = match self {
            Experiment::Region(_) => 0,
            Experiment::Decay(_) => 1,
            Experiment::Embedding(_) => 2,
            Experiment::Whitney(_) => 3,
            Experiment::BilinearDecay(_) => 4,
            Experiment::Quotient(_) => 5,
            Experiment::Inls(_) => 6,
            Experiment::Scatter(_) => 7,
            Experiment::Scaling(_) => 8,
        };
        EXPERIMENTS[i]
    }

    fn run(&self, file: Map<String, serde_json::Value>, seed: u64) -> Result<Run, CliError> {
        use config::merge_args;
        match self {
            Experiment::Region(a) => experiments::region(&merge_args(a, file)?),
            Experiment::Decay(a) => experiments::decay(&merge_args(a, file)?),
            Experiment::Embedding(a) => experiments::embedding(&merge_args(a, file)?, seed),
            Experiment::Whitney(a) => experiments::whitney(&merge_args(a, file)?),
            Experiment::BilinearDecay(a) => experiments::bilinear_decay(&merge_args(a, file)?, seed),
            Experiment::Quotient(a) => experiments::quotient(&merge_args(a, file)?, seed),
            Experiment::Inls(a) => experiments::inls(&merge_args(a, file)?),
            Experiment::Scatter(a) => experiments::scatter(&merge_args(a, file)?),
            Experiment::Scaling(a) => experiments::scaling(&merge_args(a, file)?),
        }
    }
}

fn execute(cli: Cli, experiment: Experiment) -> Result<(), CliError> {
    let mut file = match &cli.config {
        Some(path) => config::read_config_file(path)?,
        None => Map::new(),
    };
    let globals = config::take_globals(&mut file)?;
    let seed = cli.seed.or(globals.seed).unwrap_or(0);
    if let Some(threads) = cli.threads.or(globals.threads) {
        if threads == 0 {
            return Err(CliError::Validation("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    }
    let out = cli
        .out
        .or_else(|| globals.out.map(PathBuf::from))
        .or_else(|| std::env::var_os("DLAB_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("dlab-out"));
    let name = experiment.name();
    let run = experiment.run(file, seed)?;
    std::fs::create_dir_all(&out).map_err(|e| CliError::Io(format!("cannot create {}: {e}", out.display())))?;
    let hash = run.params.hash(name, seed);
    println!("{name}: config-hash {hash}");
    println!("parameters: {}", run.params.to_json());
    for line in &run.summary {
        println!("{line}");
    }
    for table in &run.tables {
        let path = table.write(&out, &hash, name, seed)?;
        println!("wrote {} ({} rows)", path.display(), table.rows.len());
    }
    Ok(())
}

fn main() -> ExitCode {
    let mut cli = Cli::parse();
    let Some(experiment) = cli.experiment.take() else {
        for name in EXPERIMENTS {
            println!("{name}");
        }
        return ExitCode::SUCCESS;
    };
    match execute(cli, experiment) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dlab: {e}");
            ExitCode::from(e.code())
        }
    }
}
