//! Experiment harness for signed-graph coalition clustering.
//!
//! Subcommands cover the full workflow: `synth` writes benchmark graphs,
//! `cluster` runs one algorithm on one graph, `bench` sweeps an
//! (n, k, seed) grid, `finance` clusters rolling correlation windows of a
//! price panel, `score` evaluates a stored partition, and `summary`
//! aggregates a benchmark table. Every file-producing command writes a
//! manifest sufficient to reproduce its outputs byte for byte.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error.

mod bench;
mod cluster;
mod config;
mod finance;
mod manifest;
mod score;
mod summary;
mod synth;

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use gcsq_core::{Backend, SolverConfig};

use config::Resolver;

/// A bad invocation: wrong flags, invalid values, missing inputs. Exits 2.
#[derive(Debug)]
pub struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

/// Usage error unless `path` exists; error message names the path.
pub fn require_file(path: &Path) -> Result<()> {
    if !path.is_file() {
        return Err(usage(format!("input file not found: {}", path.display())));
    }
    Ok(())
}

#[derive(Parser)]
#[command(name = "gcsq", version, about = "Signed-graph coalition clustering experiments")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// Base RNG seed (instances and solver)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// QUBO backend: auto, exact, or anneal
    #[arg(long, global = true)]
    solver: Option<String>,
    /// Max vertices solved exactly when the backend is auto
    #[arg(long, global = true)]
    threshold: Option<usize>,
    /// Worker threads for grid commands (0 = all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Config file with key=value lines mirroring flag names
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate planted-partition benchmark graphs
    Synth(synth::SynthArgs),
    /// Cluster one graph file with one algorithm
    Cluster(cluster::ClusterArgs),
    /// Run an (n, k, seed) benchmark grid and emit a long-format table
    Bench(bench::BenchArgs),
    /// Cluster rolling correlation windows of a price panel
    Finance(finance::FinanceArgs),
    /// Score a stored partition against a graph and optional ground truth
    Score(score::ScoreArgs),
    /// Aggregate a benchmark table into per-cell means and variances
    Summary(summary::SummaryArgs),
}

/// Resolve the solver-related global flags into a core config.
fn solver_config(r: &mut Resolver, g: &GlobalArgs) -> Result<SolverConfig> {
    let name = r.value("solver", g.solver.clone(), "auto".to_string())?;
    let backend = match name.as_str() {
        "auto" => Backend::Auto,
        "exact" => Backend::Exact,
        "anneal" => Backend::Anneal,
        other => return Err(usage(format!("unknown solver {other:?} (use auto, exact, or anneal)"))),
    };
    let cfg = SolverConfig {
        backend,
        exact_threshold: r.value("threshold", g.threshold, SolverConfig::default().exact_threshold)?,
        seed: r.value("seed", g.seed, 0)?,
        ..SolverConfig::default()
    };
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    Ok(cfg)
}

/// Resolve and create the output directory.
fn out_dir(r: &mut Resolver, g: &GlobalArgs) -> Result<PathBuf> {
    let flag = g.out.as_ref().map(|p| p.display().to_string());
    let dir = PathBuf::from(r.value("out", flag, ".".to_string())?);
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn run(cli: Cli) -> Result<()> {
    let resolver = Resolver::new(cli.global.config.as_deref())?;
    match cli.command {
        Command::Synth(args) => synth::run(args, &cli.global, resolver),
        Command::Cluster(args) => cluster::run(args, &cli.global, resolver),
        Command::Bench(args) => bench::run(args, &cli.global, resolver),
        Command::Finance(args) => finance::run(args, &cli.global, resolver),
        Command::Score(args) => score::run(args, resolver),
        Command::Summary(args) => summary::run(args, resolver),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = if err.chain().any(|c| c.is::<UsageError>()) { 2 } else { 1 };
            std::process::exit(code);
        }
    }
}
