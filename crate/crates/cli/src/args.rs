//! Command-line surface.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "metric-forge",
    version,
    about = "Certify negative definite kernels, induce and verify metrics, \
             and embed distance matrices into Euclidean coordinates",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a kernel for (strict) negative definiteness on sample points;
    /// --m switches to the m-linear form checks
    CheckNdk(CheckArgs),
    /// Alias of check-ndk that runs the m-linear form checks (m defaults to 2)
    CheckM(CheckArgs),
    /// Induce a distance from a family, measure, and base kernel, then
    /// verify separation and the metric axioms on probe points
    Induce(InduceArgs),
    /// Embed a distance matrix into Euclidean coordinates by classical
    /// scaling, with an embeddability verdict from the Gram spectrum
    Embed(EmbedArgs),
    /// End-to-end demonstration: linear functionals induce an inner
    /// product, a distance matrix, and a Euclidean embedding
    DemoExample1(DemoArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON run configuration (single document; unknown fields rejected)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory for report.json and CSV artifacts
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Top-level seed; fanned out deterministically to every stochastic stage
    #[arg(long)]
    pub seed: Option<u64>,
    /// Check tolerance (for embed: relative eigenvalue tolerance)
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Reproducible, timestamp-free reports (the only mode; accepted for
    /// interface stability)
    #[arg(long, default_value_t = true)]
    pub deterministic: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Sample points CSV, one point per row
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Randomized trials (default 1000)
    #[arg(long)]
    pub trials: Option<u64>,
    /// Even arity: run the m-linear form checks instead of the quadratic one
    #[arg(long)]
    pub m: Option<usize>,
    /// Strict variant: vanishing on a nontrivial coefficient vector fails
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct InduceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Probe points CSV, one point per row
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Random triples for the triangle-inequality check (default 200)
    #[arg(long)]
    pub trials: Option<u64>,
    /// Exit 2 when the separation check fails (pseudometric detected)
    #[arg(long)]
    pub require_metric: bool,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Distance matrix CSV (square; optional header row of labels)
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Probe points CSV when the matrix is induced from a config
    #[arg(long)]
    pub points: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Probe points CSV (default: six random points drawn from the seed)
    #[arg(long)]
    pub points: Option<PathBuf>,
}
