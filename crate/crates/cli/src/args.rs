use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use parsssp::graph::{DEFAULT_WEIGHT_HI, DEFAULT_WEIGHT_LO};
use parsssp::stepping::{AlgorithmKind, ModeOverride, RhoSelector};
use parsssp::Backend;

#[derive(Parser, Debug)]
#[command(name = "parsssp", version, about = "Parallel single-source shortest paths")]
pub struct Cli {
    /// Worker threads; defaults to every available core.
    #[arg(long, global = true, env = "SSSP_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a random graph with uniform weights.
    Gen(GenArgs),
    /// Run a policy from each source and print one CSV row per run.
    Run(RunArgs),
    /// Check a policy's distances against sequential Dijkstra.
    Verify(VerifyArgs),
    /// Print per-round statistics of a single run as CSV.
    Stats(StatsArgs),
    /// Estimate k_ρ over a grid of ρ values.
    Krho(KrhoArgs),
    /// Check runs against the step, extraction and work bounds.
    Bounds(BoundsArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GraphFormat {
    Text,
    Binary,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    /// Edges (undirected) or arcs (directed).
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Smallest weight.
    #[arg(long, default_value_t = DEFAULT_WEIGHT_LO)]
    pub wmin: u32,
    /// Weights are drawn below this bound.
    #[arg(long, default_value_t = DEFAULT_WEIGHT_HI)]
    pub wmax: u32,
    #[arg(long)]
    pub directed: bool,
    #[arg(long, value_enum, default_value_t = GraphFormat::Binary)]
    pub format: GraphFormat,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    /// Binary CSR file or text edge list.
    #[arg(long)]
    pub graph: PathBuf,
    /// Treat a text edge list as directed.
    #[arg(long)]
    pub directed: bool,
}

#[derive(Args, Debug)]
pub struct AlgoArgs {
    #[arg(long, value_parser = parse_algo)]
    pub algo: AlgorithmKind,
    /// Bucket width for delta and delta-star.
    #[arg(long)]
    pub delta: Option<u64>,
    /// ρ for rho (default 2^21, clamped to n) and radius (required).
    #[arg(long)]
    pub rho: Option<usize>,
    #[arg(long, value_parser = parse_selector, default_value = "sampled")]
    pub selector: RhoSelector,
    #[arg(long, value_parser = parse_backend, default_value = "tree")]
    pub backend: Backend,
    /// auto, dense, sparse or super-sparse.
    #[arg(long, value_parser = parse_mode, default_value = "auto")]
    pub mode: ModeOverride,
    #[arg(long)]
    pub no_fusion: bool,
    #[arg(long, default_value_t = 4096)]
    pub fusion_budget: usize,
    #[arg(long)]
    pub no_bidirectional: bool,
    /// Seed for threshold sampling.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub algo: AlgoArgs,
    /// Comma-separated ids or `random:<k>:<seed>`.
    #[arg(long, default_value = "0")]
    pub sources: String,
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub algo: AlgoArgs,
    #[arg(long, default_value = "0")]
    pub sources: String,
    /// Test hook: perturb this vertex's distance before comparing.
    #[arg(long, hide = true)]
    pub corrupt_vertex: Option<u32>,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub algo: AlgoArgs,
    #[arg(long, default_value_t = 0)]
    pub source: u32,
}

#[derive(Args, Debug)]
pub struct KrhoArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// ρ values; defaults to log n, √n, n/log n, n/10 and n.
    #[arg(long, value_delimiter = ',')]
    pub rho: Vec<usize>,
    #[arg(long, default_value_t = parsssp::analysis::DEFAULT_KRHO_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Examine every vertex instead of sampling.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 0)]
    pub source: u32,
    /// Δ for the delta-star run; defaults to the largest weight.
    #[arg(long)]
    pub delta: Option<u64>,
    /// ρ for the exact-selector rho run; defaults to ceil(√n).
    #[arg(long)]
    pub rho: Option<usize>,
    #[arg(long, default_value_t = parsssp::analysis::DEFAULT_KRHO_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Largest n for which k_ρ is computed exactly rather than sampled.
    #[arg(long, default_value_t = 20_000)]
    pub exact_limit: usize,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

fn parse_algo(s: &str) -> Result<AlgorithmKind, String> {
    s.parse().map_err(|e: parsssp::Error| e.to_string())
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse().map_err(|e: parsssp::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<ModeOverride, String> {
    s.parse().map_err(|e: parsssp::Error| e.to_string())
}

fn parse_selector(s: &str) -> Result<RhoSelector, String> {
    match s {
        "sampled" => Ok(RhoSelector::Sampled),
        "exact" => Ok(RhoSelector::Exact),
        _ => Err(format!("unknown selector {s:?}")),
    }
}
