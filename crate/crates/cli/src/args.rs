use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dynseq::greedy::{Engine, FourierTermsRule};

#[derive(Debug, Parser)]
#[command(name = "dynseq", version, about = "Greedy energy sequences and exact star discrepancy")]
pub struct Cli {
    /// Worker threads for candidate evaluation; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extend an initial set greedily.
    Generate(GenerateArgs),
    /// Exact star discrepancy of a points file.
    Discrepancy(DiscrepancyArgs),
    /// Recompute the published comparison tables.
    Table(TableArgs),
    /// Discrepancy growth along a greedy run.
    Scan(ScanArgs),
    /// Evaluate per-step certificates.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InitialArgs {
    /// Initial coordinates, row-major when --dim > 1.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub initial: Option<Vec<f64>>,
    /// Points CSV holding the initial set.
    #[arg(long, conflicts_with = "initial")]
    pub initial_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelChoice {
    Logsin,
    Fourier,
    CosineSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineChoice {
    Direct,
    Spectral,
}

impl From<EngineChoice> for Engine {
    fn from(e: EngineChoice) -> Self {
        match e {
            EngineChoice::Direct => Engine::Direct,
            EngineChoice::Spectral => Engine::Spectral,
        }
    }
}

/// `equal-n`, `mult:C` or `fixed:M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MRule {
    pub rule: FourierTermsRule,
    pub fixed: Option<usize>,
}

pub fn parse_m_rule(s: &str) -> Result<MRule, String> {
    let positive = |v: &str| match v.parse::<usize>() {
        Ok(c) if c > 0 => Ok(c),
        _ => Err(format!("expected a positive integer, got {v:?}")),
    };
    if s == "equal-n" {
        Ok(MRule { rule: FourierTermsRule::EqualN, fixed: None })
    } else if let Some(c) = s.strip_prefix("mult:") {
        Ok(MRule { rule: FourierTermsRule::Multiple(positive(c)?), fixed: None })
    } else if let Some(m) = s.strip_prefix("fixed:") {
        Ok(MRule { rule: FourierTermsRule::Fixed, fixed: Some(positive(m)?) })
    } else {
        Err(format!("unknown rule {s:?}; use equal-n, mult:C or fixed:M"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct GreedyArgs {
    /// Dimension; defaults to the initial file's, else 1.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, value_enum, default_value = "logsin")]
    pub kernel: KernelChoice,
    /// Nonnegative coefficients c_1..c_K for --kernel cosine-series.
    #[arg(long, value_delimiter = ',')]
    pub coefficients: Option<Vec<f64>>,
    #[arg(long, value_parser = parse_m_rule, default_value = "equal-n")]
    pub fourier_m_rule: MRule,
    #[arg(long, default_value_t = 10)]
    pub exclusion_exponent: u32,
    /// Samples per axis for non-convex searches.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_enum, default_value = "direct")]
    pub engine: EngineChoice,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub initial: InitialArgs,
    #[command(flatten)]
    pub greedy: GreedyArgs,
    /// Total number of points, initial ones included.
    #[arg(long)]
    pub count: usize,
    /// Points CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Step records as JSON lines.
    #[arg(long)]
    pub steps: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiscrepancyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Use {(n/N, x_n)} of a one-dimensional sequence.
    #[arg(long)]
    pub embed_xn: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Columns {
    All,
    Baselines,
    Greedy,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub which: u8,
    #[arg(long, value_enum, default_value = "all")]
    pub columns: Columns,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(0..=1))]
    pub index_origin: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub initial: InitialArgs,
    #[command(flatten)]
    pub greedy: GreedyArgs,
    #[arg(long)]
    pub max_n: usize,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Per-N rows as CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Two-column `n,discrepancy` file.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Step records written by `generate --steps`.
    #[arg(long)]
    pub steps: Option<PathBuf>,
    /// Full sequence as a points CSV.
    #[arg(long)]
    pub points: Option<PathBuf>,
    #[arg(long)]
    pub lemma3: bool,
    #[arg(long, default_value_t = 10)]
    pub m_mult: usize,
    /// First step index gated by --lemma3.
    #[arg(long, default_value_t = 8)]
    pub from_step: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub gate: f64,
    #[arg(long)]
    pub theorem3: bool,
    #[arg(long)]
    pub dyadic: bool,
    #[arg(long, default_value_t = 4)]
    pub depth: u32,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[arg(long)]
    pub min_energy: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
