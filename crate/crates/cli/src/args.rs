use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cks_core::{EncMode, Method};

#[derive(Debug, Parser)]
#[command(
    name = "cks",
    version,
    about = "Community K-Shell centrality and influence-spread experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every node and write the ranking.
    Rank(RankArgs),
    /// Pick the top-k (or top fraction) nodes of a ranking as seeds.
    Seeds(SeedsArgs),
    /// Monte-Carlo Independent Cascade from a seed set.
    Simulate(SimulateArgs),
    /// FIS over a grid of activation probabilities or seed fractions.
    Sweep(SweepArgs),
    /// Mean shortest-path length among seeds.
    Aspl(AsplArgs),
    /// Time the scoring phase of each method.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Cks,
    Bc,
    Cc,
    Enc,
    Degree,
    Kshell,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Cks => Method::Cks,
            MethodArg::Bc => Method::Betweenness,
            MethodArg::Cc => Method::Closeness,
            MethodArg::Enc => Method::Enc,
            MethodArg::Degree => Method::Degree,
            MethodArg::Kshell => Method::Kshell,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EncModeArg {
    Basic,
    Extended,
}

impl From<EncModeArg> for EncMode {
    fn from(m: EncModeArg) -> Self {
        match m {
            EncModeArg::Basic => EncMode::Basic,
            EncModeArg::Extended => EncMode::Extended,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVar {
    P,
    Fraction,
}

/// Input graph and output options shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
pub struct IoArgs {
    /// Edge-list file (whitespace separated, `#`/`%` comments).
    #[arg(long)]
    pub input: PathBuf,
    /// Treat lines as directed arcs; they are symmetrized.
    #[arg(long)]
    pub directed: bool,
    /// Require node labels to be non-negative integers.
    #[arg(long)]
    pub numeric_labels: bool,
    /// Output file; stdout when omitted. A `<out>.manifest.json` is written
    /// next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Worker threads; defaults to all cores. Results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
}

/// How nodes are scored.
#[derive(Debug, Clone, Args, Serialize)]
pub struct ScoringArgs {
    #[arg(long, value_enum, default_value = "cks")]
    pub method: MethodArg,
    #[arg(long, default_value_t = cks_core::DEFAULT_RESOLUTION)]
    pub resolution: f64,
    /// Leave the node's own community out of the CKS sum.
    #[arg(long)]
    pub exclude_own_community: bool,
    #[arg(long, value_enum, default_value = "extended")]
    pub enc_mode: EncModeArg,
}

/// Seed-set size, as a count or a fraction of the nodes.
#[derive(Debug, Clone, Args, Serialize)]
pub struct SizeArgs {
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub fraction: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RankArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(flatten)]
    pub scoring: ScoringArgs,
    /// Louvain seed.
    #[arg(long)]
    pub seed: u64,
    /// Only write the first K rows.
    #[arg(long)]
    pub top: Option<usize>,
    /// Write `node_label,community_id` (CKS only).
    #[arg(long)]
    pub communities: Option<PathBuf>,
    /// Write `node_label,community_id,community_shell,global_shell` (CKS only).
    #[arg(long)]
    pub shells: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SeedsArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(flatten)]
    pub scoring: ScoringArgs,
    #[command(flatten)]
    pub size: SizeArgs,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// Seed labels, one per line (or a `seeds` CSV with a `node_label` column).
    #[arg(long)]
    pub seeds_file: Option<PathBuf>,
    /// Without a seeds file, take seeds from this method's ranking.
    #[command(flatten)]
    pub scoring: ScoringArgs,
    #[command(flatten)]
    pub size: SizeArgs,
    #[arg(long, default_value_t = cks_core::DEFAULT_ACTIVATION_PROBABILITY)]
    pub p: f64,
    #[arg(long, default_value_t = cks_core::DEFAULT_RUNS)]
    pub runs: usize,
    /// Master seed for the cascades (and Louvain, when ranking).
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// Methods to compare, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "cks")]
    pub method: Vec<MethodArg>,
    #[arg(long, default_value_t = cks_core::DEFAULT_RESOLUTION)]
    pub resolution: f64,
    #[arg(long)]
    pub exclude_own_community: bool,
    #[arg(long, value_enum, default_value = "extended")]
    pub enc_mode: EncModeArg,
    /// Swept variable.
    #[arg(long, value_enum)]
    pub sweep: SweepVar,
    /// `start:stop:step` or a comma-separated list.
    #[arg(long)]
    pub grid: String,
    /// Fixed seed fraction for a `p` sweep (default 0.2).
    #[arg(long)]
    pub fraction: Option<f64>,
    /// Fixed activation probability for a `fraction` sweep (default 0.1).
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = cks_core::DEFAULT_RUNS)]
    pub runs: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AsplArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long)]
    pub seeds_file: Option<PathBuf>,
    #[command(flatten)]
    pub scoring: ScoringArgs,
    #[command(flatten)]
    pub size: SizeArgs,
    /// Louvain seed, when seeds come from a CKS ranking.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BenchArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// Methods to time, comma separated (default: all).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub methods: Vec<MethodArg>,
    #[arg(long, default_value_t = cks_core::DEFAULT_RESOLUTION)]
    pub resolution: f64,
    #[arg(long, value_enum, default_value = "extended")]
    pub enc_mode: EncModeArg,
    /// Timed repetitions per method; the fastest is reported.
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
