//! Community K-Shell (CKS) centrality for influence maximization.
//!
//! The pipeline detects communities with Louvain, strips inter-community
//! edges, runs a K-shell decomposition inside each community, and scores every
//! node by how evenly its edges spread across the shells of each community it
//! touches (K-shell entropy), weighted by community size and connection count.
//! Baseline centralities, an Independent Cascade simulator with an exact
//! live-edge oracle, and evaluation sweeps sit alongside.
//!
//! Scoring code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix it to `f64`, which is what the CLI uses.

pub mod baselines;
pub mod cks;
pub mod community;
pub mod coreness;
pub mod diffusion;
mod error;
pub mod generators;
pub mod graph;
pub mod method;
pub mod metrics;
mod scalar;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId, ParseOptions};
pub use method::{EncMode, Method, MethodParams};
pub use scalar::Scalar;

pub use cks::{CommunityProfile, ScoreTable, ScoringOptions, ShellHistogram};
pub use community::CommunityPartition;
pub use coreness::ShellAssignment;
pub use diffusion::{DiffusionConfig, DiffusionOutcome};
pub use metrics::{AsplResult, SweepPoint, SweepResult, SweepVariable};

pub type ScoreTable64 = cks::ScoreTable<f64>;
pub type ScoreTable32 = cks::ScoreTable<f32>;
pub type ScoringOptions64 = cks::ScoringOptions<f64>;
pub type CentralityResult64 = baselines::CentralityResult<f64>;
pub type CentralityResult32 = baselines::CentralityResult<f32>;

/// Default number of Monte-Carlo cascades per evaluation.
pub const DEFAULT_RUNS: usize = 100;
/// Default IC activation probability.
pub const DEFAULT_ACTIVATION_PROBABILITY: f64 = 0.1;
/// Default initial spreader fraction for activation-probability sweeps.
pub const DEFAULT_SEED_FRACTION: f64 = 0.2;
/// Default Louvain resolution.
pub const DEFAULT_RESOLUTION: f64 = 1.0;
