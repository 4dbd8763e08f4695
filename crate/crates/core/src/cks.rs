//! K-shell entropy and CKS scores.
//!
//! For a node `v` and a community `c` it touches, let `η(v,s)` be the number
//! of `v`'s edges that land on nodes of community-shell `s` in `c`, and
//! `η(v,c)` their sum. The K-shell entropy is
//!
//! ```text
//! KSE(v,c) = − Σ_s  K_s · (η(v,s)/η(v,c)) · ln(η(v,s)/η(v,c))
//! ```
//!
//! where `K_s` is the shell index itself. The CKS score adds the entropies of
//! all touched communities, each weighted by the community's node count and
//! by `η(v,c)`:
//!
//! ```text
//! CKS(v) = Σ_c  |c| · KSE(v,c) · η(v,c)
//! ```
//!
//! Nodes spreading their edges across many shells of many large communities
//! (bridge nodes) score highest.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::community::{louvain, CommunityPartition};
use crate::coreness::{community_kshell, ShellAssignment};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::scalar::Scalar;

/// Edge counts from one node into each shell of one community, keyed by
/// shell index (the K value).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShellHistogram {
    counts: BTreeMap<usize, usize>,
}

impl ShellHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, shell: usize) {
        *self.counts.entry(shell).or_insert(0) += 1;
    }

    pub fn count(&self, shell: usize) -> usize {
        self.counts.get(&shell).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn shells_present(&self) -> usize {
        self.counts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().map(|(&s, &c)| (s, c))
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

impl FromIterator<(usize, usize)> for ShellHistogram {
    /// Collects `(shell, count)` pairs; zero counts are skipped.
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        let mut h = Self::new();
        for (s, c) in iter {
            if c > 0 {
                *h.counts.entry(s).or_insert(0) += c;
            }
        }
        h
    }
}

/// One node's connections, bucketed by neighbor community then neighbor
/// community-shell.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CommunityProfile {
    communities: BTreeMap<usize, ShellHistogram>,
}

impl CommunityProfile {
    pub fn histogram(&self, community: usize) -> Option<&ShellHistogram> {
        self.communities.get(&community)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &ShellHistogram)> {
        self.communities.iter().map(|(&c, h)| (c, h))
    }

    /// Number of distinct communities the node has edges into.
    pub fn community_count(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }
}

/// Scoring knobs. The defaults give the standard CKS score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoringOptions<T> {
    /// Skip the node's own community in the sum.
    pub exclude_own_community: bool,
    /// Logarithm base for the entropy; `None` is the natural logarithm.
    pub log_base: Option<T>,
}

impl<T> Default for ScoringOptions<T> {
    fn default() -> Self {
        Self {
            exclude_own_community: false,
            log_base: None,
        }
    }
}

/// Per-node scores with a deterministic ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable<T> {
    scores: Vec<T>,
    ranking: Vec<NodeId>,
}

impl<T: Scalar> ScoreTable<T> {
    /// Ranks by descending score, ties by ascending node id.
    pub fn from_scores(scores: Vec<T>) -> Self {
        let mut ranking: Vec<NodeId> = (0..scores.len()).collect();
        ranking.sort_by(|&a, &b| {
            scores[b]
                .partial_cmp(&scores[a])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        Self { scores, ranking }
    }

    pub fn score(&self, v: NodeId) -> T {
        self.scores[v]
    }

    pub fn scores(&self) -> &[T] {
        &self.scores
    }

    pub fn ranking(&self) -> &[NodeId] {
        &self.ranking
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn top(&self, k: usize) -> &[NodeId] {
        &self.ranking[..k.min(self.ranking.len())]
    }
}

/// Buckets every edge of `v` by the neighbor's community and community-shell.
pub fn build_profile(
    g: &Graph,
    p: &CommunityPartition,
    cs: &ShellAssignment,
    v: NodeId,
) -> Result<CommunityProfile> {
    g.check(v)?;
    check_inputs(g, p, cs)?;
    Ok(profile_unchecked(g, p, cs, v))
}

fn profile_unchecked(
    g: &Graph,
    p: &CommunityPartition,
    cs: &ShellAssignment,
    v: NodeId,
) -> CommunityProfile {
    let mut communities: BTreeMap<usize, ShellHistogram> = BTreeMap::new();
    for &u in g.neighbors(v) {
        communities
            .entry(p.community_of(u))
            .or_default()
            .add(cs.shell(u));
    }
    CommunityProfile { communities }
}

fn check_inputs(g: &Graph, p: &CommunityPartition, cs: &ShellAssignment) -> Result<()> {
    for len in [p.node_count(), cs.len()] {
        if len != g.node_count() {
            return Err(Error::PartitionMismatch {
                expected: g.node_count(),
                got: len,
            });
        }
    }
    Ok(())
}

/// K-shell entropy of one community histogram, natural logarithm.
pub fn kse<T: Scalar>(hist: &ShellHistogram) -> Result<T> {
    kse_with_base(hist, None)
}

/// K-shell entropy with an explicit logarithm base (`None` for `e`).
pub fn kse_with_base<T: Scalar>(hist: &ShellHistogram, base: Option<T>) -> Result<T> {
    let total = hist.total();
    if total == 0 {
        return Err(Error::EmptyHistogram);
    }
    let total = T::from_count(total);
    let mut entropy = T::zero();
    for (shell, count) in hist.iter() {
        let r = T::from_count(count) / total;
        let log = match base {
            Some(b) => r.log(b),
            None => r.ln(),
        };
        entropy -= T::from_count(shell) * r * log;
    }
    // -K·r·ln r is non-negative; ln(1) can come back as -0.0.
    Ok(entropy.max(T::zero()))
}

/// CKS score of `v` from a prebuilt profile of the node.
pub fn score_profile<T: Scalar>(
    profile: &CommunityProfile,
    p: &CommunityPartition,
    own_community: usize,
    opts: &ScoringOptions<T>,
) -> T {
    let mut score = T::zero();
    for (c, hist) in profile.iter() {
        if opts.exclude_own_community && c == own_community {
            continue;
        }
        // Profiles only hold communities the node has edges into.
        let entropy: T = kse_with_base(hist, opts.log_base).unwrap_or_else(|_| T::zero());
        score += T::from_count(p.sizes()[c]) * entropy * T::from_count(hist.total());
    }
    score
}

pub fn cks_score<T: Scalar>(
    g: &Graph,
    p: &CommunityPartition,
    cs: &ShellAssignment,
    v: NodeId,
) -> Result<T> {
    cks_score_with(g, p, cs, v, &ScoringOptions::default())
}

pub fn cks_score_with<T: Scalar>(
    g: &Graph,
    p: &CommunityPartition,
    cs: &ShellAssignment,
    v: NodeId,
    opts: &ScoringOptions<T>,
) -> Result<T> {
    let profile = build_profile(g, p, cs, v)?;
    Ok(score_profile(&profile, p, p.community_of(v), opts))
}

/// Scores every node for a given partition and community-shell assignment.
pub fn score_all<T: Scalar>(
    g: &Graph,
    p: &CommunityPartition,
    cs: &ShellAssignment,
    opts: &ScoringOptions<T>,
) -> Result<ScoreTable<T>> {
    check_inputs(g, p, cs)?;
    let scores: Vec<T> = g
        .nodes()
        .into_par_iter()
        .map(|v| {
            let profile = profile_unchecked(g, p, cs, v);
            score_profile(&profile, p, p.community_of(v), opts)
        })
        .collect();
    Ok(ScoreTable::from_scores(scores))
}

/// Everything the CKS pipeline produces for one graph.
#[derive(Debug, Clone)]
pub struct CksAnalysis<T> {
    pub partition: CommunityPartition,
    pub community_shells: ShellAssignment,
    pub table: ScoreTable<T>,
}

/// Louvain, community isolation, per-community K-shell, then scoring.
pub fn analyze<T: Scalar>(
    g: &Graph,
    rng_seed: u64,
    resolution: T,
    opts: &ScoringOptions<T>,
) -> Result<CksAnalysis<T>> {
    let partition = louvain(g, rng_seed, resolution)?;
    let community_shells = community_kshell(g, &partition)?;
    let table = score_all(g, &partition, &community_shells, opts)?;
    Ok(CksAnalysis {
        partition,
        community_shells,
        table,
    })
}

/// CKS scores and ranking of every node.
pub fn rank<T: Scalar>(g: &Graph, rng_seed: u64, resolution: T) -> Result<ScoreTable<T>> {
    Ok(analyze(g, rng_seed, resolution, &ScoringOptions::default())?.table)
}

/// The first `k` nodes of the ranking.
pub fn select_seeds<T: Scalar>(table: &ScoreTable<T>, k: usize) -> Result<Vec<NodeId>> {
    if k == 0 || k > table.len() {
        return Err(Error::invalid(format!(
            "seed count {k} outside 1..={}",
            table.len()
        )));
    }
    Ok(table.top(k).to_vec())
}
