//! Louvain community detection, modularity, and community isolation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::scalar::Scalar;

/// Hard partition of a graph's nodes into communities `0..community_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityPartition {
    assignment: Vec<usize>,
    sizes: Vec<usize>,
}

impl CommunityPartition {
    /// Builds a partition from arbitrary labels, renumbering them
    /// `0..community_count` by first appearance in node order.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut remap = std::collections::HashMap::new();
        let mut sizes: Vec<usize> = Vec::new();
        let assignment = labels
            .iter()
            .map(|&l| {
                let c = *remap.entry(l).or_insert_with(|| {
                    sizes.push(0);
                    sizes.len() - 1
                });
                sizes[c] += 1;
                c
            })
            .collect();
        Self { assignment, sizes }
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            sizes: vec![1; n],
        }
    }

    pub fn single(n: usize) -> Self {
        Self {
            assignment: vec![0; n],
            sizes: if n == 0 { vec![] } else { vec![n] },
        }
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn community_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn community_of(&self, v: NodeId) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Node count of every community.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Members of every community, each list in ascending id order.
    pub fn members(&self) -> Vec<Vec<NodeId>> {
        let mut out: Vec<Vec<NodeId>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if self.node_count() == g.node_count() {
            Ok(())
        } else {
            Err(Error::PartitionMismatch {
                expected: g.node_count(),
                got: self.node_count(),
            })
        }
    }
}

/// Newman–Girvan modularity with resolution `gamma`.
pub fn modularity<T: Scalar>(g: &Graph, p: &CommunityPartition, gamma: T) -> Result<T> {
    p.check(g)?;
    if g.edge_count() == 0 {
        return Ok(T::zero());
    }
    let k = p.community_count();
    let mut internal = vec![0usize; k];
    let mut total = vec![0usize; k];
    for v in g.nodes() {
        let c = p.community_of(v);
        total[c] += g.neighbors(v).len();
        internal[c] += g
            .neighbors(v)
            .iter()
            .filter(|&&u| p.community_of(u) == c)
            .count();
    }
    let two_m = T::from_count(2 * g.edge_count());
    Ok(internal
        .iter()
        .zip(&total)
        .map(|(&ic, &tc)| {
            let frac = T::from_count(tc) / two_m;
            T::from_count(ic) / two_m - gamma * frac * frac
        })
        .sum())
}

/// Moves smaller than this (in modularity units) do not count as gains.
const MIN_GAIN: f64 = 1e-9;

/// Weighted graph used between Louvain aggregation levels.
struct Level<T> {
    adj: Vec<Vec<(usize, T)>>,
    /// Weighted degree including twice the self-loop weight.
    strength: Vec<T>,
}

impl<T: Scalar> Level<T> {
    fn from_graph(g: &Graph) -> Self {
        let adj: Vec<Vec<(usize, T)>> = g
            .nodes()
            .map(|v| g.neighbors(v).iter().map(|&u| (u, T::one())).collect())
            .collect();
        let strength = g.degrees().into_iter().map(T::from_count).collect();
        Self { adj, strength }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Collapses each community into one node. Intra-community weight becomes
    /// a self-loop, stored as an adjacency entry to itself.
    fn aggregate(&self, community: &[usize], count: usize) -> Self {
        let mut adj: Vec<Vec<(usize, T)>> = vec![Vec::new(); count];
        let mut strength = vec![T::zero(); count];
        let mut acc = vec![T::zero(); count];
        let mut touched = Vec::new();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (v, &c) in community.iter().enumerate() {
            members[c].push(v);
            strength[c] += self.strength[v];
        }
        for (c, nodes) in members.iter().enumerate() {
            for &v in nodes {
                for &(u, w) in &self.adj[v] {
                    let d = community[u];
                    if acc[d] == T::zero() {
                        touched.push(d);
                    }
                    acc[d] += w;
                }
            }
            touched.sort_unstable();
            for &d in &touched {
                adj[c].push((d, acc[d]));
                acc[d] = T::zero();
            }
            touched.clear();
        }
        Self { adj, strength }
    }
}

/// Louvain modularity optimisation.
///
/// Each level shuffles the visiting order with a generator seeded by
/// `rng_seed`, then sweeps nodes into the neighboring community with the best
/// modularity gain until a sweep moves nothing; communities are then
/// collapsed into a weighted graph and the process repeats until a level
/// makes no move. A node only leaves its community for a strictly better
/// gain; among equally good foreign communities the lowest id wins.
pub fn louvain<T: Scalar>(g: &Graph, rng_seed: u64, resolution: T) -> Result<CommunityPartition> {
    if resolution.is_nan() || resolution <= T::zero() || !resolution.is_finite() {
        return Err(Error::invalid("resolution must be positive"));
    }
    if g.is_empty() {
        return Err(Error::invalid("graph has no nodes"));
    }
    let n = g.node_count();
    if g.edge_count() == 0 {
        return Ok(CommunityPartition::singletons(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut node_community: Vec<usize> = (0..n).collect();
    let mut level = Level::<T>::from_graph(g);
    let two_m: T = level.strength.iter().copied().sum();

    loop {
        let (community, moved) = local_moving(&level, two_m, resolution, &mut rng);
        if !moved {
            break;
        }
        let (dense, count) = renumber(&community);
        for c in &mut node_community {
            *c = dense[*c];
        }
        if count == level.len() {
            break;
        }
        level = level.aggregate(&dense, count);
    }
    Ok(CommunityPartition::from_labels(&node_community))
}

fn renumber(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = vec![usize::MAX; labels.len()];
    let mut next = 0;
    let out = labels
        .iter()
        .map(|&l| {
            if map[l] == usize::MAX {
                map[l] = next;
                next += 1;
            }
            map[l]
        })
        .collect();
    (out, next)
}

fn local_moving<T: Scalar>(
    level: &Level<T>,
    two_m: T,
    gamma: T,
    rng: &mut ChaCha8Rng,
) -> (Vec<usize>, bool) {
    let n = level.len();
    let mut community: Vec<usize> = (0..n).collect();
    let mut total: Vec<T> = level.strength.clone();
    let mut link = vec![T::zero(); n];
    let mut candidates: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let min_gain = T::lit(MIN_GAIN);
    let scale = T::lit(2.0) / two_m;
    let mut any_move = false;

    loop {
        let mut moved = false;
        for &v in &order {
            let own = community[v];
            let k_v = level.strength[v];
            for &(u, w) in &level.adj[v] {
                if u == v {
                    continue;
                }
                let c = community[u];
                if link[c] == T::zero() {
                    candidates.push(c);
                }
                link[c] += w;
            }
            total[own] -= k_v;
            let gain = |c: usize, link_c: T| scale * (link_c - gamma * total[c] * k_v / two_m);
            let mut best = own;
            let mut best_gain = gain(own, link[own]);
            candidates.sort_unstable();
            for &c in &candidates {
                if c == own {
                    continue;
                }
                let g = gain(c, link[c]);
                if g > best_gain + min_gain || (best != own && g > best_gain) {
                    best = c;
                    best_gain = g;
                }
            }
            total[best] += k_v;
            for &c in &candidates {
                link[c] = T::zero();
            }
            link[own] = T::zero();
            candidates.clear();
            if best != own {
                community[v] = best;
                moved = true;
                any_move = true;
            }
        }
        if !moved {
            break;
        }
    }
    (community, any_move)
}

/// One community's induced subgraph with its id maps.
#[derive(Debug, Clone)]
pub struct CommunitySubgraph {
    pub community: usize,
    pub graph: Graph,
    /// Global id of each local node.
    pub local_to_global: Vec<NodeId>,
}

/// Splits `g` into one subgraph per community, keeping only intra-community
/// edges.
pub fn isolate_communities(g: &Graph, p: &CommunityPartition) -> Result<Vec<CommunitySubgraph>> {
    p.check(g)?;
    p.members()
        .into_iter()
        .enumerate()
        .map(|(community, nodes)| {
            Ok(CommunitySubgraph {
                community,
                graph: g.induced_subgraph(&nodes)?,
                local_to_global: nodes,
            })
        })
        .collect()
}

/// Number of edges whose endpoints lie in different communities.
pub fn inter_community_edges(g: &Graph, p: &CommunityPartition) -> usize {
    g.edges()
        .filter(|&(u, v)| p.community_of(u) != p.community_of(v))
        .count()
}
