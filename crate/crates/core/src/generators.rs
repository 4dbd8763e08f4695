//! Deterministic synthetic graphs: small named shapes, random models and the
//! karate-club fixture.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{parse_edge_list, Graph, NodeId, ParseOptions};

const KARATE: &str = include_str!("../data/karate.txt");

/// Zachary's karate club (34 nodes, 78 edges), labels `0..33`.
pub fn karate_club() -> Graph {
    let parsed = parse_edge_list(KARATE, ParseOptions::default()).expect("bundled fixture parses");
    let id = |v: NodeId| parsed.label(v).parse::<usize>().expect("numeric label");
    Graph::from_edges(
        34,
        parsed
            .edges()
            .map(|(u, v)| (id(u), id(v)))
            .collect::<Vec<_>>(),
    )
    .expect("labels are 0..34")
}

pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::from_edges(n, edges.collect::<Vec<_>>()).expect("ids in range")
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("ids in range")
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("ids in range")
}

/// Star with center `0` and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("ids in range")
}

/// Two 4-cliques `{0..3}` and `{4..7}` joined by the single edge `3–4`.
pub fn two_cliques_joined() -> Graph {
    let mut edges = clique_edges(0, 4);
    edges.extend(clique_edges(4, 4));
    edges.push((3, 4));
    Graph::from_edges(8, edges).expect("ids in range")
}

/// Two 4-cliques, each with a peripheral node, and a bridge node touching
/// two different shells on each side.
///
/// Clique A is `0..=3` with peripheral `4` linked to `0` and `1`; clique B is
/// `5..=8` with peripheral `9` linked to `5` and `6`. The bridge `10` links
/// to a clique node and the peripheral node of each side (`2`, `4`, `7`,
/// `9`), so inside either community it reaches the 3-shell and the 2-shell.
/// 11 nodes, 20 edges.
pub fn bridged_cliques() -> (Graph, NodeId) {
    let mut edges = clique_edges(0, 4);
    edges.extend(clique_edges(5, 4));
    edges.extend([
        (0, 4),
        (1, 4),
        (5, 9),
        (6, 9),
        (10, 2),
        (10, 4),
        (10, 7),
        (10, 9),
    ]);
    (Graph::from_edges(11, edges).expect("ids in range"), 10)
}

fn clique_edges(start: usize, size: usize) -> Vec<(NodeId, NodeId)> {
    (start..start + size)
        .flat_map(|u| (u + 1..start + size).map(move |v| (u, v)))
        .collect()
}

/// Erdős–Rényi G(n, p).
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    sample_cells(n, n, p, &mut rng, |i, j| {
        if i < j {
            edges.push((i, j));
        }
    });
    Graph::from_edges(n, edges)
}

/// Planted-partition model with optional designated bridge nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedPartition {
    pub groups: usize,
    pub group_size: usize,
    pub p_in: f64,
    pub p_out: f64,
    /// The last node of each of the first `bridges` groups becomes a bridge.
    pub bridges: usize,
    /// Extra edges from each bridge into every other group, to distinct
    /// uniformly chosen members.
    pub bridge_links: usize,
}

#[derive(Debug, Clone)]
pub struct PlantedGraph {
    pub graph: Graph,
    /// Planted group of every node.
    pub groups: Vec<usize>,
    pub bridges: Vec<NodeId>,
}

impl PlantedPartition {
    pub fn new(groups: usize, group_size: usize, p_in: f64, p_out: f64) -> Self {
        Self {
            groups,
            group_size,
            p_in,
            p_out,
            bridges: 0,
            bridge_links: 0,
        }
    }

    pub fn with_bridges(mut self, bridges: usize, links_per_group: usize) -> Self {
        self.bridges = bridges;
        self.bridge_links = links_per_group;
        self
    }

    pub fn node_count(&self) -> usize {
        self.groups * self.group_size
    }

    pub fn generate(&self, seed: u64) -> Result<PlantedGraph> {
        check_probability(self.p_in)?;
        check_probability(self.p_out)?;
        if self.bridges > self.groups {
            return Err(Error::invalid("more bridges than groups"));
        }
        if self.bridge_links > self.group_size {
            return Err(Error::invalid("bridge_links exceeds group size"));
        }
        let s = self.group_size;
        let n = self.node_count();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for a in 0..self.groups {
            sample_cells(s, s, self.p_in, &mut rng, |i, j| {
                if i < j {
                    edges.push((a * s + i, a * s + j));
                }
            });
            for b in a + 1..self.groups {
                sample_cells(s, s, self.p_out, &mut rng, |i, j| {
                    edges.push((a * s + i, b * s + j));
                });
            }
        }
        let bridges: Vec<NodeId> = (0..self.bridges).map(|g| g * s + s - 1).collect();
        for (g, &b) in bridges.iter().enumerate() {
            for other in (0..self.groups).filter(|&o| o != g) {
                for i in index::sample(&mut rng, s, self.bridge_links) {
                    edges.push((b, other * s + i));
                }
            }
        }
        Ok(PlantedGraph {
            graph: Graph::from_edges(n, edges)?,
            groups: (0..n).map(|v| v / s).collect(),
            bridges,
        })
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("probability {p} outside [0, 1]")))
    }
}

/// Visits each cell of a `rows × cols` grid independently with probability
/// `p`, using geometric skips so sparse grids cost time proportional to the
/// number of hits.
fn sample_cells<F>(rows: usize, cols: usize, p: f64, rng: &mut ChaCha8Rng, mut visit: F)
where
    F: FnMut(usize, usize),
{
    let total = (rows * cols) as u64;
    if p <= 0.0 || total == 0 {
        return;
    }
    if p >= 1.0 {
        for k in 0..total {
            visit((k / cols as u64) as usize, (k % cols as u64) as usize);
        }
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut k: u64 = 0;
    loop {
        let r: f64 = 1.0 - rng.random::<f64>();
        let skip = (r.ln() / log_q).floor();
        if skip >= (total - k) as f64 {
            return;
        }
        k += skip as u64;
        visit((k / cols as u64) as usize, (k % cols as u64) as usize);
        k += 1;
        if k >= total {
            return;
        }
    }
}
