//! K-shell (core number) decomposition, globally and inside communities.

use rayon::prelude::*;

use crate::community::{isolate_communities, CommunityPartition};
use crate::error::Result;
use crate::graph::Graph;

/// Shell index of every node of the graph it was computed on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShellAssignment {
    shell: Vec<usize>,
    max_shell: usize,
}

impl ShellAssignment {
    pub fn from_shells(shell: Vec<usize>) -> Self {
        let max_shell = shell.iter().copied().max().unwrap_or(0);
        Self { shell, max_shell }
    }

    pub fn shell(&self, v: usize) -> usize {
        self.shell[v]
    }

    pub fn shells(&self) -> &[usize] {
        &self.shell
    }

    pub fn max_shell(&self) -> usize {
        self.max_shell
    }

    pub fn len(&self) -> usize {
        self.shell.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shell.is_empty()
    }
}

/// Core numbers by the linear-time bucket algorithm of Batagelj and Zaveršnik.
///
/// Nodes are kept sorted by current degree in one array with bucket start
/// offsets; removing the minimum-degree node and decrementing a neighbor's
/// degree is a constant-time swap to the front of the neighbor's bucket.
pub fn kshell(g: &Graph) -> ShellAssignment {
    let n = g.node_count();
    let mut degree = g.degrees();
    let max_degree = degree.iter().copied().max().unwrap_or(0);

    let mut bin = vec![0usize; max_degree + 1];
    for &d in &degree {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut order = vec![0usize; n];
    let mut pos = vec![0usize; n];
    for v in 0..n {
        pos[v] = bin[degree[v]];
        order[pos[v]] = v;
        bin[degree[v]] += 1;
    }
    for d in (1..=max_degree).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;

    for i in 0..n {
        let v = order[i];
        for &u in g.neighbors(v) {
            if degree[u] > degree[v] {
                let du = degree[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = order[pw];
                if u != w {
                    order.swap(pu, pw);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                bin[du] += 1;
                degree[u] -= 1;
            }
        }
    }
    ShellAssignment::from_shells(degree)
}

/// Shell index of every node inside its own community, after all
/// inter-community edges are removed. Communities are decomposed in parallel.
pub fn community_kshell(g: &Graph, p: &CommunityPartition) -> Result<ShellAssignment> {
    let subgraphs = isolate_communities(g, p)?;
    let per_community: Vec<ShellAssignment> =
        subgraphs.par_iter().map(|s| kshell(&s.graph)).collect();
    let mut shell = vec![0; g.node_count()];
    for (sub, shells) in subgraphs.iter().zip(&per_community) {
        for (local, &global) in sub.local_to_global.iter().enumerate() {
            shell[global] = shells.shell(local);
        }
    }
    Ok(ShellAssignment::from_shells(shell))
}
