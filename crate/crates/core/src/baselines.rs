//! Comparison centralities: betweenness, closeness, extended neighborhood
//! coreness, degree and global K-shell.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::cks::ScoreTable;
use crate::coreness::kshell;
use crate::graph::Graph;
use crate::method::{EncMode, Method};
use crate::scalar::Scalar;

/// Scores of one centrality method, ranked like [`ScoreTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityResult<T> {
    pub method: Method,
    pub table: ScoreTable<T>,
}

impl<T: Scalar> CentralityResult<T> {
    fn new(method: Method, scores: Vec<T>) -> Self {
        Self {
            method,
            table: ScoreTable::from_scores(scores),
        }
    }

    pub fn scores(&self) -> &[T] {
        self.table.scores()
    }

    pub fn ranking(&self) -> &[usize] {
        self.table.ranking()
    }
}

/// Sources per parallel work unit in Brandes; partial sums are folded in
/// chunk order so results do not depend on the worker count.
const BRANDES_CHUNK: usize = 64;

/// Unnormalised shortest-path betweenness (Brandes), each unordered pair
/// counted once.
pub fn betweenness<T: Scalar>(g: &Graph) -> CentralityResult<T> {
    let n = g.node_count();
    let sources: Vec<usize> = g.nodes().collect();
    let partials: Vec<Vec<T>> = sources
        .par_chunks(BRANDES_CHUNK)
        .map(|chunk| {
            let mut acc = vec![T::zero(); n];
            let mut state = BrandesState::new(n);
            for &s in chunk {
                state.accumulate(g, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![T::zero(); n];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    let half = T::lit(0.5);
    for t in &mut total {
        *t *= half;
    }
    CentralityResult::new(Method::Betweenness, total)
}

struct BrandesState<T> {
    stack: Vec<usize>,
    dist: Vec<usize>,
    sigma: Vec<T>,
    delta: Vec<T>,
    queue: VecDeque<usize>,
}

impl<T: Scalar> BrandesState<T> {
    fn new(n: usize) -> Self {
        Self {
            stack: Vec::with_capacity(n),
            dist: vec![usize::MAX; n],
            sigma: vec![T::zero(); n],
            delta: vec![T::zero(); n],
            queue: VecDeque::with_capacity(n),
        }
    }

    fn accumulate(&mut self, g: &Graph, s: usize, acc: &mut [T]) {
        for &v in &self.stack {
            self.dist[v] = usize::MAX;
            self.sigma[v] = T::zero();
            self.delta[v] = T::zero();
        }
        self.stack.clear();
        self.dist[s] = 0;
        self.sigma[s] = T::one();
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.stack.push(v);
            for &w in g.neighbors(v) {
                if self.dist[w] == usize::MAX {
                    self.dist[w] = self.dist[v] + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w] == self.dist[v] + 1 {
                    let sv = self.sigma[v];
                    self.sigma[w] += sv;
                }
            }
        }
        // Predecessors are recovered from distances instead of stored lists.
        for &w in self.stack.iter().rev() {
            let coeff = (T::one() + self.delta[w]) / self.sigma[w];
            for &v in g.neighbors(w) {
                if self.dist[v] != usize::MAX && self.dist[v] + 1 == self.dist[w] {
                    let add = self.sigma[v] * coeff;
                    self.delta[v] += add;
                }
            }
            if w != s {
                acc[w] += self.delta[w];
            }
        }
    }
}

/// Closeness within the reachable set, scaled by the reachable fraction:
/// `((r−1)/Σd) · ((r−1)/(n−1))`, where `r` counts nodes reachable from `v`
/// including itself.
pub fn closeness<T: Scalar>(g: &Graph) -> CentralityResult<T> {
    let n = g.node_count();
    let scores = g
        .nodes()
        .into_par_iter()
        .map(|v| {
            let dist = g.bfs_distances(v).expect("node in range");
            let (reach, total) = dist
                .iter()
                .flatten()
                .fold((0usize, 0usize), |(r, t), &d| (r + 1, t + d));
            if total == 0 || n < 2 {
                return T::zero();
            }
            let others = T::from_count(reach - 1);
            (others / T::from_count(total)) * (others / T::from_count(n - 1))
        })
        .collect();
    CentralityResult::new(Method::Closeness, scores)
}

/// Neighborhood coreness over global K-shell indices. `Basic` sums the
/// neighbors' shells; `Extended` sums the neighbors' basic scores.
pub fn enc<T: Scalar>(g: &Graph, mode: EncMode) -> CentralityResult<T> {
    let shells = kshell(g);
    let basic: Vec<usize> = g
        .nodes()
        .map(|v| g.neighbors(v).iter().map(|&u| shells.shell(u)).sum())
        .collect();
    let scores = match mode {
        EncMode::Basic => basic.iter().map(|&s| T::from_count(s)).collect(),
        EncMode::Extended => g
            .nodes()
            .map(|v| T::from_count(g.neighbors(v).iter().map(|&u| basic[u]).sum()))
            .collect(),
    };
    CentralityResult::new(Method::Enc, scores)
}

pub fn degree_centrality<T: Scalar>(g: &Graph) -> CentralityResult<T> {
    CentralityResult::new(
        Method::Degree,
        g.degrees().into_iter().map(T::from_count).collect(),
    )
}

pub fn kshell_centrality<T: Scalar>(g: &Graph) -> CentralityResult<T> {
    CentralityResult::new(
        Method::Kshell,
        kshell(g)
            .shells()
            .iter()
            .map(|&s| T::from_count(s))
            .collect(),
    )
}
