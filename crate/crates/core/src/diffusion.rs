//! Independent Cascade simulation and its exact live-edge expectation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffusionConfig {
    pub activation_probability: f64,
    pub runs: usize,
    pub master_seed: u64,
}

impl Default for DiffusionConfig {
    fn default() -> Self {
        Self {
            activation_probability: crate::DEFAULT_ACTIVATION_PROBABILITY,
            runs: crate::DEFAULT_RUNS,
            master_seed: 0,
        }
    }
}

impl DiffusionConfig {
    pub fn new(activation_probability: f64, runs: usize, master_seed: u64) -> Self {
        Self {
            activation_probability,
            runs,
            master_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_probability(self.activation_probability)?;
        if self.runs == 0 {
            return Err(Error::invalid("runs must be at least 1"));
        }
        Ok(())
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "activation probability {p} outside [0, 1]"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffusionOutcome {
    pub node_count: usize,
    pub seed_count: usize,
    /// Final active-set size of every run, indexed by run.
    pub infected: Vec<usize>,
    pub mean_fis: f64,
    /// Sample standard deviation (zero for a single run).
    pub std_fis: f64,
}

impl DiffusionOutcome {
    fn from_counts(node_count: usize, seed_count: usize, infected: Vec<usize>) -> Self {
        // Moments in count space, scaled once, so constant runs give std 0.
        let n = node_count as f64;
        let runs = infected.len() as f64;
        let mean_count = infected.iter().sum::<usize>() as f64 / runs;
        let mean_fis = mean_count / n;
        let std_fis = if infected.len() > 1 {
            let ss: f64 = infected
                .iter()
                .map(|&c| (c as f64 - mean_count).powi(2))
                .sum();
            (ss / (runs - 1.0)).sqrt() / n
        } else {
            0.0
        };
        Self {
            node_count,
            seed_count,
            infected,
            mean_fis,
            std_fis,
        }
    }

    pub fn runs(&self) -> usize {
        self.infected.len()
    }

    pub fn fis(&self, run: usize) -> f64 {
        self.infected[run] as f64 / self.node_count as f64
    }

    pub fn mean_infected(&self) -> f64 {
        self.mean_fis * self.node_count as f64
    }

    pub fn std_error_fis(&self) -> f64 {
        self.std_fis / (self.runs() as f64).sqrt()
    }
}

/// Sorted, duplicate-free seed ids; errors on empty or out-of-range input.
fn normalize_seeds(g: &Graph, seeds: &[NodeId]) -> Result<Vec<NodeId>> {
    if seeds.is_empty() {
        return Err(Error::EmptySeeds);
    }
    for &s in seeds {
        g.check(s)?;
    }
    let mut out = seeds.to_vec();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// One Independent Cascade.
///
/// Seeds start active. In every round each node activated in the previous
/// round, taken in ascending id order, gets one Bernoulli(`p`) attempt on
/// each still-inactive neighbor, in ascending neighbor order. The cascade
/// stops after a round activates nobody. Returns the final active set,
/// sorted.
pub fn ic_run<R: Rng + ?Sized>(
    g: &Graph,
    seeds: &[NodeId],
    p: f64,
    rng: &mut R,
) -> Result<Vec<NodeId>> {
    check_probability(p)?;
    let seeds = normalize_seeds(g, seeds)?;
    let mut active = vec![false; g.node_count()];
    cascade(g, &seeds, p, rng, &mut active);
    Ok(g.nodes().filter(|&v| active[v]).collect())
}

fn cascade<R: Rng + ?Sized>(
    g: &Graph,
    seeds: &[NodeId],
    p: f64,
    rng: &mut R,
    active: &mut [bool],
) -> usize {
    let mut frontier: Vec<NodeId> = seeds.to_vec();
    for &s in seeds {
        active[s] = true;
    }
    let mut count = frontier.len();
    let mut next = Vec::new();
    while !frontier.is_empty() {
        for &v in &frontier {
            for &u in g.neighbors(v) {
                if !active[u] && rng.random::<f64>() < p {
                    active[u] = true;
                    next.push(u);
                }
            }
        }
        next.sort_unstable();
        count += next.len();
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    count
}

/// Generator for run `run` under `master_seed`: one ChaCha stream per run.
pub fn run_rng(master_seed: u64, run: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(run as u64);
    rng
}

/// `cfg.runs` independent cascades; run `i` draws from `run_rng(seed, i)`, so
/// the outcome does not depend on scheduling or thread count.
pub fn monte_carlo(g: &Graph, seeds: &[NodeId], cfg: &DiffusionConfig) -> Result<DiffusionOutcome> {
    cfg.validate()?;
    let seeds = normalize_seeds(g, seeds)?;
    let infected: Vec<usize> = (0..cfg.runs)
        .into_par_iter()
        .map_init(
            || vec![false; g.node_count()],
            |active, run| {
                active.iter_mut().for_each(|a| *a = false);
                let mut rng = run_rng(cfg.master_seed, run);
                cascade(g, &seeds, cfg.activation_probability, &mut rng, active)
            },
        )
        .collect();
    Ok(DiffusionOutcome::from_counts(
        g.node_count(),
        seeds.len(),
        infected,
    ))
}

/// Largest edge count [`exact_expected_spread`] enumerates.
pub const MAX_EXACT_EDGES: usize = 20;

/// Expected final active-set size by summing over all live-edge subgraphs:
/// each edge is live with probability `p`, and the cascade reaches exactly
/// the nodes connected to a seed through live edges.
pub fn exact_expected_spread<T: Scalar>(g: &Graph, seeds: &[NodeId], p: T) -> Result<T> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::invalid("activation probability outside [0, 1]"));
    }
    let seeds = normalize_seeds(g, seeds)?;
    let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    if edges.len() > MAX_EXACT_EDGES {
        return Err(Error::TooManyEdges {
            edges: edges.len(),
            max: MAX_EXACT_EDGES,
        });
    }
    let n = g.node_count();
    let mut incident: Vec<Vec<(usize, NodeId)>> = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        incident[u].push((i, v));
        incident[v].push((i, u));
    }
    let q = T::one() - p;
    let mut expected = T::zero();
    let mut reached = vec![false; n];
    let mut stack = Vec::new();
    for mask in 0u32..(1u32 << edges.len()) {
        let live = mask.count_ones() as i32;
        let prob = p.powi(live) * q.powi(edges.len() as i32 - live);
        if prob == T::zero() {
            continue;
        }
        reached.iter_mut().for_each(|r| *r = false);
        let mut count = 0;
        for &s in &seeds {
            reached[s] = true;
            stack.push(s);
            count += 1;
        }
        while let Some(v) = stack.pop() {
            for &(e, u) in &incident[v] {
                if mask & (1 << e) != 0 && !reached[u] {
                    reached[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        expected += prob * T::from_count(count);
    }
    Ok(expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn zero_probability_infects_only_seeds() {
        let g = generators::karate_club();
        let mut rng = run_rng(1, 0);
        assert_eq!(ic_run(&g, &[5, 2], 0.0, &mut rng).unwrap(), vec![2, 5]);
        let out = monte_carlo(&g, &[0, 33], &DiffusionConfig::new(0.0, 7, 3)).unwrap();
        assert_abs_diff_eq!(out.mean_fis, 2.0 / 34.0, epsilon = 1e-15);
        assert_eq!(out.std_fis, 0.0);
        assert!(out.infected.iter().all(|&c| c == 2));
    }

    #[test]
    fn certain_probability_fills_components() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let mut rng = run_rng(1, 0);
        assert_eq!(ic_run(&g, &[1], 1.0, &mut rng).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn single_edge_support() {
        let g = generators::path(2);
        let mut seen = [false; 2];
        for run in 0..64 {
            let out = ic_run(&g, &[0], 0.5, &mut run_rng(5, run)).unwrap();
            match out.as_slice() {
                [0] => seen[0] = true,
                [0, 1] => seen[1] = true,
                other => panic!("impossible outcome {other:?}"),
            }
        }
        assert_eq!(seen, [true, true]);
    }

    #[test]
    fn ic_rejects_bad_input() {
        let g = generators::path(3);
        let mut rng = run_rng(0, 0);
        assert!(matches!(
            ic_run(&g, &[], 0.5, &mut rng),
            Err(Error::EmptySeeds)
        ));
        assert!(ic_run(&g, &[0], 1.5, &mut rng).is_err());
        assert!(ic_run(&g, &[0], -0.1, &mut rng).is_err());
        assert!(ic_run(&g, &[7], 0.5, &mut rng).is_err());
        assert!(monte_carlo(&g, &[0], &DiffusionConfig::new(0.5, 0, 0)).is_err());
    }

    #[test]
    fn exact_spread_reference_values() {
        let edge = generators::path(2);
        for p in [0.0, 0.3, 0.5, 1.0] {
            assert_abs_diff_eq!(
                exact_expected_spread(&edge, &[0], p).unwrap(),
                1.0 + p,
                epsilon = 1e-15
            );
        }
        let p3 = generators::path(3);
        assert_abs_diff_eq!(
            exact_expected_spread(&p3, &[0], 0.5).unwrap(),
            1.75,
            epsilon = 1e-15
        );
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_abs_diff_eq!(
            exact_expected_spread(&g, &[0], 1.0).unwrap(),
            3.0,
            epsilon = 1e-15
        );
        assert!(matches!(
            exact_expected_spread(&generators::complete(7), &[0], 0.5),
            Err(Error::TooManyEdges { edges: 21, .. })
        ));
    }

    #[test]
    fn triangle_exact_by_hand() {
        // Seed a; b reached unless both a–b and the detour a–c–b are dead:
        // P(b) = 1 − (1−p)(1 − p²). Same for c.
        let p: f64 = 0.5;
        let expected = 1.0 + 2.0 * (1.0 - (1.0 - p) * (1.0 - p * p));
        let got = exact_expected_spread(&generators::complete(3), &[0], p).unwrap();
        assert_abs_diff_eq!(got, expected, epsilon = 1e-14);
    }

    #[test]
    fn single_edge_monte_carlo() {
        let out = monte_carlo(
            &generators::path(2),
            &[0],
            &DiffusionConfig::new(0.5, 10_000, 17),
        )
        .unwrap();
        assert!((out.mean_fis - 0.75).abs() < 0.02, "{}", out.mean_fis);
    }

    #[test]
    fn triangle_monte_carlo() {
        let g = generators::complete(3);
        let exact: f64 = exact_expected_spread(&g, &[0], 0.5).unwrap();
        let out = monte_carlo(&g, &[0], &DiffusionConfig::new(0.5, 20_000, 23)).unwrap();
        assert!(
            (out.mean_infected() - exact).abs() < 0.03,
            "{} vs {exact}",
            out.mean_infected()
        );
    }

    #[test]
    fn monte_carlo_is_thread_independent() {
        let g = generators::karate_club();
        let cfg = DiffusionConfig::new(0.2, 300, 99);
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let wide = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = serial.install(|| monte_carlo(&g, &[0, 33], &cfg).unwrap());
        let b = wide.install(|| monte_carlo(&g, &[33, 0], &cfg).unwrap());
        assert_eq!(a, b);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn outcome_bounds(n in 2usize..40, p in 0.05f64..0.4, seed in 0u64..1000, ap in 0.0f64..=1.0) {
            let g = generators::erdos_renyi(n, p, seed).unwrap();
            let seeds = [0, n / 2];
            let out = monte_carlo(&g, &seeds, &DiffusionConfig::new(ap, 20, seed)).unwrap();
            let k = if n / 2 == 0 { 1 } else { 2 };
            for &c in &out.infected {
                prop_assert!(c >= k && c <= n);
            }
            prop_assert!(out.mean_fis > 0.0 && out.mean_fis <= 1.0);
        }

        #[test]
        fn exact_spread_monotone_in_p(n in 2usize..9, seed in 0u64..1000, p in 0.0f64..0.9) {
            let g = generators::erdos_renyi(n, 0.4, seed).unwrap();
            prop_assume!(g.edge_count() <= MAX_EXACT_EDGES);
            let lo: f64 = exact_expected_spread(&g, &[0], p).unwrap();
            let hi: f64 = exact_expected_spread(&g, &[0], p + 0.1).unwrap();
            prop_assert!(hi >= lo - 1e-12);
        }
    }
}
