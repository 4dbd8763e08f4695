//! Evaluation metrics: inter-seed distances, FIS sweeps and scoring time.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::diffusion::{monte_carlo, DiffusionConfig};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::method::{compute, Method, MethodParams};

/// Mean hop distance over seed pairs that can reach each other.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsplResult {
    pub seed_count: usize,
    pub reachable_pairs: usize,
    pub unreachable_pairs: usize,
    /// `None` when no pair is connected.
    pub mean: Option<f64>,
}

pub fn aspl_among_seeds(g: &Graph, seeds: &[NodeId]) -> Result<AsplResult> {
    let mut seeds = seeds.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    if seeds.len() < 2 {
        return Err(Error::TooFewSeeds(seeds.len()));
    }
    let mut sum = 0usize;
    let mut reachable = 0usize;
    let mut unreachable = 0usize;
    for (i, &s) in seeds.iter().enumerate() {
        let dist = g.bfs_distances(s)?;
        for &t in &seeds[i + 1..] {
            match dist[t] {
                Some(d) => {
                    sum += d;
                    reachable += 1;
                }
                None => unreachable += 1,
            }
        }
    }
    Ok(AsplResult {
        seed_count: seeds.len(),
        reachable_pairs: reachable,
        unreachable_pairs: unreachable,
        mean: (reachable > 0).then(|| sum as f64 / reachable as f64),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepVariable {
    #[serde(rename = "p")]
    ActivationProbability,
    #[serde(rename = "fraction")]
    SeedFraction,
}

impl SweepVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::ActivationProbability => "p",
            SweepVariable::SeedFraction => "fraction",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(SweepVariable::ActivationProbability),
            "fraction" | "f" => Ok(SweepVariable::SeedFraction),
            _ => Err(Error::invalid(format!("unknown sweep variable {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub value: f64,
    pub seed_count: usize,
    pub mean_fis: f64,
    pub std_fis: f64,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub method: String,
    pub variable: SweepVariable,
    pub points: Vec<SweepPoint>,
}

/// `max(1, round(fraction · n))`, capped at `n`.
pub fn seed_count_for_fraction(node_count: usize, fraction: f64) -> usize {
    ((fraction * node_count as f64).round() as usize).clamp(1, node_count.max(1))
}

fn check_grid(grid: &[f64], valid: impl Fn(f64) -> bool, what: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("sweep grid is empty"));
    }
    if let Some(&bad) = grid.iter().find(|&&x| !valid(x)) {
        return Err(Error::invalid(format!(
            "{what} grid value {bad} out of range"
        )));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("sweep grid must be strictly increasing"));
    }
    Ok(())
}

/// Grid point `i` simulates with master seed `cfg.master_seed + i`, so every
/// method sees the same random streams at the same grid point.
fn point_config(cfg: &DiffusionConfig, index: usize, p: f64) -> DiffusionConfig {
    DiffusionConfig {
        activation_probability: p,
        runs: cfg.runs,
        master_seed: cfg.master_seed.wrapping_add(index as u64),
    }
}

/// FIS as a function of seed fraction, seeds taken from the head of
/// `ranking`, activation probability fixed at `cfg.activation_probability`.
pub fn sweep_fraction_ranked(
    g: &Graph,
    method: &str,
    ranking: &[NodeId],
    fractions: &[f64],
    cfg: &DiffusionConfig,
) -> Result<SweepResult> {
    check_grid(fractions, |f| f > 0.0 && f <= 1.0, "fraction")?;
    cfg.validate()?;
    let points = fractions
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let k = seed_count_for_fraction(g.node_count(), f);
            let out = monte_carlo(
                g,
                &ranking[..k],
                &point_config(cfg, i, cfg.activation_probability),
            )?;
            Ok(SweepPoint {
                value: f,
                seed_count: k,
                mean_fis: out.mean_fis,
                std_fis: out.std_fis,
                runs: cfg.runs,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult {
        method: method.to_owned(),
        variable: SweepVariable::SeedFraction,
        points,
    })
}

/// FIS as a function of activation probability with a fixed seed fraction.
pub fn sweep_p_ranked(
    g: &Graph,
    method: &str,
    ranking: &[NodeId],
    ps: &[f64],
    seed_fraction: f64,
    cfg: &DiffusionConfig,
) -> Result<SweepResult> {
    check_grid(ps, |p| (0.0..=1.0).contains(&p), "probability")?;
    if !(seed_fraction > 0.0 && seed_fraction <= 1.0) {
        return Err(Error::invalid(format!(
            "seed fraction {seed_fraction} outside (0, 1]"
        )));
    }
    if cfg.runs == 0 {
        return Err(Error::invalid("runs must be at least 1"));
    }
    let k = seed_count_for_fraction(g.node_count(), seed_fraction);
    let points = ps
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let out = monte_carlo(g, &ranking[..k], &point_config(cfg, i, p))?;
            Ok(SweepPoint {
                value: p,
                seed_count: k,
                mean_fis: out.mean_fis,
                std_fis: out.std_fis,
                runs: cfg.runs,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult {
        method: method.to_owned(),
        variable: SweepVariable::ActivationProbability,
        points,
    })
}

pub fn sweep_fraction(
    g: &Graph,
    method: Method,
    params: &MethodParams,
    fractions: &[f64],
    cfg: &DiffusionConfig,
) -> Result<SweepResult> {
    let ranked = compute::<f64>(g, method, params)?;
    sweep_fraction_ranked(g, method.as_str(), ranked.ranking(), fractions, cfg)
}

pub fn sweep_p(
    g: &Graph,
    method: Method,
    params: &MethodParams,
    ps: &[f64],
    seed_fraction: f64,
    cfg: &DiffusionConfig,
) -> Result<SweepResult> {
    let ranked = compute::<f64>(g, method, params)?;
    sweep_p_ranked(g, method.as_str(), ranked.ranking(), ps, seed_fraction, cfg)
}

/// Wall-clock seconds of `f`, rounded to milliseconds.
pub fn time_it<R>(f: impl FnOnce() -> R) -> (R, f64) {
    let start = Instant::now();
    let out = f();
    let secs = start.elapsed().as_secs_f64();
    (out, (secs * 1000.0).round() / 1000.0)
}

/// Seconds spent scoring `g` with `method`; for CKS this includes community
/// detection.
pub fn time_method(g: &Graph, method: Method, params: &MethodParams) -> Result<f64> {
    let (out, secs) = time_it(|| compute::<f64>(g, method, params));
    out?;
    Ok(secs)
}

/// Parses `start:stop:step` (inclusive of `stop`) or a comma-separated list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::invalid(format!("malformed grid {text:?}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = text.split(':').collect();
    let grid = match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if step.is_nan()
                || step <= 0.0
                || !start.is_finite()
                || !stop.is_finite()
                || stop < start
            {
                return Err(bad());
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            (0..count)
                .map(|i| round_grid(start + i as f64 * step))
                .collect()
        }
        [_] => text.split(',').map(num).collect::<Result<Vec<_>>>()?,
        _ => return Err(bad()),
    };
    Ok(grid)
}

fn round_grid(x: f64) -> f64 {
    (x * 1e10).round() / 1e10
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusion::exact_expected_spread;
    use crate::generators;
    use proptest::prelude::*;

    /// All-pairs distances by Floyd–Warshall.
    fn floyd(g: &Graph) -> Vec<Vec<Option<usize>>> {
        let n = g.node_count();
        let mut d = vec![vec![None; n]; n];
        for (v, row) in d.iter_mut().enumerate() {
            row[v] = Some(0);
        }
        for (u, v) in g.edges() {
            d[u][v] = Some(1);
            d[v][u] = Some(1);
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                        if d[i][j].is_none_or(|c| a + b < c) {
                            d[i][j] = Some(a + b);
                        }
                    }
                }
            }
        }
        d
    }

    #[test]
    fn aspl_small_cases() {
        let g = generators::path(4);
        let adj = aspl_among_seeds(&g, &[1, 2]).unwrap();
        assert_eq!((adj.mean, adj.unreachable_pairs), (Some(1.0), 0));
        assert_eq!(aspl_among_seeds(&g, &[0, 3]).unwrap().mean, Some(3.0));
        let split = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let r = aspl_among_seeds(&split, &[0, 2]).unwrap();
        assert_eq!(
            (r.mean, r.unreachable_pairs, r.reachable_pairs),
            (None, 1, 0)
        );
        assert!(matches!(
            aspl_among_seeds(&g, &[1]),
            Err(Error::TooFewSeeds(1))
        ));
        assert!(matches!(
            aspl_among_seeds(&g, &[1, 1]),
            Err(Error::TooFewSeeds(1))
        ));
    }

    #[test]
    fn seed_count_rounding() {
        assert_eq!(seed_count_for_fraction(9, 1.0 / 9.0), 1);
        assert_eq!(seed_count_for_fraction(100, 0.001), 1);
        assert_eq!(seed_count_for_fraction(120, 0.05), 6);
        assert_eq!(seed_count_for_fraction(10, 0.25), 3);
        assert_eq!(seed_count_for_fraction(10, 1.0), 10);
    }

    #[test]
    fn full_fraction_at_certain_activation() {
        let g = generators::karate_club();
        let r = sweep_fraction(
            &g,
            Method::Degree,
            &MethodParams::default(),
            &[1.0],
            &DiffusionConfig::new(1.0, 5, 0),
        )
        .unwrap();
        assert_eq!(r.points[0].mean_fis, 1.0);
    }

    #[test]
    fn zero_activation_gives_seed_fraction() {
        let g = generators::karate_club();
        let grid = [0.1, 0.25, 0.5];
        let cfg = DiffusionConfig::new(0.0, 4, 1);
        for m in Method::ALL {
            let r = sweep_fraction(&g, m, &MethodParams::default(), &grid, &cfg).unwrap();
            for pt in &r.points {
                assert_eq!(pt.mean_fis, pt.seed_count as f64 / 34.0);
                assert_eq!(pt.std_fis, 0.0);
            }
        }
    }

    #[test]
    fn p_sweep_endpoints() {
        let g = generators::karate_club();
        let r = sweep_p(
            &g,
            Method::Cks,
            &MethodParams::default(),
            &[0.0, 1.0],
            0.2,
            &DiffusionConfig::new(0.1, 10, 2),
        )
        .unwrap();
        assert_eq!(r.points[0].mean_fis, 7.0 / 34.0);
        assert_eq!(r.points[1].mean_fis, 1.0);
        assert_eq!(r.variable, SweepVariable::ActivationProbability);
    }

    #[test]
    fn p_sweep_is_monotone() {
        let g = generators::karate_club();
        let grid = parse_grid("0.1:0.9:0.1").unwrap();
        let r = sweep_p(
            &g,
            Method::Cks,
            &MethodParams::default(),
            &grid,
            0.2,
            &DiffusionConfig::new(0.1, 400, 5),
        )
        .unwrap();
        for w in r.points.windows(2) {
            let se = w[0].std_fis / (w[0].runs as f64).sqrt();
            assert!(w[1].mean_fis >= w[0].mean_fis - 2.0 * se, "{:?}", w);
        }
    }

    #[test]
    fn bridge_seed_spreads_at_least_as_far_as_top_degree() {
        let (g, x) = generators::bridged_cliques();
        let cks = compute::<f64>(&g, Method::Cks, &MethodParams::default()).unwrap();
        let deg = compute::<f64>(&g, Method::Degree, &MethodParams::default()).unwrap();
        let k = seed_count_for_fraction(g.node_count(), 1.0 / 9.0);
        assert_eq!(cks.ranking()[..k], [x]);
        let a: f64 = exact_expected_spread(&g, &cks.ranking()[..k], 0.5).unwrap();
        let b: f64 = exact_expected_spread(&g, &deg.ranking()[..k], 0.5).unwrap();
        assert!(a >= b, "{a} < {b}");
    }

    #[test]
    fn grids_are_validated() {
        let g = generators::path(4);
        let cfg = DiffusionConfig::default();
        let p = MethodParams::default();
        assert!(sweep_fraction(&g, Method::Degree, &p, &[0.0], &cfg).is_err());
        assert!(sweep_fraction(&g, Method::Degree, &p, &[0.5, 0.2], &cfg).is_err());
        assert!(sweep_fraction(&g, Method::Degree, &p, &[], &cfg).is_err());
        assert!(sweep_p(&g, Method::Degree, &p, &[0.5, 1.2], 0.2, &cfg).is_err());
        assert!(sweep_p(&g, Method::Degree, &p, &[0.5], 0.0, &cfg).is_err());
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(
            parse_grid("0.1:0.5:0.1").unwrap(),
            vec![0.1, 0.2, 0.3, 0.4, 0.5]
        );
        assert_eq!(parse_grid("0.05,0.1,0.2").unwrap(), vec![0.05, 0.1, 0.2]);
        assert_eq!(parse_grid("0.3").unwrap(), vec![0.3]);
        assert!(parse_grid("0.1:0.5").is_err());
        assert!(parse_grid("0.1:0.5:0").is_err());
        assert!(parse_grid("a,b").is_err());
    }

    #[test]
    fn timing_is_recorded() {
        let g = generators::karate_club();
        for m in Method::ALL {
            let secs = time_method(&g, m, &MethodParams::default()).unwrap();
            assert!((0.0..5.0).contains(&secs));
        }
        let ((), secs) = time_it(|| ());
        assert_eq!(secs, 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn aspl_matches_floyd(n in 2usize..60, p in 0.02f64..0.3, seed in 0u64..5000, stride in 1usize..7) {
            let g = generators::erdos_renyi(n, p, seed).unwrap();
            let seeds: Vec<usize> = (0..n).step_by(stride).collect();
            prop_assume!(seeds.len() >= 2);
            let r = aspl_among_seeds(&g, &seeds).unwrap();
            let d = floyd(&g);
            let mut sum = 0;
            let mut reach = 0;
            let mut miss = 0;
            for (i, &a) in seeds.iter().enumerate() {
                for &b in &seeds[i + 1..] {
                    match d[a][b] { Some(x) => { sum += x; reach += 1; } None => miss += 1 }
                }
            }
            prop_assert_eq!(r.reachable_pairs, reach);
            prop_assert_eq!(r.unreachable_pairs, miss);
            prop_assert_eq!(reach + miss, seeds.len() * (seeds.len() - 1) / 2);
            prop_assert_eq!(r.mean, (reach > 0).then(|| sum as f64 / reach as f64));
            if let Some(m) = r.mean { prop_assert!(m >= 1.0); }
        }

        #[test]
        fn nested_seed_sets_spread_further(seed in 0u64..200) {
            let g = generators::karate_club();
            let cfg = DiffusionConfig::new(0.1, 400, seed);
            let small = monte_carlo(&g, &[0, 33], &cfg).unwrap();
            let large = monte_carlo(&g, &[0, 33, 2, 5], &cfg).unwrap();
            prop_assert!(large.mean_fis >= small.mean_fis - 2.0 * small.std_error_fis());
        }
    }
}
