use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use cks_core::cks::{analyze, ScoringOptions};
use cks_core::coreness::kshell;
use cks_core::diffusion::monte_carlo;
use cks_core::graph::parse_edge_list_reader;
use cks_core::method::compute;
use cks_core::metrics::{
    aspl_among_seeds, parse_grid, seed_count_for_fraction, sweep_fraction_ranked, sweep_p_ranked,
    time_method,
};
use cks_core::{DiffusionConfig, Graph, Method, MethodParams, NodeId, ParseOptions};

use crate::args::*;
use crate::error::CliError;
use crate::output::{
    fmt6, unix_now, write_atomic, write_manifest, Manifest, Report, Table, WallTimes,
};

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Rank(a) => rank(&a),
        Command::Seeds(a) => seeds(&a),
        Command::Simulate(a) => simulate(&a),
        Command::Sweep(a) => sweep(&a),
        Command::Aspl(a) => aspl(&a),
        Command::Bench(a) => bench(&a),
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn setup_threads(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(invalid("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| invalid(e.to_string()))?;
    }
    Ok(())
}

/// Input graph plus the time spent loading it.
struct Loaded {
    graph: Graph,
    load_secs: f64,
    started: Instant,
}

fn load(io: &IoArgs) -> Result<Loaded, CliError> {
    setup_threads(io.threads)?;
    let started = Instant::now();
    let file = File::open(&io.input)
        .map_err(|e| CliError::Input(format!("{}: {e}", io.input.display())))?;
    let opts = ParseOptions {
        directed: io.directed,
        numeric_labels: io.numeric_labels,
    };
    let graph = parse_edge_list_reader(BufReader::new(file), opts).map_err(|e| match e {
        cks_core::Error::Parse { .. } | cks_core::Error::EmptyGraph | cks_core::Error::Io(_) => {
            CliError::Input(format!("{}: {e}", io.input.display()))
        }
        other => other.into(),
    })?;
    if io.directed {
        eprintln!(
            "note: directed input symmetrized to {} undirected edges",
            graph.edge_count()
        );
    }
    Ok(Loaded {
        graph,
        load_secs: started.elapsed().as_secs_f64(),
        started,
    })
}

/// Writes the main output (file or stdout) and, for files, its manifest.
fn emit<P: Serialize>(
    command: &'static str,
    io: &IoArgs,
    params: &P,
    loaded: &Loaded,
    compute_secs: f64,
    report: &Report,
    summary: Value,
) -> Result<(), CliError> {
    let bytes = report.render(io.format)?;
    match &io.out {
        Some(path) => {
            write_atomic(path, &bytes)?;
            manifest(command, path, params, loaded, compute_secs, summary)?;
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes)?;
        }
    }
    Ok(())
}

fn manifest<P: Serialize>(
    command: &'static str,
    path: &Path,
    params: &P,
    loaded: &Loaded,
    compute_secs: f64,
    summary: Value,
) -> Result<(), CliError> {
    let m = Manifest {
        tool: "cks",
        version: env!("CARGO_PKG_VERSION"),
        command,
        output: path.display().to_string(),
        parameters: params,
        nodes: loaded.graph.node_count(),
        edges: loaded.graph.edge_count(),
        threads: rayon::current_num_threads(),
        timing_includes_community_detection: true,
        wall_seconds: WallTimes {
            load: loaded.load_secs,
            compute: compute_secs,
            total: loaded.started.elapsed().as_secs_f64(),
        },
        timestamp_unix: unix_now(),
        summary,
    };
    write_manifest(path, &m)
}

fn method_params(s: &ScoringArgs, seed: u64) -> Result<MethodParams, CliError> {
    if s.resolution.is_nan() || s.resolution <= 0.0 || !s.resolution.is_finite() {
        return Err(invalid("--resolution must be positive"));
    }
    Ok(MethodParams {
        rng_seed: seed,
        resolution: s.resolution,
        exclude_own_community: s.exclude_own_community,
        enc_mode: s.enc_mode.into(),
    })
}

fn seed_count(size: &SizeArgs, n: usize) -> Result<usize, CliError> {
    match (size.k, size.fraction) {
        (Some(k), None) => {
            if k == 0 || k > n {
                Err(invalid(format!("--k must be in 1..={n}")))
            } else {
                Ok(k)
            }
        }
        (None, Some(f)) => {
            if f > 0.0 && f <= 1.0 {
                Ok(seed_count_for_fraction(n, f))
            } else {
                Err(invalid("--fraction must be in (0, 1]"))
            }
        }
        (Some(_), Some(_)) => Err(invalid("give exactly one of --k and --fraction")),
        (None, None) => Err(invalid("one of --k or --fraction is required")),
    }
}

fn ranking_table(g: &Graph, ranking: &[NodeId], scores: &[f64], limit: usize) -> Report {
    let mut table = Table::new(&["rank", "node_label", "score"]);
    let mut rows = Vec::new();
    for (i, &v) in ranking.iter().take(limit).enumerate() {
        table.push(vec![
            (i + 1).to_string(),
            g.label(v).to_owned(),
            fmt6(scores[v]),
        ]);
        rows.push(json!({"rank": i + 1, "node_label": g.label(v), "score": scores[v]}));
    }
    Report {
        table,
        json: Value::Array(rows),
    }
}

fn rank(a: &RankArgs) -> Result<(), CliError> {
    let loaded = load(&a.io)?;
    let g = &loaded.graph;
    let method: Method = a.scoring.method.into();
    let params = method_params(&a.scoring, a.seed)?;
    if method != Method::Cks && (a.communities.is_some() || a.shells.is_some()) {
        return Err(invalid("--communities and --shells need --method cks"));
    }
    let limit = match a.top {
        Some(0) => return Err(invalid("--top must be at least 1")),
        Some(k) => k.min(g.node_count()),
        None => g.node_count(),
    };
    let started = Instant::now();
    let (table, analysis) = if method == Method::Cks {
        let opts = ScoringOptions {
            exclude_own_community: params.exclude_own_community,
            log_base: None,
        };
        let analysis = analyze::<f64>(g, params.rng_seed, params.resolution, &opts)?;
        (analysis.table.clone(), Some(analysis))
    } else {
        (compute::<f64>(g, method, &params)?.table, None)
    };
    let compute_secs = started.elapsed().as_secs_f64();

    if let Some(analysis) = &analysis {
        let part = &analysis.partition;
        if let Some(path) = &a.communities {
            let mut t = Table::new(&["node_label", "community_id"]);
            for v in g.nodes() {
                t.push(vec![
                    g.label(v).to_owned(),
                    part.community_of(v).to_string(),
                ]);
            }
            write_atomic(path, &t.to_csv()?)?;
            let summary = json!({"communities": part.community_count()});
            manifest("rank", path, a, &loaded, compute_secs, summary)?;
        }
        if let Some(path) = &a.shells {
            let global = kshell(g);
            let mut t = Table::new(&[
                "node_label",
                "community_id",
                "community_shell",
                "global_shell",
            ]);
            for v in g.nodes() {
                t.push(vec![
                    g.label(v).to_owned(),
                    part.community_of(v).to_string(),
                    analysis.community_shells.shell(v).to_string(),
                    global.shell(v).to_string(),
                ]);
            }
            write_atomic(path, &t.to_csv()?)?;
            let summary = json!({
                "max_community_shell": analysis.community_shells.max_shell(),
                "max_global_shell": global.max_shell(),
            });
            manifest("rank", path, a, &loaded, compute_secs, summary)?;
        }
    }

    let report = ranking_table(g, table.ranking(), table.scores(), limit);
    let mut summary = json!({"method": method.as_str(), "rows": limit});
    if let Some(analysis) = &analysis {
        summary["communities"] = json!(analysis.partition.community_count());
    }
    emit("rank", &a.io, a, &loaded, compute_secs, &report, summary)
}

fn seeds(a: &SeedsArgs) -> Result<(), CliError> {
    let loaded = load(&a.io)?;
    let g = &loaded.graph;
    let k = seed_count(&a.size, g.node_count())?;
    let method: Method = a.scoring.method.into();
    let params = method_params(&a.scoring, a.seed)?;
    let started = Instant::now();
    let ranked = compute::<f64>(g, method, &params)?;
    let compute_secs = started.elapsed().as_secs_f64();
    let report = ranking_table(g, ranked.ranking(), ranked.scores(), k);
    let summary = json!({"method": method.as_str(), "seed_count": k});
    emit("seeds", &a.io, a, &loaded, compute_secs, &report, summary)
}

/// Reads seed labels: one per line (first token), or a CSV with a
/// `node_label` column such as the output of `cks seeds`.
fn read_seed_file(path: &Path, g: &Graph) -> Result<Vec<NodeId>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with('%'))
        .collect();
    let labels: Vec<String> = match lines.first() {
        Some(first) if first.split(',').any(|h| h.trim() == "node_label") => {
            let mut rdr = csv::Reader::from_reader(lines.join("\n").as_bytes().to_vec().as_slice())
                .into_records()
                .collect::<Result<Vec<_>, _>>()
                .map(|r| r.into_iter())
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let col = first
                .split(',')
                .position(|h| h.trim() == "node_label")
                .unwrap_or(0);
            let mut out = Vec::new();
            for rec in &mut rdr {
                let label = rec
                    .get(col)
                    .ok_or_else(|| CliError::Input(format!("{}: short record", path.display())))?;
                out.push(label.to_owned());
            }
            out
        }
        _ => lines
            .iter()
            .filter_map(|l| l.split_whitespace().next().map(str::to_owned))
            .collect(),
    };
    let index = g.label_index();
    let mut ids = Vec::with_capacity(labels.len());
    for l in &labels {
        let id = index
            .get(l.as_str())
            .ok_or_else(|| invalid(format!("seed {l:?} is not a node of the graph")))?;
        ids.push(*id);
    }
    if ids.is_empty() {
        return Err(invalid(format!("{} lists no seeds", path.display())));
    }
    Ok(ids)
}

/// Seeds from a file, or from the head of a method's ranking.
fn resolve_seeds(
    g: &Graph,
    file: Option<&Path>,
    scoring: &ScoringArgs,
    size: &SizeArgs,
    louvain_seed: u64,
) -> Result<(Vec<NodeId>, String), CliError> {
    match file {
        Some(path) => {
            if size.k.is_some() || size.fraction.is_some() {
                return Err(invalid("--seeds-file excludes --k/--fraction"));
            }
            Ok((read_seed_file(path, g)?, "file".to_owned()))
        }
        None => {
            let k = seed_count(size, g.node_count())?;
            let method: Method = scoring.method.into();
            let ranked = compute::<f64>(g, method, &method_params(scoring, louvain_seed)?)?;
            Ok((ranked.ranking()[..k].to_vec(), method.as_str().to_owned()))
        }
    }
}

fn simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let loaded = load(&a.io)?;
    let g = &loaded.graph;
    let cfg = DiffusionConfig::new(a.p, a.runs, a.seed);
    cfg.validate()?;
    let started = Instant::now();
    let (seeds, source) = resolve_seeds(g, a.seeds_file.as_deref(), &a.scoring, &a.size, a.seed)?;
    let out = monte_carlo(g, &seeds, &cfg)?;
    let compute_secs = started.elapsed().as_secs_f64();

    let mut table = Table::new(&["run", "infected", "fis"]);
    for run in 0..out.runs() {
        table.push(vec![
            run.to_string(),
            out.infected[run].to_string(),
            fmt6(out.fis(run)),
        ]);
    }
    let n = g.node_count() as f64;
    table.push(vec![
        "mean".into(),
        fmt6(out.mean_infected()),
        fmt6(out.mean_fis),
    ]);
    table.push(vec!["std".into(), fmt6(out.std_fis * n), fmt6(out.std_fis)]);
    let summary = json!({
        "seed_source": source,
        "seed_count": out.seed_count,
        "activation_probability": a.p,
        "runs": out.runs(),
        "mean_fis": out.mean_fis,
        "std_fis": out.std_fis,
    });
    let report = Report {
        table,
        json: json!({
            "seeds": seeds.iter().map(|&v| g.label(v)).collect::<Vec<_>>(),
            "infected": out.infected,
            "mean_fis": out.mean_fis,
            "std_fis": out.std_fis,
        }),
    };
    emit(
        "simulate",
        &a.io,
        a,
        &loaded,
        compute_secs,
        &report,
        summary,
    )
}

fn sweep(a: &SweepArgs) -> Result<(), CliError> {
    let loaded = load(&a.io)?;
    let g = &loaded.graph;
    let grid = parse_grid(&a.grid)?;
    if a.method.is_empty() {
        return Err(invalid("--method needs at least one method"));
    }
    let scoring = |m: MethodArg| ScoringArgs {
        method: m,
        resolution: a.resolution,
        exclude_own_community: a.exclude_own_community,
        enc_mode: a.enc_mode,
    };
    let started = Instant::now();
    let mut results = Vec::new();
    for &m in &a.method {
        let method: Method = m.into();
        let ranked = compute::<f64>(g, method, &method_params(&scoring(m), a.seed)?)?;
        let result = match a.sweep {
            SweepVar::P => {
                if a.p.is_some() {
                    return Err(invalid("--p conflicts with --sweep p; use --grid"));
                }
                let fraction = a.fraction.unwrap_or(cks_core::DEFAULT_SEED_FRACTION);
                let cfg =
                    DiffusionConfig::new(cks_core::DEFAULT_ACTIVATION_PROBABILITY, a.runs, a.seed);
                sweep_p_ranked(g, method.as_str(), ranked.ranking(), &grid, fraction, &cfg)?
            }
            SweepVar::Fraction => {
                if a.fraction.is_some() {
                    return Err(invalid(
                        "--fraction conflicts with --sweep fraction; use --grid",
                    ));
                }
                let p = a.p.unwrap_or(cks_core::DEFAULT_ACTIVATION_PROBABILITY);
                let cfg = DiffusionConfig::new(p, a.runs, a.seed);
                sweep_fraction_ranked(g, method.as_str(), ranked.ranking(), &grid, &cfg)?
            }
        };
        results.push(result);
    }
    let compute_secs = started.elapsed().as_secs_f64();

    let mut table = Table::new(&[
        "method",
        "grid_var",
        "grid_value",
        "mean_fis",
        "std_fis",
        "runs",
    ]);
    for r in &results {
        for pt in &r.points {
            table.push(vec![
                r.method.clone(),
                r.variable.to_string(),
                pt.value.to_string(),
                fmt6(pt.mean_fis),
                fmt6(pt.std_fis),
                pt.runs.to_string(),
            ]);
        }
    }
    let report = Report {
        table,
        json: serde_json::to_value(&results)?,
    };
    let summary = json!({"methods": a.method, "grid": grid, "sweep": a.sweep});
    emit("sweep", &a.io, a, &loaded, compute_secs, &report, summary)
}

fn aspl(a: &AsplArgs) -> Result<(), CliError> {
    let loaded = load(&a.io)?;
    let g = &loaded.graph;
    let started = Instant::now();
    let (seeds, source) = resolve_seeds(g, a.seeds_file.as_deref(), &a.scoring, &a.size, a.seed)?;
    let r = aspl_among_seeds(g, &seeds)?;
    let compute_secs = started.elapsed().as_secs_f64();
    let mut table = Table::new(&[
        "method",
        "seed_count",
        "reachable_pairs",
        "unreachable_pairs",
        "aspl",
    ]);
    table.push(vec![
        source.clone(),
        r.seed_count.to_string(),
        r.reachable_pairs.to_string(),
        r.unreachable_pairs.to_string(),
        r.mean.map_or_else(|| "undefined".to_owned(), fmt6),
    ]);
    let report = Report {
        table,
        json: json!({"method": source, "result": r}),
    };
    let summary = serde_json::to_value(&r)?;
    emit("aspl", &a.io, a, &loaded, compute_secs, &report, summary)
}

fn bench(a: &BenchArgs) -> Result<(), CliError> {
    let loaded = load(&a.io)?;
    let g = &loaded.graph;
    if a.repeat == 0 {
        return Err(invalid("--repeat must be at least 1"));
    }
    let methods: Vec<Method> = if a.methods.is_empty() {
        Method::ALL.to_vec()
    } else {
        a.methods.iter().map(|&m| m.into()).collect()
    };
    let params = MethodParams {
        rng_seed: a.seed,
        resolution: a.resolution,
        exclude_own_community: false,
        enc_mode: a.enc_mode.into(),
    };
    let started = Instant::now();
    let mut table = Table::new(&["method", "seconds", "nodes", "edges"]);
    let mut rows = Vec::new();
    for m in methods {
        let mut best = f64::INFINITY;
        for _ in 0..a.repeat {
            best = best.min(time_method(g, m, &params)?);
        }
        table.push(vec![
            m.as_str().to_owned(),
            format!("{best:.3}"),
            g.node_count().to_string(),
            g.edge_count().to_string(),
        ]);
        rows.push(json!({"method": m.as_str(), "seconds": best}));
    }
    let compute_secs = started.elapsed().as_secs_f64();
    let report = Report {
        table,
        json: Value::Array(rows.clone()),
    };
    emit(
        "bench",
        &a.io,
        a,
        &loaded,
        compute_secs,
        &report,
        Value::Array(rows),
    )
}
