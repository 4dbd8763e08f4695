use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn karate() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/karate.txt")
}

fn cks(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cks"))
        .args(args)
        .output()
        .expect("cks binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn tiny(dir: &Path) -> PathBuf {
    let path = dir.join("tiny.txt");
    std::fs::write(
        &path,
        "# two squares and a link\na b\nb c\nc d\nd a\na c\ne f\nf g\ng h\nh e\ne g\nd e\n",
    )
    .unwrap();
    path
}

#[test]
fn rank_top_five_writes_five_rows_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let input = tiny(dir.path());
    let out = dir.path().join("scores.csv");
    stdout(&cks(&[
        "rank",
        "--input",
        input.to_str().unwrap(),
        "--method",
        "cks",
        "--seed",
        "1",
        "--top",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "rank,node_label,score");
    assert_eq!(lines.len(), 6);
    let manifest: serde_json::Value = serde_json::from_slice(
        &std::fs::read(dir.path().join("scores.csv.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "rank");
    assert_eq!(manifest["nodes"], 8);
    assert_eq!(manifest["parameters"]["seed"], 1);
    assert_eq!(manifest["timing_includes_community_detection"], true);
}

#[test]
fn simulate_with_zero_probability_infects_only_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let seeds = dir.path().join("seeds.txt");
    std::fs::write(&seeds, "0\n33\n5\n").unwrap();
    let text = stdout(&cks(&[
        "simulate",
        "--input",
        karate().to_str().unwrap(),
        "--seeds-file",
        seeds.to_str().unwrap(),
        "--p",
        "0",
        "--runs",
        "3",
        "--seed",
        "7",
    ]));
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "run,infected,fis");
    for row in &rows[1..4] {
        assert_eq!(row.split(',').nth(1), Some("3"));
    }
    assert!(rows[4].starts_with("mean,3.000000,"));
    assert!(rows[5].starts_with("std,"));
}

#[test]
fn seeds_csv_round_trips_into_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let seeds = dir.path().join("seeds.csv");
    let k = karate();
    stdout(&cks(&[
        "seeds",
        "--input",
        k.to_str().unwrap(),
        "--k",
        "4",
        "--method",
        "degree",
        "--seed",
        "0",
        "--out",
        seeds.to_str().unwrap(),
    ]));
    let text = stdout(&cks(&[
        "simulate",
        "--input",
        k.to_str().unwrap(),
        "--seeds-file",
        seeds.to_str().unwrap(),
        "--p",
        "0",
        "--runs",
        "2",
        "--seed",
        "0",
    ]));
    assert!(text.lines().nth(1).unwrap().starts_with("0,4,"));
}

#[test]
fn exit_codes() {
    let k = karate();
    let k = k.to_str().unwrap();
    // Missing file and malformed input.
    assert_eq!(
        cks(&["rank", "--input", "/no/such/file", "--seed", "0"])
            .status
            .code(),
        Some(1)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1 2\nonly-one-token\n").unwrap();
    assert_eq!(
        cks(&["rank", "--input", bad.to_str().unwrap(), "--seed", "0"])
            .status
            .code(),
        Some(1)
    );
    // Invalid parameters.
    for args in [
        vec!["seeds", "--input", k, "--seed", "0"],
        vec![
            "seeds",
            "--input",
            k,
            "--seed",
            "0",
            "--k",
            "2",
            "--fraction",
            "0.1",
        ],
        vec!["seeds", "--input", k, "--seed", "0", "--k", "0"],
        vec!["seeds", "--input", k, "--seed", "0", "--fraction", "1.5"],
        vec!["rank", "--input", k],
        vec!["rank", "--input", k, "--seed", "0", "--resolution", "0"],
        vec![
            "rank", "--input", k, "--seed", "0", "--method", "bc", "--shells", "s.csv",
        ],
        vec![
            "simulate", "--input", k, "--seed", "0", "--k", "2", "--p", "1.5",
        ],
        vec![
            "sweep", "--input", k, "--seed", "0", "--sweep", "p", "--grid", "0.1,0.2", "--p", "0.1",
        ],
        vec![
            "sweep",
            "--input",
            k,
            "--seed",
            "0",
            "--sweep",
            "fraction",
            "--grid",
            "0.1",
            "--fraction",
            "0.1",
        ],
        vec![
            "sweep",
            "--input",
            k,
            "--seed",
            "0",
            "--sweep",
            "p",
            "--grid",
            "0.5:0.1:0.1",
        ],
        vec!["aspl", "--input", k, "--k", "1"],
        vec!["rank", "--input", k, "--seed", "0", "--method", "glr"],
    ] {
        assert_eq!(cks(&args).status.code(), Some(2), "{args:?}");
    }
    let seeds = dir.path().join("unknown.txt");
    std::fs::write(&seeds, "0\nnot-a-node\n").unwrap();
    let out = cks(&[
        "simulate",
        "--input",
        k,
        "--seed",
        "0",
        "--seeds-file",
        seeds.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(cks(&["--help"]).status.code(), Some(0));
}

#[test]
fn outputs_identical_across_thread_counts() {
    let k = karate();
    let k = k.to_str().unwrap();
    let run = |threads: &str| {
        stdout(&cks(&[
            "sweep",
            "--input",
            k,
            "--seed",
            "9",
            "--method",
            "cks,bc,cc,enc",
            "--sweep",
            "p",
            "--grid",
            "0.1:0.5:0.2",
            "--runs",
            "50",
            "--threads",
            threads,
        ]))
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one.lines().count(), 1 + 4 * 3);
}

#[test]
fn aspl_reports_undefined_for_disconnected_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("split.txt");
    std::fs::write(&input, "a b\nc d\n").unwrap();
    let seeds = dir.path().join("seeds.txt");
    std::fs::write(&seeds, "a\nc\n").unwrap();
    let text = stdout(&cks(&[
        "aspl",
        "--input",
        input.to_str().unwrap(),
        "--seeds-file",
        seeds.to_str().unwrap(),
    ]));
    assert_eq!(
        text,
        "method,seed_count,reachable_pairs,unreachable_pairs,aspl\nfile,2,0,1,undefined\n"
    );
}

#[test]
fn json_format_and_shell_files() {
    let dir = tempfile::tempdir().unwrap();
    let shells = dir.path().join("shells.csv");
    let comms = dir.path().join("comms.csv");
    let text = stdout(&cks(&[
        "rank",
        "--input",
        karate().to_str().unwrap(),
        "--seed",
        "0",
        "--format",
        "json",
        "--top",
        "3",
        "--shells",
        shells.to_str().unwrap(),
        "--communities",
        comms.to_str().unwrap(),
    ]));
    let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 3);
    assert_eq!(rows[0]["rank"], 1);
    let shells = std::fs::read_to_string(&shells).unwrap();
    assert_eq!(
        shells.lines().next(),
        Some("node_label,community_id,community_shell,global_shell")
    );
    assert_eq!(shells.lines().count(), 35);
    assert!(dir.path().join("comms.csv.manifest.json").exists());
}

#[test]
fn bench_lists_requested_methods() {
    let text = stdout(&cks(&[
        "bench",
        "--input",
        karate().to_str().unwrap(),
        "--methods",
        "cks,degree",
    ]));
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "method,seconds,nodes,edges");
    assert!(rows[1].starts_with("cks,") && rows[1].ends_with(",34,78"));
    assert!(rows[2].starts_with("degree,"));
}
