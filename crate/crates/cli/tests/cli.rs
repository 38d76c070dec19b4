//! End-to-end tests of the command-line surface: file formats, output
//! shapes, and the 0/1/2 exit-code contract.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_arbo-sample"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path_str(p: &Path) -> String {
    p.to_str().unwrap().to_string()
}

#[test]
fn gen_writes_edge_list_and_meta_sidecar() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("star.txt");
    let res = run(&[
        "gen", "--family", "star", "--params", "n=9", "--out", &path_str(&out),
    ]);
    assert!(res.status.success(), "{res:?}");
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("n=9\n"));
    assert_eq!(text.lines().count(), 9); // header + 8 edges
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("star.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["n"], 9);
    assert_eq!(meta["m"], 8);
    assert_eq!(meta["declared_alpha"], 1);
}

#[test]
fn gen_rejects_unknown_family_with_exit_2() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.txt");
    let res = run(&["gen", "--family", "moebius", "--out", &path_str(&out)]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn layering_prints_levels_and_depth() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("star.txt");
    run(&["gen", "--family", "star", "--params", "n=9", "--out", &path_str(&graph)]);
    let res = run(&[
        "layering", &path_str(&graph), "--theta", "2", "--beta", "0.1",
    ]);
    assert!(res.status.success());
    let text = stdout(&res);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[0], "0 1"); // the center sits at level 1
    assert_eq!(lines[1], "1 0");
    assert_eq!(*lines.last().unwrap(), "depth=1");

    // auto mode derives theta/beta from alpha and eps
    let res = run(&[
        "layering", &path_str(&graph), "--auto", "--alpha", "1", "--eps", "0.5",
    ]);
    assert!(res.status.success());
    assert!(stdout(&res).ends_with("depth=0\n")); // theta = 32 covers degree 8
}

#[test]
fn layering_flags_uncoverable_graph_with_exit_1() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("k5.txt");
    run(&["gen", "--family", "complete", "--params", "n=5", "--out", &path_str(&graph)]);
    let res = run(&[
        "layering", &path_str(&graph), "--theta", "1", "--beta", "0.01",
    ]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn sample_emits_edge_attempt_query_lines() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("path.txt");
    run(&["gen", "--family", "path", "--params", "n=16", "--out", &path_str(&graph)]);
    for algo in ["paper", "rejection", "tvd"] {
        let res = run(&[
            "sample", &path_str(&graph), "--alpha", "1", "--eps", "0.5",
            "--count", "5", "--seed", "3", "--algo", algo,
        ]);
        assert!(res.status.success(), "{algo}: {res:?}");
        let text = stdout(&res);
        assert_eq!(text.lines().count(), 5, "{algo}");
        for line in text.lines() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            assert_eq!(fields.len(), 4, "{algo}: {line:?}");
            let u: u32 = fields[0].parse().unwrap();
            let v: u32 = fields[1].parse().unwrap();
            assert!(u < 16 && v < 16 && u.abs_diff(v) == 1, "{algo}: not an edge: {line}");
            let _attempts: u64 = fields[2].parse().unwrap();
            let _queries: u64 = fields[3].parse().unwrap();
        }
    }
}

#[test]
fn sample_is_seed_reproducible() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("g.txt");
    run(&["gen", "--family", "alpha_forests", "--params", "n=32,alpha=2", "--seed", "9", "--out", &path_str(&graph)]);
    let args = [
        "sample", &path_str(&graph), "--alpha", "2", "--eps", "0.5",
        "--count", "10", "--seed", "123",
    ];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn analyze_reports_pass_and_writes_json() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("tree.txt");
    run(&["gen", "--family", "kary_tree", "--params", "k=4,depth=3", "--out", &path_str(&graph)]);
    let report_path = dir.path().join("report.json");
    let res = run(&[
        "analyze", &path_str(&graph), "--alpha", "1", "--eps", "0.1",
        "--out", &path_str(&report_path),
    ]);
    assert!(res.status.success(), "{res:?}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["n"], 53);
    assert_eq!(report["per_edge"].as_array().unwrap().len(), 2 * 52);
    assert_eq!(report["certificate"]["edge_range_ok"], true);
}

#[test]
fn analyze_flags_misdeclared_arboricity_with_exit_1() {
    // K_64 declared alpha=1: theta lands below the minimum degree, no
    // layered partition exists, certification is unavailable.
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("k64.txt");
    run(&["gen", "--family", "complete", "--params", "n=64", "--out", &path_str(&graph)]);
    let res = run(&[
        "analyze", &path_str(&graph), "--alpha", "1", "--eps", "0.5",
        "--out", &path_str(&dir.path().join("r.json")),
    ]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn verify_passes_on_single_edge() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("e.txt");
    std::fs::write(&graph, "0 1\n").unwrap();
    let report_path = dir.path().join("verify.json");
    let res = run(&[
        "verify", &path_str(&graph), "--alpha", "1", "--eps", "0.5",
        "--trials", "50000", "--seed", "11", "--out", &path_str(&report_path),
    ]);
    assert!(res.status.success(), "{res:?}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["all_within_5_sigma"], true);
    assert_eq!(report["trials"], 50000);
}

#[test]
fn bench_writes_versioned_csv() {
    let dir = TempDir::new().unwrap();
    let spec_path = dir.path().join("bench.json");
    std::fs::write(
        &spec_path,
        r#"{"eps": 0.5, "trials": 20, "seed": 4, "specs": [
            {"family": "path", "params": {"n": 32}},
            {"family": "matching_plus_regular", "params": {"n": 32, "alpha_tilde": 4}}
        ]}"#,
    )
    .unwrap();
    let csv_path = dir.path().join("out.csv");
    let res = run(&["bench", "--spec", &path_str(&spec_path), "--out", &path_str(&csv_path)]);
    assert!(res.status.success(), "{res:?}");
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "# bench-csv v1");
    assert!(lines.next().unwrap().starts_with("family,"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn estimate_m_emits_json_interval() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("p.txt");
    run(&["gen", "--family", "path", "--params", "n=64", "--out", &path_str(&graph)]);
    let res = run(&[
        "estimate-m", &path_str(&graph), "--alpha", "1", "--eps", "0.5",
        "--attempts", "200000", "--seed", "2",
    ]);
    assert!(res.status.success());
    let est: serde_json::Value = serde_json::from_str(stdout(&res).trim()).unwrap();
    let point = est["point"].as_f64().unwrap();
    // true m = 63; generous statistical corridor
    assert!((point - 63.0).abs() < 15.0, "estimate {point}");
    assert!(est["lower"].as_f64().unwrap() <= point);
    assert!(est["upper"].as_f64().unwrap() >= point);
}

#[test]
fn malformed_graph_file_is_exit_2() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("bad.txt");
    std::fs::write(&graph, "0 0\n").unwrap();
    for args in [
        vec!["analyze", &path_str(&graph), "--alpha", "1", "--eps", "0.5", "--out", "/dev/null"],
        vec!["sample", &path_str(&graph), "--alpha", "1", "--eps", "0.5"],
        vec!["layering", &path_str(&graph), "--theta", "2", "--beta", "0.1"],
    ] {
        let owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
        assert_eq!(run(&refs).status.code(), Some(2), "{owned:?}");
    }
}

#[test]
fn empty_graph_sampling_is_flagged_not_crashed() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("empty.txt");
    std::fs::write(&graph, "n=8\n").unwrap();
    let res = run(&[
        "sample", &path_str(&graph), "--alpha", "1", "--eps", "0.5", "--count", "1",
    ]);
    assert_eq!(res.status.code(), Some(1));
}
