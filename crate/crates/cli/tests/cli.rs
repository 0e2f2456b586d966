//! End-to-end tests of the `gcsq` binary: file outputs, stdout contracts,
//! exit codes, and manifest-driven reproducibility.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gcsq_core::graph::{read_graph_csv, read_partition_json, write_graph_csv};
use gcsq_core::SignedGraph;

fn gcsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcsq"))
        .args(args)
        .output()
        .expect("spawning gcsq")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn fixture_prices() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/prices_hourly.csv")
}

/// The worked 3-vertex graph: one strong positive pair, vertex 3 repelled.
fn write_triangle(dir: &Path) -> PathBuf {
    let g = SignedGraph::from_edges(3, &[(0, 1, 0.9), (0, 2, -0.5), (1, 2, -0.4)]).unwrap();
    let path = dir.join("triangle.csv");
    write_graph_csv(&path, &g).unwrap();
    path
}

#[test]
fn synth_writes_graph_truth_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = gcsq(&["synth", "--n", "10", "--k", "2", "--seed", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let graph = dir.path().join("graph_n10_k2_s1.csv");
    let truth = dir.path().join("truth_n10_k2_s1.json");
    let manifest = dir.path().join("manifest.json");
    assert!(graph.is_file() && truth.is_file() && manifest.is_file());

    let g = read_graph_csv(&graph).unwrap();
    assert_eq!(g.n(), 10);
    let t = read_partition_json(&truth).unwrap();
    assert_eq!(t.n(), 10);
    assert_eq!(t.k(), 2);
}

#[test]
fn synth_grid_product_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = gcsq(&["synth", "--n", "10,20", "--k", "2", "--seeds", "3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let graphs = std::fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| {
            let name = e.as_ref().unwrap().file_name();
            name.to_str().unwrap().starts_with("graph_")
        })
        .count();
    assert_eq!(graphs, 6);
}

#[test]
fn synth_invalid_spec_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = gcsq(&["synth", "--n", "10", "--k", "11", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("k"));
}

#[test]
fn cluster_gcsq_on_triangle_prints_k2() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_triangle(dir.path());
    let out = gcsq(&["cluster", "--graph", graph.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "--explain"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("k=2"), "stdout: {text}");
    assert!(text.contains("accepted=true"), "explain output missing: {text}");

    let p = read_partition_json(&dir.path().join("partition.json")).unwrap();
    assert_eq!(p.assignment(), &[0, 0, 1]);
    let trace: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("trace.json")).unwrap()).unwrap();
    assert_eq!(trace.as_array().unwrap().len(), 3);
}

#[test]
fn cluster_pam_with_k_on_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_triangle(dir.path());
    let out = gcsq(&["cluster", "--graph", graph.to_str().unwrap(), "--algorithm", "pam", "--k", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let p = read_partition_json(&dir.path().join("partition.json")).unwrap();
    assert_eq!(p.k(), 2);
    assert!(!dir.path().join("trace.json").exists(), "pam has no trace");
}

#[test]
fn cluster_missing_input_exits_2_naming_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = gcsq(&["cluster", "--graph", "/no/such/graph.csv", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("/no/such/graph.csv"));
}

#[test]
fn cluster_rejects_k_for_gcsq() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_triangle(dir.path());
    let out = gcsq(&["cluster", "--graph", graph.to_str().unwrap(), "--k", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("pam"));
}

#[test]
fn cluster_capacity_error_exits_1_with_guidance() {
    let dir = tempfile::tempdir().unwrap();
    let sdir = dir.path().join("synth");
    let out = gcsq(&["synth", "--n", "31", "--k", "2", "--out", sdir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let graph = sdir.join("graph_n31_k2_s0.csv");
    let out = gcsq(&["cluster", "--graph", graph.to_str().unwrap(), "--solver", "exact", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("anneal"), "guidance missing: {}", stderr(&out));
}

#[test]
fn bench_row_count_and_noiseless_k2_recovery() {
    let dir = tempfile::tempdir().unwrap();
    let out = gcsq(&["bench", "--n", "10", "--k", "2", "--seeds", "5", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let table = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
    let rows: Vec<&str> = table.lines().skip(1).collect();
    assert_eq!(rows.len(), 10, "1 cell x 5 seeds x 2 algorithms");
    for row in &rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 8);
        if fields[3] == "gcsq" {
            assert_eq!(fields[4], "1", "noiseless k=2 gcsq row: {row}");
        }
    }
}

#[test]
fn summary_matches_independent_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    let out = gcsq(&["bench", "--n", "8", "--k", "2,3", "--seeds", "4", "--noise", "0.1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let results = dir.path().join("results.csv");
    let out = gcsq(&["summary", "--input", results.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    // recompute from the raw table
    let mut cells: std::collections::BTreeMap<(String, String, String), Vec<f64>> = Default::default();
    for row in std::fs::read_to_string(&results).unwrap().lines().skip(1) {
        let f: Vec<&str> = row.split(',').collect();
        cells
            .entry((f[0].into(), f[1].into(), f[3].into()))
            .or_default()
            .push(f[4].parse().unwrap());
    }
    let text = stdout(&out);
    let mut checked = 0;
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let aris = &cells[&(f[0].into(), f[1].into(), f[2].into())];
        assert_eq!(f[3].parse::<usize>().unwrap(), aris.len());
        let mean: f64 = aris.iter().sum::<f64>() / aris.len() as f64;
        let var: f64 = aris.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / aris.len() as f64;
        assert!((f[4].parse::<f64>().unwrap() - mean).abs() < 1e-12, "{line}");
        assert!((f[5].parse::<f64>().unwrap() - var).abs() < 1e-12, "{line}");
        checked += 1;
    }
    assert_eq!(checked, 4, "2 cells x 2 algorithms");
}

#[test]
fn finance_fixture_windows_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let prices = fixture_prices();
    let out = gcsq(&["finance", "--prices", prices.to_str().unwrap(), "--window", "7", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let table = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
    let rows: Vec<&str> = table.lines().skip(1).collect();
    assert_eq!(rows.len(), 10, "5 windows x 2 algorithms");
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f[2], "0", "fixture windows are perfectly balanced: {row}");
        assert_eq!(f[3], "2");
    }
    assert!(dir.path().join("graph_2025-01-06T09-30-00.csv").is_file());
}

#[test]
fn finance_single_window_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let out = gcsq(&["finance", "--prices", fixture_prices().to_str().unwrap(), "--algorithms", "gcsq,pam", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let table = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
    assert_eq!(table.lines().count(), 3, "header + 1 window x 2 algorithms");
}

#[test]
fn finance_window_longer_than_panel_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = gcsq(&["finance", "--prices", fixture_prices().to_str().unwrap(), "--window", "99", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn score_with_and_without_truth() {
    let dir = tempfile::tempdir().unwrap();
    let out = gcsq(&["synth", "--n", "8", "--k", "2", "--seed", "3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let graph = dir.path().join("graph_n8_k2_s3.csv");
    let truth = dir.path().join("truth_n8_k2_s3.json");

    let out = gcsq(&["score", "--graph", graph.to_str().unwrap(), "--partition", truth.to_str().unwrap(), "--truth", truth.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["ari"], 1.0);
    assert_eq!(v["penalty"], 0.0);
    assert_eq!(v["k"], 2);

    let out = gcsq(&["score", "--graph", graph.to_str().unwrap(), "--partition", truth.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["ari"].is_null());
    assert!(v["penalty"].is_number());
}

#[test]
fn score_mismatched_sizes_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = gcsq(&["synth", "--n", "8,9", "--k", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = gcsq(&[
        "score",
        "--graph",
        dir.path().join("graph_n8_k2_s0.csv").to_str().unwrap(),
        "--partition",
        dir.path().join("truth_n9_k2_s0.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn config_file_precedence_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    std::fs::write(&config, "n=6\nk=2\nseed=5\n").unwrap();
    let out = gcsq(&["synth", "--config", config.to_str().unwrap(), "--seed", "7", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(dir.path().join("graph_n6_k2_s7.csv").is_file(), "flag seed wins");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["seed"], "7");
    assert_eq!(manifest["config"]["n"], "6");
}

#[test]
fn rerun_from_manifest_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d1 = dir.path().join("r1");
    let d2 = dir.path().join("r2");
    let out = gcsq(&["bench", "--n", "9", "--k", "2,3", "--seeds", "3", "--noise", "0.05", "--workers", "2", "--out", d1.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    // rebuild the command from the manifest's resolved configuration alone
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d1.join("manifest.json")).unwrap()).unwrap();
    let mut config_text = String::new();
    for (key, value) in manifest["config"].as_object().unwrap() {
        if key != "out" {
            config_text.push_str(&format!("{key}={}\n", value.as_str().unwrap()));
        }
    }
    let config = dir.path().join("replay.cfg");
    std::fs::write(&config, config_text).unwrap();
    let out = gcsq(&[
        manifest["command"].as_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--out",
        d2.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    // identical rows once the runtime_ms timing column is stripped
    let strip = |path: &Path| {
        std::fs::read_to_string(path)
            .unwrap()
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&d1.join("results.csv")), strip(&d2.join("results.csv")));
}
