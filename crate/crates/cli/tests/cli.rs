use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bassnet(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bassnet"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Rows of a CSV without its header, as numbers.
fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_writes_network_and_manifest() {
    let dir = TempDir::new().unwrap();
    let out = bassnet(dir.path(), &["gen", "circle", "--M", "5", "--p", "0.1", "--q", "0.4", "--out", "c5.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let net = json(&dir.path().join("c5.json"));
    assert_eq!(net["M"], 5);
    assert_eq!(net["edges"].as_array().unwrap().len(), 5);
    let manifest = json(&dir.path().join("c5.json.manifest.json"));
    assert_eq!(manifest["command_line"][1], "gen");
    assert_eq!(manifest["exit_code"], 0);
    assert_eq!(manifest["tool_version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn solve_two_node_circle_matches_hand_solution() {
    let dir = TempDir::new().unwrap();
    let (p, q) = (0.1, 0.5);
    bassnet(dir.path(), &["gen", "circle", "--M", "2", "--p", "0.1", "--q", "0.5", "--out", "c2.json"]);
    let out = bassnet(dir.path(), &["solve", "--net", "c2.json", "--omega", "1", "--tmax", "3", "--steps", "30"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("t,value\n"));
    let rows = rows(&text);
    assert_eq!(rows.len(), 31);
    for r in rows {
        let t: f64 = r[0];
        let hand = (q * (-2.0 * p * t).exp() - p * (-(p + q) * t).exp()) / (q - p);
        assert!((r[1] - hand).abs() < 1e-10, "t={t}: {} vs {hand}", r[1]);
    }
}

#[test]
fn solve_input_hash_is_recorded() {
    let dir = TempDir::new().unwrap();
    bassnet(dir.path(), &["gen", "line", "--M", "3", "--p", "0.2", "--q-left", "0.3", "--q-right", "0.1", "--out", "l3.json"]);
    let out = bassnet(dir.path(), &["solve", "--net", "l3.json", "--pair", "1,3", "--out", "s.csv"]);
    assert!(out.status.success());
    let manifest = json(&dir.path().join("s.csv.manifest.json"));
    let hash = manifest["inputs"][0]["sha256"].as_str().unwrap();
    assert_eq!(hash.len(), 64);
    assert_eq!(rows(&std::fs::read_to_string(dir.path().join("s.csv")).unwrap()).len(), 51);
}

#[test]
fn formula_infinite_line_matches_expression() {
    let dir = TempDir::new().unwrap();
    let out = bassnet(dir.path(), &["formula", "f1d", "--p", "0.2", "--q", "0.8", "--times", "0,0.5,2"]);
    assert!(out.status.success());
    for r in rows(&stdout(&out)) {
        let t = r[0];
        let hand = 1.0 - (-t + 0.8 * (1.0 - (-0.2 * t).exp()) / 0.2).exp();
        assert!((r[1] - hand).abs() < 1e-14);
    }
}

#[test]
fn formula_line_node_one_is_boundary() {
    let dir = TempDir::new().unwrap();
    let out = bassnet(
        dir.path(),
        &["formula", "line2s", "--p", "0.3", "--q-left", "0.4", "--q-right", "0.6", "--M", "1", "--j", "1"],
    );
    assert!(out.status.success());
    for r in rows(&stdout(&out)) {
        assert!((r[1] - (1.0 - (-0.3 * r[0]).exp())).abs() < 1e-14);
    }
}

#[test]
fn singular_parameters_without_fallback_are_rejected() {
    let dir = TempDir::new().unwrap();
    let args = ["formula", "circle", "--p", "0.1", "--q", "0.2", "--M", "5"];
    let out = bassnet(dir.path(), &[&args[..], &["--singular-fallback", "off"]].concat());
    assert_eq!(out.status.code(), Some(3));
    let out = bassnet(dir.path(), &args);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(bassnet(dir.path(), &["solve", "--net", "x.json", "--level", "--bogus"]).status.code(), Some(2));
    assert_eq!(bassnet(dir.path(), &["frobnicate"]).status.code(), Some(2));
    // a target is required
    assert_eq!(bassnet(dir.path(), &["solve", "--net", "x.json"]).status.code(), Some(2));
    assert_eq!(
        bassnet(dir.path(), &["gen", "circle", "--M", "3", "--p", "0.1", "--q", "1", "--q-left", "1", "--q-right", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn invalid_inputs_exit_3() {
    let dir = TempDir::new().unwrap();
    assert_eq!(bassnet(dir.path(), &["solve", "--net", "missing.json", "--level"]).status.code(), Some(3));
    std::fs::write(dir.path().join("bad.json"), r#"{"M": 2, "p": [0.1, 0.1], "edges": [[1, 1, 0.5]]}"#).unwrap();
    assert_eq!(bassnet(dir.path(), &["solve", "--net", "bad.json", "--level"]).status.code(), Some(3));
    assert_eq!(bassnet(dir.path(), &["gen", "circle", "--M", "3", "--p=-1", "--q", "1"]).status.code(), Some(3));
}

#[test]
fn exceeding_the_node_cap_exits_4() {
    let dir = TempDir::new().unwrap();
    bassnet(dir.path(), &["gen", "circle", "--M", "5", "--p", "0.1", "--q", "0.4", "--out", "c5.json"]);
    let out = bassnet(dir.path(), &["--max-nodes", "4", "solve", "--net", "c5.json", "--level"]);
    assert_eq!(out.status.code(), Some(4));
    let out = bassnet(dir.path(), &["solve", "--net", "c5.json", "--level", "--max-nodes", "5"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn simulate_is_independent_of_jobs() {
    let dir = TempDir::new().unwrap();
    bassnet(dir.path(), &["gen", "torus", "--D", "2", "--M1", "4", "--p", "0.3", "--q", "0.6", "--out", "t.json"]);
    let run = |jobs: &str| {
        let out = bassnet(
            dir.path(),
            &["simulate", "--net", "t.json", "--runs", "3000", "--seed", "11", "--target", "node:6", "--tmax", "2", "--steps", "4", "--jobs", jobs],
        );
        assert!(out.status.success());
        stdout(&out)
    };
    let one = run("1");
    assert_eq!(one, run("3"));
    assert!(one.starts_with("t,mean,stderr\n"));
    assert_eq!(rows(&one).len(), 5);
}

#[test]
fn simulate_manifest_goes_to_stderr_for_stdout_output() {
    let dir = TempDir::new().unwrap();
    bassnet(dir.path(), &["gen", "circle", "--M", "3", "--p", "0.2", "--q", "0.4", "--out", "c.json"]);
    let out = bassnet(dir.path(), &["simulate", "--net", "c.json", "--runs", "100", "--seed", "42", "--scheme", "dt:0.01"]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    let manifest: serde_json::Value = serde_json::from_str(&err[err.find('{').unwrap()..]).unwrap();
    assert_eq!(manifest["seeds"][0], 42);
}

#[test]
fn analyze_verdicts() {
    let dir = TempDir::new().unwrap();
    bassnet(dir.path(), &["gen", "line", "--M", "3", "--p", "0.1", "--q-left", "0.5", "--q-right", "0.5", "--out", "path.json"]);
    let out = bassnet(dir.path(), &["analyze", "cut", "--net", "path.json", "--A", "1", "--B", "3", "--j", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["is_vertex_cut"], true);
    let out = bassnet(dir.path(), &["analyze", "funnel", "--net", "path.json", "--A", "1", "--B", "3", "--j", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["is_funnel_node"], true);

    // on a one-sided circle the edge leaving the target is not influential
    bassnet(dir.path(), &["gen", "circle", "--M", "4", "--p", "0.1", "--q", "0.5", "--out", "c4.json"]);
    let out = bassnet(dir.path(), &["analyze", "reduce", "--net", "c4.json", "--omega", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["removed_edges"], serde_json::json!([[2, 3, 0.5]]));
    assert_eq!(v["network"]["edges"].as_array().unwrap().len(), 3);

    let out = bassnet(dir.path(), &["analyze", "influential", "--net", "c4.json", "--omega", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["influential_nodes"], serde_json::json!([1, 2, 3, 4]));
}

#[test]
fn analyze_dominance_names_the_witness() {
    let dir = TempDir::new().unwrap();
    bassnet(dir.path(), &["gen", "line", "--M", "3", "--p", "0.1", "--q", "0.5", "--out", "a.json"]);
    bassnet(dir.path(), &["gen", "line", "--M", "3", "--p", "0.1", "--q", "0.5", "--out", "b.json"]);
    let mut b = json(&dir.path().join("b.json"));
    b["p"][2] = serde_json::json!(0.3);
    std::fs::write(dir.path().join("b.json"), b.to_string()).unwrap();
    let out = bassnet(dir.path(), &["analyze", "dominate", "--net", "a.json", "--other", "b.json", "--node", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["relation"], "StrictlyDominated");
    assert_eq!(v["witnesses"][0]["coordinate"], serde_json::json!({"kind": "p", "node": 3}));
    // node 3 cannot influence node 1 on a one-sided line
    assert_eq!(v["strictly_slower_at_node"], false);
}

#[test]
fn verify_chebyshev_passes() {
    let dir = TempDir::new().unwrap();
    let out = bassnet(dir.path(), &["verify", "chebyshev", "--out", "report.json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&dir.path().join("report.json"));
    assert_eq!(report["passed"], true);
    assert_eq!(report["reports"][0]["verdict"], "Pass");
}

#[test]
fn verify_reports_unresolved_strictness_as_failure() {
    // an edge makes the pair strictly correlated, but not resolvably so this early
    let dir = TempDir::new().unwrap();
    let suite = r#"{
        "times": [0.0, 1e-9],
        "pair": [{"network": {"M": 2, "p": [0.1, 0.1], "edges": [[1, 2, 0.5]], "label": "edge"}}]
    }"#;
    std::fs::write(dir.path().join("suite.json"), suite).unwrap();
    let out = bassnet(dir.path(), &["verify", "pair", "--fixtures", "suite.json", "--out", "report.json"]);
    assert_eq!(out.status.code(), Some(5));
    let report = json(&dir.path().join("report.json"));
    assert_eq!(report["passed"], false);
    assert!(!report["reports"][0]["failures"].as_array().unwrap().is_empty());
    let manifest = json(&dir.path().join("report.json.manifest.json"));
    assert_eq!(manifest["exit_code"], 5);
    assert_eq!(manifest["inputs"][0]["path"], "suite.json");
}

#[test]
fn help_lists_flags() {
    let dir = TempDir::new().unwrap();
    let out = bassnet(dir.path(), &["simulate", "--help"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for flag in ["--net", "--runs", "--seed", "--scheme", "--target", "--tmax", "--steps", "--times", "--jobs", "--out"] {
        assert!(text.contains(flag), "{flag} missing from help");
    }
}
