use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ctqw::graph::make_random_with_hub;
use ctqw::Graph;
use serde_json::Value;
use tempfile::TempDir;

fn ctqw(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctqw"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_remove("CTQW_DEFAULT_TOL")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn report(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    (header, rows)
}

const K2_EVOLVE: &str = r#"{
  "graph": {"family": "complete", "n": 2},
  "hamiltonian": {"gamma": 1.0},
  "initial": {"vertex": 0},
  "observables": [0],
  "time": {"t_max": 1.0, "steps": 3}
}"#;

#[test]
fn evolve_writes_grid_rows() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "evolve.json", K2_EVOLVE);
    let out = ctqw(&["--config", &cfg, "evolve"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = csv_rows(&dir.path().join("trace.csv"));
    assert_eq!(header, ["t", "p0", "norm2"]);
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[0][1], 1.0);
    for r in &rows {
        assert!((r[1] - r[0].cos().powi(2)).abs() < 1e-11);
        assert!((r[2] - 1.0).abs() < 1e-10);
    }
}

#[test]
fn evolve_is_byte_for_byte_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "evolve.json",
        r#"{"graph": {"family": "random-hub", "n": 9, "p": 0.4, "seed": 3},
            "hamiltonian": {"gamma": 0.5, "marks": [{"vertex": 0, "lambda": [0.0, -0.7]}]},
            "initial": {"uniform": true},
            "time": {"t_max": 4.0, "steps": 20}}"#,
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        assert!(ctqw(&["--config", &cfg, "evolve"], d).status.success());
    }
    let first = fs::read(a.join("trace.csv")).unwrap();
    assert_eq!(first, fs::read(b.join("trace.csv")).unwrap());
    let (header, _) = csv_rows(&a.join("trace.csv"));
    assert_eq!(header.last().unwrap(), "norm2");
    assert_eq!(header[header.len() - 2], "eta");
}

#[test]
fn search_report_on_star() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "s.json", r#"{"graph": {"family": "star", "n": 16}}"#);
    let out = ctqw(&["--config", &cfg, "--strict", "search"], dir.path());
    assert!(out.status.success());
    let r = report(dir.path(), "search_report.json");
    assert_eq!(r["expected"], 1.0);
    assert_eq!(r["pass"], true);
    let p = r["measured"]["success_probability_at_t_star"].as_f64().unwrap();
    assert!((p - 1.0).abs() < 1e-6);
    let t_star = r["parameters"]["t_star"].as_f64().unwrap();
    assert!((t_star - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    for key in ["claim", "parameters", "measured", "expected", "tolerance", "pass"] {
        assert!(r.get(key).is_some(), "{key}");
    }
}

#[test]
fn transport_report_on_star() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "t.json", r#"{"graph": {"family": "star", "n": 8}, "kappa": 1.0}"#);
    assert!(ctqw(&["--config", &cfg, "--strict", "transport"], dir.path()).status.success());
    let r = report(dir.path(), "transport_report.json");
    assert!((r["expected"].as_f64().unwrap() - 1.0 / 7.0).abs() < 1e-15);
    for key in ["eta_overlap", "eta_limit", "eta_integral"] {
        assert!((r["measured"][key].as_f64().unwrap() - 1.0 / 7.0).abs() < 1e-4);
    }
}

#[test]
fn prop_ib_table_has_97_rows() {
    let dir = TempDir::new().unwrap();
    assert!(ctqw(&["prop-ib", "--n-max", "100"], dir.path()).status.success());
    let (header, rows) = csv_rows(&dir.path().join("prop_ib_table.csv"));
    assert_eq!(header, ["n", "f", "g", "n_minus_f", "n_minus_g"]);
    assert_eq!(rows.len(), 97);
    assert!(rows.iter().all(|r| r[3] > 0.0 && r[4] > 0.0));
    assert_eq!(report(dir.path(), "prop_ib_report.json")["pass"], true);
}

#[test]
fn certify_modes() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"graph": {"family": "star", "n": 8}, "graph2": {"family": "complete", "n": 8}}"#,
    );
    assert!(ctqw(&["--config", &cfg, "--strict", "certify", "--mode", "laplacian"], dir.path()).status.success());
    assert_eq!(report(dir.path(), "certify_report.json")["measured"]["dynamics_match"], true);

    assert!(ctqw(&["--config", &cfg, "--strict", "certify", "--mode", "adjacency"], dir.path()).status.success());
    let r = report(dir.path(), "certify_report.json");
    assert_eq!(r["measured"]["dynamics_match"], false);
    let corner = &r["measured"]["reduced_corner"];
    assert!(corner[0].as_f64().unwrap().abs() < 1e-10);
    assert!((corner[1].as_f64().unwrap() - 6.0).abs() < 1e-10);
}

#[test]
fn gen_graph_round_trip() {
    let dir = TempDir::new().unwrap();
    let out = ctqw(
        &["gen-graph", "--family", "random-hub", "--n", "10", "--p", "0.3", "--seed", "42"],
        dir.path(),
    );
    assert!(out.status.success());
    let g = Graph::read_json(dir.path().join("graph.json")).unwrap();
    assert_eq!(g, make_random_with_hub(10, 0.3, 42).unwrap());

    let cfg = write_config(
        dir.path(),
        "from_file.json",
        &format!(r#"{{"graph": {{"file": {:?}}}}}"#, dir.path().join("graph.json")),
    );
    assert!(ctqw(&["--config", &cfg, "search"], &dir.path().join("s")).status.success());
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write_config(dir.path(), "bad.json", "{\n  \"graph\": {\"family\": \"star\", \"n\": 8},\n  \"gamma\": 1\n}");
    let out = ctqw(&["--config", &bad, "search"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("gamma") && err.contains("line 3"), "{err}");

    let missing = dir.path().join("missing.json");
    let out = ctqw(&["--config", missing.to_str().unwrap(), "search"], dir.path());
    assert_eq!(out.status.code(), Some(3));

    let tight = write_config(dir.path(), "tight.json", r#"{"graph": {"family": "star", "n": 8}, "tol": 1e-30}"#);
    assert_eq!(ctqw(&["--config", &tight, "--strict", "search"], dir.path()).status.code(), Some(2));
    assert_eq!(ctqw(&["--config", &tight, "search"], dir.path()).status.code(), Some(0));

    let not_hub = write_config(dir.path(), "nh.json", r#"{"graph": {"family": "path", "n": 5}, "targets": [2]}"#);
    assert_eq!(ctqw(&["--config", &not_hub, "search"], dir.path()).status.code(), Some(1));
}

#[test]
fn default_tolerance_from_environment() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "s.json", r#"{"graph": {"family": "wheel", "n": 8}}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_ctqw"))
        .args(["--config", &cfg, "--strict", "--out"])
        .arg(dir.path())
        .arg("search")
        .env("CTQW_DEFAULT_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(dir.path(), "search_report.json")["tolerance"], 1e-30);
}

#[test]
fn flag_overrides_grid() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "evolve.json", K2_EVOLVE);
    assert!(ctqw(&["--config", &cfg, "--t-max", "2", "--steps", "8", "evolve"], dir.path()).status.success());
    let (_, rows) = csv_rows(&dir.path().join("trace.csv"));
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[8][0], 2.0);
}

#[test]
fn batch_writes_separate_directories() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "batch.json",
        r#"{"runs": [
            {"name": "star", "command": "search", "graph": {"family": "star", "n": 8}},
            {"name": "wheel", "command": "search", "graph": {"family": "wheel", "n": 8}},
            {"command": "prop-ib", "n_max": 20}
        ]}"#,
    );
    let out = ctqw(&["--config", &cfg, "--strict", "batch"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let a = report(&dir.path().join("star"), "search_report.json");
    let b = report(&dir.path().join("wheel"), "search_report.json");
    let success = |r: &Value| r["measured"]["success_probability_at_t_star"].as_f64().unwrap();
    assert!((success(&a) - success(&b)).abs() < 1e-12);
    assert!(dir.path().join("run002").join("prop_ib_table.csv").exists());

    let dup = write_config(
        dir.path(),
        "dup.json",
        r#"{"runs": [{"name": "x", "command": "prop-ib"}, {"name": "x", "command": "prop-ib"}]}"#,
    );
    assert_eq!(ctqw(&["--config", &dup, "batch"], dir.path()).status.code(), Some(1));
}
