//! End-to-end tests driving the compiled binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_poaforge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(path: &Path, contents: &str) {
    std::fs::write(path, contents).unwrap();
}

const FLOOR_INSTANCE: &str = r#"{
  "partition": [0.0, 0.1, 0.25, 0.6],
  "n": 1,
  "table": {
    "H": [2.0, 2.1, 2.5],
    "real": [[1.3, 1.5, 2.2]],
    "L": [1.1, 1.4, 1.9]
  },
  "cond_value": [{"v": 0.0, "p": 1.0}]
}"#;

#[test]
fn poa_of_discretized_worst_case_prints_the_bound() {
    let out = run(&["poa", "--instance", "builtin:worstcase-discrete", "--m", "400"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let poa = v["poa"].as_f64().unwrap();
    assert!((poa - 0.8646647).abs() < 1e-3, "poa = {poa}");
    assert_eq!(v["opt"].as_f64().unwrap(), 1.0);
}

#[test]
fn poa_oracle_flag_reports_quadrature_cross_check() {
    let out = run(&[
        "poa",
        "--instance",
        "builtin:hht",
        "--m",
        "200",
        "--oracle",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let fpa = v["fpa"].as_f64().unwrap();
    let oracle = v["oracle_fpa"].as_f64().unwrap();
    assert!((fpa - oracle).abs() <= 1e-8 * fpa.abs());
}

#[test]
fn validate_rejects_invalid_instances_with_named_report() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    write(&bad, &FLOOR_INSTANCE.replace("[2.0, 2.1, 2.5]", "[2.0, 1.9, 2.5]"));
    let out = run(&["validate", "--instance", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("row-monotonicity"), "{}", stderr(&out));

    let good = dir.path().join("good.json");
    write(&good, FLOOR_INSTANCE);
    let out = run(&["validate", "--instance", good.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "valid");
}

#[test]
fn malformed_json_names_the_offending_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("broken.json");
    write(&bad, r#"{"partition": [0.0, "x"], "n": 0, "table": {"H": [1.0], "real": [], "L": [0.5]}, "cond_value": [{"v": 1.0, "p": 1.0}]}"#);
    let out = run(&["validate", "--instance", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("partition"), "{err}");
}

#[test]
fn classify_builtin_is_twin_ceiling() {
    let out = run(&["classify", "--instance", "builtin:worstcase-discrete", "--m", "50"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "twin-ceiling");
}

#[test]
fn reduce_roundtrip_is_deterministic_and_reaches_twin_ceiling() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("floor.json");
    write(&input, FLOOR_INSTANCE);
    let paths: Vec<(PathBuf, PathBuf)> = (0..2)
        .map(|i| {
            (
                dir.path().join(format!("twin{i}.json")),
                dir.path().join(format!("trace{i}.json")),
            )
        })
        .collect();
    for (out_path, trace_path) in &paths {
        let out = run(&[
            "reduce",
            "--in",
            input.to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
            "--trace",
            trace_path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let twin0 = std::fs::read(&paths[0].0).unwrap();
    let twin1 = std::fs::read(&paths[1].0).unwrap();
    assert_eq!(twin0, twin1, "outputs differ between runs");
    let trace0 = std::fs::read(&paths[0].1).unwrap();
    let trace1 = std::fs::read(&paths[1].1).unwrap();
    assert_eq!(trace0, trace1, "traces differ between runs");

    let out = run(&["classify", "--instance", paths[0].0.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "twin-ceiling");

    // trace JSON round-trips with monotone ratio accounting
    let trace: serde_json::Value =
        serde_json::from_slice(&trace0).expect("trace parses");
    let steps = trace["steps"].as_array().unwrap();
    assert!(!steps.is_empty());
    for step in steps {
        let before = step["poa_before"].as_f64().unwrap();
        let after = step["poa_after"].as_f64().unwrap();
        assert!(after <= before * (1.0 + 1e-9));
    }
}

#[test]
fn worst_case_emits_optimum_and_sweep_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = run(&[
        "worst-case",
        "--grid",
        "40",
        "--emit",
        "csv",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let objective = v["objective"].as_f64().unwrap();
    assert!((objective - 0.8646647168).abs() < 1e-8, "objective {objective}");
    let body = std::fs::read_to_string(&csv).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next().unwrap(), "lambda,mu,h,objective");
    assert_eq!(lines.count(), 40 * 40);
}

#[test]
fn sweep_output_is_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for threads in ["1", "3"] {
        let path = dir.path().join(format!("sweep{threads}.csv"));
        let out = bin()
            .env("POAFORGE_THREADS", threads)
            .args(["sweep", "--kind", "objective", "--grid", "6", "--out", path.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        bodies.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn simulate_is_seed_deterministic_and_matches_closed_forms() {
    let a = run(&["simulate", "--instance", "builtin:example1", "--samples", "2e5", "--seed", "7"]);
    let b = run(&["simulate", "--instance", "builtin:example1", "--samples", "2e5", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let fpa = v["fpa"].as_f64().unwrap();
    let se = v["se_fpa"].as_f64().unwrap();
    assert!((fpa - 2.0 / 3.0).abs() <= 3.0 * se);

    let out = run(&["simulate", "--instance", "builtin:example2", "--samples", "1e4", "--format", "csv"]);
    let body = stdout(&out);
    let mut lines = body.lines();
    assert_eq!(lines.next().unwrap(), "fpa,opt,poa,se_fpa,se_opt,samples,seed");
    let row = lines.next().unwrap();
    assert!(row.starts_with("2.00000000000000e0,2.00000000000000e0,1.00000000000000e0"), "{row}");
}

#[test]
fn simulate_worstcase_reports_analytic_reference() {
    let out = run(&[
        "simulate",
        "--instance",
        "builtin:worstcase",
        "--n",
        "50",
        "--samples",
        "2e5",
        "--seed",
        "7",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let mc_fpa = v["fpa"].as_f64().unwrap();
    let se = v["se_fpa"].as_f64().unwrap();
    let analytic_fpa = v["analytic"]["fpa"].as_f64().unwrap();
    assert!((mc_fpa - analytic_fpa).abs() <= 3.0 * se, "{mc_fpa} vs {analytic_fpa} ± {se}");
}

#[test]
fn repro_quick_agrees_on_all_estimates() {
    let out = run(&["repro", "--quick"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("analytic optimum"));
    assert!(text.contains("integral route"));
    assert!(text.contains("discretized welfare"));
    assert!(text.contains("Monte Carlo ratio"));
    assert!(text.contains("all estimates agree"));
}

#[test]
fn unknown_builtin_exits_one() {
    let out = run(&["poa", "--instance", "builtin:nope"]);
    assert_eq!(out.status.code(), Some(1));
}
