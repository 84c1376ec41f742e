use std::path::Path;
use std::process::{Command, Output};

use qprune::output::{read_config_line, read_csv, COLUMNS};

fn qprune(args: &[&str]) -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qprune"));
    c.args(args).env_remove("QPRUNE_OUT_DIR");
    c
}

fn run(mut cmd: Command) -> Output {
    cmd.output().expect("binary runs")
}

fn generate(dir: &Path, kind: &str) -> String {
    let path = dir.join(format!("{kind}.txt"));
    let out = run(qprune(&["generate", "--problem", kind, "--output", path.to_str().unwrap()]));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path.to_str().unwrap().to_string()
}

const QUICK: [&str; 8] = ["--runs", "10", "--sweeps", "100", "--chimera", "4x4x4", "--curve-attempts", "1"];

#[test]
fn run_writes_table_and_plot() {
    let tmp = tempfile::tempdir().unwrap();
    let inst = generate(tmp.path(), "max-cut");
    let out_dir = tmp.path().join("out");
    let mut args = vec!["run", "--problem", "max-cut", "--instance", &inst, "--strategy", "threshold", "--out"];
    args.push(out_dir.to_str().unwrap());
    args.extend(QUICK);
    let out = run(qprune(&args));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = read_csv(&out_dir.join("results.csv")).unwrap();
    assert_eq!(table.rows.len(), 21);
    assert_eq!(table.config.strategy, "threshold");
    for (k, row) in table.rows.iter().enumerate() {
        assert_eq!(row.p, k as f64 / 20.0);
        assert_eq!(row.baseline_ratio, table.rows[0].baseline_ratio);
    }
    let text = std::fs::read_to_string(out_dir.join("results.csv")).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), COLUMNS.join(","));
    let svg = std::fs::read_to_string(out_dir.join("results.svg")).unwrap();
    roxmltree::Document::parse(&svg).unwrap();
}

#[test]
fn output_directory_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let inst = generate(tmp.path(), "number-partitioning");
    let out_dir = tmp.path().join("from-env");
    let mut args = vec!["run", "--problem", "np", "--instance", &inst];
    args.extend(QUICK);
    let mut cmd = qprune(&args);
    cmd.env("QPRUNE_OUT_DIR", &out_dir);
    let out = run(cmd);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("results.csv").exists());
}

#[test]
fn rerun_from_embedded_config_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let inst = generate(tmp.path(), "graph-coloring");
    let first = tmp.path().join("first");
    let mut args = vec!["run", "--problem", "gc", "--instance", &inst, "--seed", "99", "--granularity", "0.25"];
    args.extend(QUICK);
    args.extend(["--out", first.to_str().unwrap()]);
    assert!(run(qprune(&args)).status.success());
    let csv = first.join("results.csv");
    let second = tmp.path().join("second");
    let replay = run(qprune(&["run", "--config", csv.to_str().unwrap(), "--out", second.to_str().unwrap()]));
    assert!(replay.status.success(), "{}", String::from_utf8_lossy(&replay.stderr));
    assert_eq!(std::fs::read(&csv).unwrap(), std::fs::read(second.join("results.csv")).unwrap());
    let cfg = read_config_line(&std::fs::read_to_string(&csv).unwrap()).unwrap().unwrap();
    assert_eq!(cfg.master_seed, 99);
    assert_eq!(cfg.n_runs, 10);
}

#[test]
fn compare_and_sweep_write_one_table_each() {
    let tmp = tempfile::tempdir().unwrap();
    let inst = generate(tmp.path(), "exact-cover");
    let out_dir = tmp.path().join("out");
    let base = ["--problem", "ec", "--instance", &inst, "--granularity", "0.5", "--out", out_dir.to_str().unwrap()];
    let mut compare = vec!["compare", "--strategies", "fraction,random:1,random:2"];
    compare.extend(base);
    compare.extend(QUICK);
    assert!(run(qprune(&compare)).status.success());
    let a = read_csv(&out_dir.join("compare-random-1.csv")).unwrap();
    let b = read_csv(&out_dir.join("compare-random-2.csv")).unwrap();
    let f = read_csv(&out_dir.join("compare-fraction.csv")).unwrap();
    assert_eq!(a.rows.len(), 3);
    assert_ne!(a.rows, b.rows);
    assert_eq!(a.rows[2].mean_ratio, f.rows[2].mean_ratio);
    let mut sweep = vec!["sweep-effort", "--sweeps-list", "50"];
    sweep.extend(base);
    sweep.extend(QUICK);
    assert!(run(qprune(&sweep)).status.success());
    assert_eq!(read_csv(&out_dir.join("sweeps-50.csv")).unwrap().config.sampler.sweeps, 50);
    assert!(out_dir.join("sweeps.svg").exists());
}

#[test]
fn oracle_brute_forces_a_qubo_file() {
    let tmp = tempfile::tempdir().unwrap();
    let qubo = tmp.path().join("k3.qubo");
    std::fs::write(&qubo, "3 0\n0 0 -2 soft\n1 1 -2 soft\n2 2 -2 soft\n0 1 2 soft\n0 2 2 soft\n1 2 2 soft\n").unwrap();
    let out = run(qprune(&["oracle", "--qubo", qubo.to_str().unwrap()]));
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["energy"], -2.0);
    assert_eq!(v["variables"], 3);

    let inst = generate(tmp.path(), "tsp");
    let out = run(qprune(&["oracle", "--problem", "tsp", "--instance", &inst]));
    assert!(!out.status.success(), "36 variables exceed the brute-force cap");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn embed_exports_chains() {
    let tmp = tempfile::tempdir().unwrap();
    let graph = tmp.path().join("tri.txt");
    std::fs::write(&graph, "0 1\n1 2\n0 2\n").unwrap();
    let out = run(qprune(&["embed", "--graph", graph.to_str().unwrap(), "--chimera", "1x1x4"]));
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.contains(": ")));

    std::fs::write(&graph, (0..9).flat_map(|u| (u + 1..9).map(move |v| format!("{u} {v}\n"))).collect::<String>())
        .unwrap();
    let out = run(qprune(&["embed", "--graph", graph.to_str().unwrap(), "--chimera", "1x1x4", "--attempts", "2"]));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_failures_and_runtime_failures_exit_differently() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let out = out.to_str().unwrap();
    let missing = run(qprune(&["run", "--problem", "ec", "--instance", "/nonexistent/ec.txt", "--out", out]));
    assert_eq!(missing.status.code(), Some(2));
    let inst = generate(tmp.path(), "exact-cover");
    let unknown = run(qprune(&["run", "--problem", "knapsack", "--instance", &inst, "--out", out]));
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("knapsack"));
    let granularity = run(qprune(&["run", "--problem", "ec", "--instance", &inst, "--granularity", "0.3", "--out", out]));
    assert_eq!(granularity.status.code(), Some(2));
    let wrong_kind = run(qprune(&["run", "--problem", "max-cut", "--instance", &inst, "--out", out]));
    assert_eq!(wrong_kind.status.code(), Some(2));
    let no_out = run(qprune(&["run", "--problem", "ec", "--instance", &inst]));
    assert_eq!(no_out.status.code(), Some(2));
}

#[test]
fn unembeddable_instance_still_produces_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let inst = generate(tmp.path(), "max-cut");
    let out_dir = tmp.path().join("out");
    let out = run(qprune(&[
        "run", "--problem", "max-cut", "--instance", &inst, "--chimera", "1x1x4", "--runs", "5", "--sweeps", "50",
        "--granularity", "0.5", "--out", out_dir.to_str().unwrap(),
    ]));
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let table = read_csv(&out_dir.join("results.csv")).unwrap();
    assert!(table.rows.iter().all(|r| r.embeddable_ratio.is_none() && r.physical_qubits.is_none()));
}
