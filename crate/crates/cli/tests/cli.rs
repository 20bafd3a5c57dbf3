use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bogo-gas"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn csv_rows(args: &[&str]) -> Vec<csv::StringRecord> {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    r.records().map(|x| x.unwrap()).collect()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn bound_selects_interacting_branch() {
    let v = json(&["bound", "--n", "100000", "--kappa", "2.0", "--hard-core", "0.01"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["terms"]["selected_branch"], "interacting");
    let t = &v["terms"];
    let sum = num(&t["f0_plus"]) + num(&t["density_density"]) + num(&t["condensate"]) + num(&t["bog_correction"]);
    assert_eq!(sum, num(&v["total"]));
    assert!(v["term_formulas"]["total"].is_string());
}

#[test]
fn scatter_matches_barrier_closed_form() {
    let v = json(&["scatter", "--square-barrier", "R=0.01,V0=100"]);
    let k = 50f64.sqrt();
    let closed = 0.01 - (k * 0.01).tanh() / k;
    assert!((num(&v["scattering_length"]) / closed - 1.0).abs() < 1e-8);
}

#[test]
fn verify_all_passes() {
    let out = run(&["verify", "--suite", "all"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["failed"], 0);
}

#[test]
fn one_point_sweep_reproduces_bound() {
    let b = json(&["bound", "--n", "1e5", "--kappa", "1.5", "--a", "0.1"]);
    let s = json(&[
        "sweep", "--n", "1e5", "--kappa", "1.5", "--a", "0.1", "--format", "json",
    ]);
    let row = &s["rows"][0];
    assert_eq!(s["rows"].as_array().unwrap().len(), 1);
    assert_eq!(row["total"], b["total"]);
    assert_eq!(row["f0_plus"], b["terms"]["f0_plus"]);
    assert_eq!(row["f_bec"], b["terms"]["f_bec"]);
    assert_eq!(row["f0_bec"], b["terms"]["condensate_branch_ideal"]);
    assert_eq!(row["bog_correction"], b["terms"]["bog_correction"]);
    assert_eq!(row["N0"], b["diagnostics"]["n0"]);
    assert_eq!(row["selected_branch"], b["terms"]["selected_branch"]);
}

#[test]
fn sweep_branch_flips_once() {
    let rows = csv_rows(&["sweep", "--n", "1e6", "--kappa", "0.8:1.2:0.05", "--a", "0.01"]);
    assert_eq!(rows.len(), 9);
    let branches: Vec<&str> = rows.iter().map(|r| &r[10]).collect();
    let flips = branches.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(flips, 1, "{branches:?}");
    assert_eq!(branches[0], "ideal");
    assert_eq!(branches[8], "interacting");
}

#[test]
fn thermal_cloud_scales_like_n_five_thirds() {
    let rows = csv_rows(&["sweep", "--n", "1e4,1e5,1e6", "--kappa", "2", "--a", "0.01"]);
    let scaled: Vec<f64> = rows
        .iter()
        .map(|r| r[5].parse::<f64>().unwrap().abs() / r[0].parse::<f64>().unwrap().powf(5.0 / 3.0))
        .collect();
    let (lo, hi) = scaled
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), x| (a.min(*x), b.max(*x)));
    assert!(hi / lo < 2.0, "{scaled:?}");
}

#[test]
fn sweep_failures_stay_in_row() {
    let rows = csv_rows(&[
        "sweep",
        "--n",
        "1e4",
        "--kappa",
        "0.5,2",
        "--a",
        "1",
        "--form",
        "condensed",
    ]);
    assert_eq!(rows.len(), 2);
    assert!(rows[0][13].starts_with("precondition"));
    assert!(rows[0][11].is_empty());
    assert!(rows[1][13].is_empty());
    assert!(!rows[1][11].is_empty());
}

#[test]
fn exit_codes() {
    let bad_flag = run(&["bound", "--n", "1e4", "--kappa", "2", "--a", "1", "--nope"]);
    assert_eq!(bad_flag.status.code(), Some(2));
    let bad_value = run(&["bound", "--n", "1e4", "--kappa", "-1", "--a", "1"]);
    assert_eq!(bad_value.status.code(), Some(2));
    let rec: Value = serde_json::from_slice(&bad_value.stderr).unwrap();
    assert_eq!(rec["error"]["kind"], "input");
    let failed = run(&[
        "bound",
        "--n",
        "1e4",
        "--kappa",
        "0.5",
        "--a",
        "1",
        "--form",
        "condensed",
    ]);
    assert_eq!(failed.status.code(), Some(1));
    let rec: Value = serde_json::from_slice(&failed.stderr).unwrap();
    assert_eq!(rec["error"]["kind"], "precondition");
    assert!(failed.stdout.is_empty());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# bound at κ = 2\nn = 1e4\nkappa = 2\na = 1\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = json(&["--config", cfg, "bound"]);
    let direct = json(&["bound", "--n", "1e4", "--kappa", "2", "--a", "1"]);
    assert_eq!(from_file, direct);
    let overridden = json(&["bound", "--config", cfg, "--kappa", "0.5"]);
    assert_eq!(num(&overridden["inputs"]["kappa"]), 0.5);
    assert_eq!(num(&overridden["inputs"]["a"]), 1.0);
}

#[test]
fn output_file_and_csv_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ideal.csv");
    let out = run(&[
        "ideal",
        "--n",
        "1e4",
        "--beta",
        "0.001",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("key,value\n"));
    assert!(text.contains("\nstate.beta,1.0000000000000000e-3\n"));
}

#[test]
fn potential_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.txt");
    std::fs::write(&path, "# step\n0 100\n0.01 100\n0.0100001 0\n").unwrap();
    let v = json(&["scatter", "--potential-file", path.to_str().unwrap()]);
    assert_eq!(v["potential"]["kind"], "tabulated");
    let k = 50f64.sqrt();
    let step = 0.01 - (k * 0.01).tanh() / k;
    assert!((num(&v["scattering_length"]) / step - 1.0).abs() < 1e-3);
}

#[test]
fn every_command_runs() {
    for args in [
        vec!["ideal", "--n", "1e4", "--kappa", "0.5"],
        vec![
            "bogoliubov",
            "--n",
            "1e4",
            "--kappa",
            "2",
            "--a",
            "1",
            "--delta-bog",
            "0.3333333333333333",
        ],
        vec!["condensate", "--n", "1e5", "--kappa", "2", "--a", "0.01"],
        vec!["condensate", "--n", "1e5", "--kappa", "2", "--a", "0"],
        vec!["scatter", "--hard-core", "0.5", "--n", "100"],
        vec![
            "bound",
            "--n",
            "1e4",
            "--kappa",
            "0.5",
            "--a",
            "1",
            "--form",
            "noncondensed",
        ],
    ] {
        let v = json(&args);
        assert_eq!(v["command"], args[0]);
    }
}
