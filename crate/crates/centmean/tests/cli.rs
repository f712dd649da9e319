//! End-to-end runs of the `centmean` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn centmean(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_centmean"))
        .args(args)
        .env_remove("CENTMEAN_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn constants_c1_prints_768() {
    let o = centmean(&["constants", "--c1", "--n", "1", "--alpha", "2", "--r", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "768\n");
}

#[test]
fn constants_c2_and_series() {
    let o = centmean(&["constants", "--c2", "--n", "1", "--alpha", "2", "--r", "1", "--s", "2", "--gamma", "1"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "2359296\n"));
    let o = centmean(&["constants", "--series", "--n", "1", "--alpha", "2", "--r", "1"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "2\n"));
    // Pole of the prefactor at γr/s = 1.
    let o = centmean(&["constants", "--c2", "--alpha", "2", "--r", "1", "--s", "2", "--gamma", "2"]);
    assert_eq!(o.status.code(), Some(2));
    // α = 1: the series diverges.
    let o = centmean(&["constants", "--c1", "--alpha", "1", "--r", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn eval_mean_of_linear_profile() {
    let o = centmean(&["eval-mean", "--f", "power:beta=1", "--n", "1", "--r", "2", "--alpha", "1", "--R", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0.5773503\n");
}

#[test]
fn eval_mean_digits() {
    let o = centmean(&["eval-mean", "--f", "power:beta=1", "--r", "2", "--alpha", "1", "--R", "1", "--digits", "12"]);
    assert_eq!(stdout(&o), "0.57735026919\n");
}

#[test]
fn eval_commutator_and_bracket() {
    let base =
        ["--f", "indicator:a=0:b=1", "--b", "osc:amp=1:phase=0", "--n", "1", "--r", "2", "--alpha", "2", "--R", "1"];
    let m = centmean(&[&["eval-commutator"][..], &base].concat());
    let b = centmean(&[&["eval-commutator", "--bracket"][..], &base].concat());
    assert_eq!(m.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let m: f64 = stdout(&m).trim().parse().unwrap();
    let b: f64 = stdout(&b).trim().parse().unwrap();
    assert!(m > 0.0 && b <= m, "bracket {b} vs mean {m}");
}

#[test]
fn cmo_norm_of_indicator() {
    let o = centmean(&["cmo-norm", "--b", "indicator:a=0:b=1", "--p", "1", "--r-min", "0.1", "--r-max", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("lower p=1 value=0.5 "), "{text}");
    assert!(text.contains("upper value=1 "), "{text}");
    let o = centmean(&["cmo-norm", "--b", "power:beta=1"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn proof_path_emits_json() {
    let o = centmean(&[
        "proof-path",
        "--f",
        "indicator:a=0:b=1",
        "--b",
        "osc:amp=1:phase=0",
        "--r",
        "1",
        "--alpha",
        "2",
        "--x",
        "1",
        "--s",
        "2",
        "--gamma",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["direction"], "inward");
    assert!(v["violations"].as_array().unwrap().is_empty());
    assert!(v["equivalence_error"].as_f64().unwrap() < 1e-6);
    assert!(!v["shell_inequalities"].as_array().unwrap().is_empty());
    // The inward chain needs α > 1.
    let o = centmean(&[
        "proof-path",
        "--f",
        "indicator:a=0:b=1",
        "--b",
        "osc:amp=1:phase=0",
        "--r",
        "1",
        "--alpha",
        "0.5",
        "--x",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_with_alpha_on_wrong_side_exits_2() {
    let o = centmean(&["check", "--theorem", "3", "--companion", "--alpha", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("hypothesis"), "{}", stderr(&o));
}

#[test]
fn check_passing_case() {
    let o = centmean(&[
        "check",
        "--theorem",
        "3",
        "--n",
        "1",
        "--r",
        "1",
        "--s",
        "2",
        "--alpha",
        "2",
        "--gamma",
        "1",
        "--R",
        "2",
        "--f",
        "indicator:a=0:b=1",
        "--b",
        "osc:amp=1:phase=0",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("T3-central,1,1,2,2,1,2,indicator:a=0:b=1,osc:amp=1:phase=0,"));
    assert!(rows[1].ends_with(",pass"));
}

#[test]
fn check_only_degenerate_exits_3() {
    // The companion mean of a constant diverges for α > γr/s, so both sides are unavailable.
    let o = centmean(&[
        "check",
        "--theorem",
        "2",
        "--companion",
        "--n",
        "1",
        "--r",
        "1",
        "--s",
        "2",
        "--alpha",
        "0.25",
        "--gamma",
        "1",
        "--f",
        "const:c=1",
        "--summary",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}\n{}", stdout(&o), stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["theorems"]["T2-companion"]["degenerate"], 1);
}

#[test]
fn unknown_flag_exits_2_with_usage() {
    let o = centmean(&["constants", "--c1", "--alpha", "2", "--r", "1", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
    let o = centmean(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}

fn write_grid(dir: &Path, text: &str) -> String {
    let p = dir.join("grid.toml");
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL_GRID: &str = r#"
theorems = [1, 2]
n = [1]
r = [1.0, 2.0]
s = ["2r", "3"]
alpha = [0.5, 2.0]
gamma = [0.0, 1.0]
radius = [1.0]
profiles = ["const:c=1", "indicator:a=0:b=1", "power:beta=-1.5:a=1:b=inf"]
"#;

#[test]
fn sweep_writes_reports_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write_grid(dir.path(), SMALL_GRID);
    let mut outputs = Vec::new();
    for (name, threads) in [("a", "1"), ("b", "3")] {
        let o = centmean(&[
            "sweep",
            "--grid",
            &grid,
            "--out-dir",
            dir.path().to_str().unwrap(),
            "--name",
            name,
            "--threads",
            threads,
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let csv = fs::read(dir.path().join(format!("{name}.csv"))).unwrap();
        let json = fs::read(dir.path().join(format!("{name}.json"))).unwrap();
        outputs.push((csv, json));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert!(csv.starts_with("theorem,n,r,s,alpha,gamma,R,f_label,b_label,lhs,rhs,constant,ratio,verdict\n"));
    assert!(csv.lines().count() > 10);
    let v: serde_json::Value = serde_json::from_slice(&outputs[0].1).unwrap();
    assert_eq!(v["totals"]["fail"], 0);
    assert_eq!(v["totals"]["cases"].as_u64().unwrap() as usize, csv.lines().count() - 1);
    for id in ["T1-central", "T1-companion", "T2-central", "T2-companion"] {
        assert!(v["theorems"][id].is_object(), "{id}");
    }
}

#[test]
fn sweep_uses_out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write_grid(dir.path(), "theorems = [2]\nsides = [\"central\"]\nn = [1]\nr = [1.0]\ns = [2]\nalpha = [2.0]\ngamma = [1.0]\nprofiles = [\"indicator:a=0:b=1\"]\n");
    let o = Command::new(env!("CARGO_BIN_EXE_centmean"))
        .args(["sweep", "--grid", &grid])
        .env("CENTMEAN_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().ends_with(",pass"));
}

#[test]
fn empty_sweep_gives_zero_summary() {
    let dir = tempfile::tempdir().unwrap();
    // T3 companion needs α < 1, so nothing is admissible.
    let grid = write_grid(dir.path(), "theorems = [3]\nsides = [\"companion\"]\nalpha = [2.0]\n");
    let o = centmean(&["sweep", "--grid", &grid, "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("sweep.json")).unwrap()).unwrap();
    assert_eq!(v["theorems"]["T3-companion"]["cases"], 0);
    assert_eq!(v["totals"]["cases"], 0);
}

#[test]
fn sweep_path_and_grid_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write_grid(dir.path(), "theorems = [2]\nn = [1]\n");
    let missing = dir.path().join("nope").join("deeper");
    let o = centmean(&["sweep", "--grid", &grid, "--out-dir", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let bad = write_grid(dir.path(), "alpha = \"two\"\n");
    let o = centmean(&["sweep", "--grid", &bad, "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = centmean(&["sweep", "--grid", dir.path().join("absent.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
