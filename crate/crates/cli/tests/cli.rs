use std::f64::consts::{FRAC_PI_4, SQRT_2};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use polygamy_core::states::{angle_state, bell_phi_plus, ghz, state_to_json, w_state, AngleFamily, PureState};
use serde_json::Value;
use tempfile::TempDir;

fn polygamy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polygamy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_state(dir: &TempDir, name: &str, s: &PureState) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, state_to_json(s)).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn close(v: &Value, want: f64, tol: f64) {
    let got = v.as_f64().unwrap_or_else(|| panic!("{v} is not a number"));
    assert!((got - want).abs() <= tol, "{got} vs {want}");
}

#[test]
fn bell_concurrence() {
    let dir = TempDir::new().unwrap();
    let bell = write_state(&dir, "bell.json", &bell_phi_plus());
    let out = json(&polygamy(&["measure", arg(&bell), "--measure", "concurrence", "--partition", "A|B"]));
    close(&out["value"], 1.0, 1e-12);
    assert_eq!(out["flags"], Value::Array(vec![]));
}

#[test]
fn w_one_to_group_concurrence() {
    let dir = TempDir::new().unwrap();
    let w = write_state(&dir, "w.json", &w_state(3));
    let out = json(&polygamy(&["measure", arg(&w), "--measure", "c", "--partition", "A|BC"]));
    close(&out["value"], 2.0 * SQRT_2 / 3.0, 1e-12);
}

#[test]
fn weight_examples() {
    let dir = TempDir::new().unwrap();
    let w = write_state(&dir, "w.json", &w_state(3));
    let out = json(&polygamy(&["weight", arg(&w), "--measure", "concurrence-of-assistance"]));
    close(&out["report"]["weight"]["value"], SQRT_2 - 1.0, 1e-6);
    assert_eq!(out["report"]["regime"], "blue");

    let angle = AngleFamily::new(FRAC_PI_4, FRAC_PI_4).unwrap();
    let a = write_state(&dir, "angle.json", &angle_state(&angle).unwrap());
    let out = json(&polygamy(&["weight", arg(&a), "--measure", "concurrence", "--kind", "delta"]));
    close(&out["report"]["weight"]["value"], 2.0 / 3f64.sqrt() - 1.0, 1e-12);

    let g = write_state(&dir, "ghz.json", &ghz(3));
    let out = json(&polygamy(&["weight", arg(&g), "--measure", "concurrence"]));
    assert_eq!(out["report"]["weight"]["kind"], "infinite");
    assert_eq!(out["report"]["regime"], "axis");
}

#[test]
fn weight_csv_has_one_row() {
    let dir = TempDir::new().unwrap();
    let g = write_state(&dir, "ghz.json", &ghz(3));
    let out = polygamy(&["--format", "csv", "weight", arg(&g), "--measure", "concurrence"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 2);
    assert!(data[0].starts_with("kind,measure,q1"));
}

#[test]
fn chain_of_ghz4() {
    let dir = TempDir::new().unwrap();
    let g = write_state(&dir, "ghz4.json", &ghz(4));
    let out = json(&polygamy(&["chain", arg(&g)]));
    assert_eq!(out["theorem"]["verdict"], "holds");
    assert!(out["report"]["expansion_residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(out["report"]["levels"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dims\": [2, 2], \"re\": [1.0").unwrap();
    let missing = dir.path().join("missing.json");
    let w = write_state(&dir, "w.json", &w_state(3));
    let cases: Vec<Vec<&str>> = vec![
        vec!["measure", arg(&bad), "--measure", "c", "--partition", "A|B"],
        vec!["measure", arg(&missing), "--measure", "c", "--partition", "A|B"],
        vec!["measure", arg(&w), "--measure", "negativity", "--partition", "A|B"],
        vec!["measure", arg(&w), "--measure", "c", "--partition", "A|D"],
        vec!["verify", "no-such-claim"],
        vec!["--tol", "nope=1", "verify", "delta-c-example"],
        vec!["--format", "xml", "region-fig4", "--steps", "3"],
        vec!["--samples", "0", "verify", "remark-bijection"],
        vec!["sweep-fig3", "--steps", "1"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let out = polygamy(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn sweep_row_counts() {
    let rows = |args: &[&str]| {
        let out = polygamy(args);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        text.lines().filter(|l| !l.starts_with('#')).count() - 1
    };
    assert_eq!(rows(&["sweep-fig3", "--steps", "20"]), 400);
    assert_eq!(rows(&["region-fig4", "--steps", "7"]), 49);
    assert_eq!(rows(&["region-fig5", "--beta-steps", "4", "--gamma-steps", "6"]), 24);
}

#[test]
fn sweep_written_to_file_matches_stdout() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("fig5.json");
    let args = ["--format", "json", "region-fig5", "--beta-steps", "3", "--gamma-steps", "3"];
    let stdout = polygamy(&args).stdout;
    let mut with_out = args.to_vec();
    let out_arg = arg(&path).to_string();
    with_out.splice(0..0, ["--out", out_arg.as_str()]);
    assert!(polygamy(&with_out).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    let v: Value = serde_json::from_slice(&stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 9);
}

#[test]
fn reruns_are_bit_identical() {
    for args in [
        vec!["--seed", "5", "--samples", "300", "verify", "remark-bijection"],
        vec!["--seed", "5", "--samples", "200", "--format", "csv", "verify", "threshold-property"],
        vec!["region-fig4", "--steps", "11"],
    ] {
        let a = polygamy(&args);
        let b = polygamy(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn different_seeds_differ() {
    let run = |seed: &str| polygamy(&["--seed", seed, "--samples", "50", "verify", "remark-bijection"]).stdout;
    assert_ne!(run("1"), run("2"));
}

#[test]
fn tolerance_override_can_fail_a_claim() {
    // zero slack on a quoted three-digit value cannot hold
    let out = polygamy(&["--tol", "quoted=0", "verify", "separable-counterexample"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["violations"], 1);
}
