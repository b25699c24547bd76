use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn hodge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hodge")).args(args).env_remove("HODGE_TOL").output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn example(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(format!("{name}.json"));
    let mut full = vec!["example", name];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = hodge(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let fiber = example(&dir, "dilog-fiber", &["--s", "0.3+0.4i"]);
    let o = hodge(&["validate", p(&fiber)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["ok"], Value::Bool(true));

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"dimension": 2,
            "weight_filtration": [{"weight": -1, "basis": [["1", "0"]]}, {"weight": 0, "basis": [["0", "1"]]}],
            "hodge_filtration": [{"level": 0, "basis": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}]}"#,
    )
    .unwrap();
    let o = hodge(&["validate", p(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["failures"][0]["axiom"], "WeightNested");
    assert!(String::from_utf8_lossy(&o.stderr).contains("WeightNested"));

    let o = hodge(&["validate", p(&dir.path().join("missing.json"))]);
    assert_eq!(o.status.code(), Some(3));

    std::fs::write(dir.path().join("garbage.json"), "{not json").unwrap();
    assert_eq!(hodge(&["validate", p(&dir.path().join("garbage.json"))]).status.code(), Some(3));
}

#[test]
fn compute_height_of_dilog_fiber_at_i() {
    let dir = TempDir::new().unwrap();
    let fiber = example(&dir, "dilog-fiber", &["--s", "i"]);
    let o = hodge(&["compute", "height", p(&fiber)]);
    assert!(o.status.success());
    let ht = stdout_json(&o)["height"].as_f64().unwrap();
    assert!((ht + 0.915_965_594_177_219).abs() < 1e-12, "{ht}");

    let fiber = example(&dir, "dilog-fiber", &["--s", "i", "--precision", "106"]);
    let o = hodge(&["compute", "height", p(&fiber), "--precision", "106"]);
    let text = stdout_json(&o)["height_decimal"].as_str().unwrap().to_string();
    assert!(text.starts_with("-9.15965594177219015054603514932"), "{text}");
}

#[test]
fn compute_limit_height_and_split_delta() {
    let dir = TempDir::new().unwrap();
    let orbit = example(&dir, "orbit6iii", &[]);
    let o = hodge(&["compute", "limit-height", p(&orbit)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["limit_height"].as_f64(), Some(0.0));

    let split = example(&dir, "split", &["--middle", "2"]);
    let o = hodge(&["compute", "delta", p(&split)]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert!(v["delta"].as_array().unwrap().iter().flat_map(|r| r.as_array().unwrap()).all(|x| x.as_f64() == Some(0.0)));

    let o = hodge(&["compute", "bigrading", p(&split), "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("p,q,dimension"));
    assert!(text.contains("-1,-1,2"));
}

#[test]
fn json_output_is_byte_stable() {
    let dir = TempDir::new().unwrap();
    let fiber = example(&dir, "dilog-fiber", &["--s", "2+3i"]);
    let a = hodge(&["compute", "bigrading", p(&fiber)]).stdout;
    let b = hodge(&["compute", "bigrading", p(&fiber)]).stdout;
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.find("\"components\"").unwrap() < text.find("\"grading\"").unwrap());
    assert!(text.find("\"grading\"").unwrap() < text.find("\"hodge_tate\"").unwrap());
}

#[test]
fn scenarios_pass() {
    for args in [
        vec!["scenario", "dilog", "--s", "0.5"],
        vec!["scenario", "dilog", "--s", "i"],
        vec!["scenario", "family", "--t", "-i"],
        vec!["scenario", "triangle"],
        vec!["scenario", "triangle", "--t", "0.3+0.8i"],
        vec!["scenario", "orbit6iii", "--z", "2i"],
        vec!["scenario", "dim0", "--a", "2", "--b", "3"],
    ] {
        let o = hodge(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout_json(&o)["pass"], Value::Bool(true));
    }
    let v = stdout_json(&hodge(&["scenario", "family", "--t", "-i"]));
    let expected = 0.915_965_594_177_219 / (4.0 * std::f64::consts::PI.powi(2) / 6.0);
    assert!((v["values"]["height"].as_f64().unwrap() - expected).abs() < 1e-12);
    assert!(v["values"]["height"].as_f64().unwrap() > 0.0);
}

#[test]
fn scenario_failures_have_exit_codes() {
    // a tolerance nobody meets forces a mismatch
    let o = hodge(&["scenario", "dilog", "--s", "2+3i", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    // excluded family parameter
    assert_eq!(hodge(&["scenario", "family", "--t", "-2"]).status.code(), Some(1));
    assert_eq!(hodge(&["scenario", "dilog", "--s", "nonsense"]).status.code(), Some(1));
}

#[test]
fn sweeps() {
    let dir = TempDir::new().unwrap();
    let dilog = example(&dir, "dilog-variation", &[]);
    let o = hodge(&["sweep", p(&dilog), "--x", "0.2", "--y-min", "0.5", "--y-max", "4", "--count", "4", "--format", "csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<Vec<f64>> =
        text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.windows(2).all(|w| w[1][1].abs() < w[0][1].abs()));
    assert!(rows[3][1].abs() < 1e-9);

    let orbit = example(&dir, "orbit6iii-variation", &[]);
    let o = hodge(&["sweep", p(&orbit), "--y-min", "1", "--y-max", "3", "--count", "3", "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let (y, h): (f64, f64) = (cols[0].parse().unwrap(), cols[1].parse().unwrap());
        assert!((h + 2.0 / 3.0 * y.powi(3)).abs() < 1e-8, "{line}");
        assert_eq!(cols[2], "");
    }

    let random = example(&dir, "random-hodge-tate", &["--seed", "7"]);
    let out = dir.path().join("sweep.json");
    let o = hodge(&["sweep", p(&random), "--y-min", "1", "--y-max", "20", "--count", "5", "--out", p(&out)]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for pt in v["points"].as_array().unwrap() {
        assert!(pt["identity_residual"].as_f64().unwrap() < 1e-9);
    }
}

#[test]
fn configuration_flags() {
    assert_eq!(hodge(&["scenario", "dilog", "--precision", "64"]).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_hodge"))
        .args(["scenario", "dilog", "--s", "2+3i"])
        .env("HODGE_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(hodge(&["--help"]).status.code(), Some(0));
    assert_eq!(hodge(&["frobnicate"]).status.code(), Some(3));
    let o = hodge(&["scenario", "dilog", "--precision", "106"]);
    assert!(o.status.success());
}
