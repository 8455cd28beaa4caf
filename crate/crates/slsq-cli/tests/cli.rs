use std::process::{Command, Output};

use serde_json::Value;

fn slsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slsq")).arg("--no-timestamp").args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

const QUARTER_PI: &str = "0.7853981633974483";

#[test]
fn trig_r_at_quarter_pi_is_graded_permutation() {
    let out = slsq(&["emit-r", "--trig", "--theta1", QUARTER_PI, "--theta2", QUARTER_PI, "--lambda", "0"]);
    assert!(out.status.success());
    let v = json(&out);
    let m = &v["entries"];
    assert_eq!(m["rows"], 4);
    let expected = |r: usize, c: usize| match (r, c) {
        (0, 0) | (1, 2) | (2, 1) => 1.0,
        (3, 3) => -1.0,
        _ => 0.0,
    };
    for r in 0..4 {
        for c in 0..4 {
            let (re, im) = complex(&m["entries"][4 * r + c]);
            assert!((re - expected(r, c)).abs() < 1e-14 && im.abs() < 1e-14, "({r},{c}) = {re}+{im}i");
        }
    }
}

#[test]
fn massless_zhukovski_point() {
    let out = slsq(&["params", "xpm", "--p", "1.0", "--M", "0", "--h", "1.0"]);
    assert!(out.status.success());
    let v = json(&out);
    let (xr, xi) = complex(&v["point"]["xplus"]);
    let (yr, yi) = complex(&v["point"]["xminus"]);
    assert!((xr - 0.5_f64.cos()).abs() < 1e-12 && (xi - 0.5_f64.sin()).abs() < 1e-12);
    assert!((yr - 0.5_f64.cos()).abs() < 1e-12 && (yi + 0.5_f64.sin()).abs() < 1e-12);
}

#[test]
fn csv_formats() {
    let out = slsq(&["--format", "csv", "emit-r", "--trig", "--theta1", "0.3", "--theta2", "0.5", "--lambda", "0.2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("row,col,re,im"));
    assert_eq!(text.lines().count(), 17);

    let out = slsq(&["--format", "csv", "verify", "singlet", "--samples", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("suite,report,identity,residual,tolerance,passed"));
    assert!(text.lines().skip(1).all(|l| l.starts_with("singlet,")));
}

#[test]
fn labels_from_params_output() {
    let params = slsq(&["params", "xpm", "--p", "0.8", "--M", "1", "--h", "2"]);
    let text = String::from_utf8(params.stdout).unwrap();
    let other = slsq(&["params", "xpm", "--p", "-0.5", "--M", "1", "--h", "2"]);
    let other = String::from_utf8(other.stdout).unwrap();
    let out = slsq(&["emit-r", "--a", &text, "--b", &other, "--solve"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["entries"]["rows"], 4);
}

#[test]
fn verify_exit_codes() {
    let ok = slsq(&["verify", "ybe", "--samples", "3", "--seed", "1"]);
    assert_eq!(ok.status.code(), Some(0));
    let v = json(&ok);
    assert_eq!(v["passed"], true);
    assert!(v.get("timestamp").is_none());

    let strict = slsq(&["verify", "ybe", "--samples", "3", "--tolerance", "1e-30"]);
    assert_eq!(strict.status.code(), Some(1));

    assert_eq!(slsq(&["emit-r"]).status.code(), Some(2));
    assert_eq!(slsq(&["verify", "nonsense"]).status.code(), Some(2));
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("slsq-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let args = ["verify", "params", "--samples", "2", "--seed", "3"];
    let to_file = Command::new(env!("CARGO_BIN_EXE_slsq"))
        .args(["--no-timestamp", "--output", path.to_str().unwrap()])
        .args(args)
        .output()
        .unwrap();
    assert!(to_file.status.success());
    assert_eq!(std::fs::read(&path).unwrap(), slsq(&args).stdout);
    std::fs::remove_dir_all(&dir).ok();
}
