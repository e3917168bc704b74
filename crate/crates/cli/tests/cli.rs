use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chandisc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "axis1",
            "axis2",
            "alpha",
            "beta",
            "gamma1",
            "gamma2",
            "useful",
            "node",
            "boundary",
            "single_dist",
            "entangled_dist",
            "gap"
        ]
    );
    r.records().map(|x| x.unwrap()).collect()
}

#[test]
fn params_direct_substitution() {
    let v = json(&["params", "extremal(1.5707963,0)", "extremal(0,0)"]);
    let p = &v["params"];
    assert_eq!(v["schema_version"], 1);
    assert!(f(&p["alpha"]).abs() < 1e-12);
    assert!((f(&p["beta"]) + 1.0).abs() < 1e-12);
    assert!((f(&p["gamma1"]) + 1.0).abs() < 1e-7);
    assert!(f(&p["gamma2"]).abs() < 1e-12);
}

#[test]
fn params_identical_literals_are_zero() {
    let v = json(&["params", "ad(0.7)", "ad(0.7)"]);
    for k in [
        "alpha", "beta", "gamma1", "gamma2", "gamma_m", "gamma_M", "P",
    ] {
        assert_eq!(f(&v["params"][k]), 0.0, "{k}");
    }
}

#[test]
fn malformed_literal_exits_1_naming_token() {
    let out = run(&["params", "extremal(4.0,0)", "identity"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("4.0,0"), "{err}");
    let out = run(&["classify", "extremal(0.1,0)", "wobble(1)"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("wobble"));
}

#[test]
fn classify_quasi_extreme_pair() {
    let v = json(&[
        "classify",
        "extremal(0.4,0.4)",
        "extremal(1.1,2.0415926535897931)",
    ]);
    assert_eq!(v["classification"]["useful"], false);
    assert!(v["classification"]["node"].as_str().unwrap().contains("T1"));
}

#[test]
fn classify_damping_pair() {
    let v = json(&[
        "classify",
        "extremal(1.0471975511965976,0)",
        "extremal(0.5235987755982988,0)",
    ]);
    assert_eq!(v["classification"]["useful"], false);
    assert!((f(&v["single"]["value"]) - 1.0).abs() < 1e-9);
    assert!((f(&v["entangled"]["value"]) - 1.0).abs() < 1e-9);
    assert!((f(&v["success"]["entangled"]) - 0.75).abs() < 1e-9);
}

#[test]
fn classify_useful_pair() {
    let v = json(&["classify", "extremal(0,3)", "extremal(0.5,0)"]);
    let c = &v["classification"];
    assert_eq!(c["useful"], true);
    assert_eq!(c["boundary"], false);
    assert!(f(&v["entangled"]["value"]) > f(&v["single"]["value"]) + 0.1);
    assert!(f(&v["success"]["entangled"]) > f(&v["success"]["single"]));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["classify", "mix(0.3;0.2,1.1;2.0,0.4)", "ad(1.2)"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let sim = [
        "simulate",
        "ad(0.4)",
        "ad(1.3)",
        "bloch(2,0.5)",
        "--trials",
        "2000",
        "--seed",
        "9",
    ];
    assert_eq!(run(&sim).stdout, run(&sim).stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let out = run(&[
        "params",
        "identity",
        "ad(1)",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "params");
}

#[test]
fn sweep_two_by_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let out = run(&[
        "sweep",
        "phi1=0:3:2",
        "theta1=0:3:2",
        "phi2=0.5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# schema_version=1"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 4);
    // axis1-major
    assert_eq!(rows[0][0], rows[1][0]);
    assert_ne!(rows[1][0], rows[2][0]);
}

#[test]
fn sweep_quasi_extreme_line_is_never_useful() {
    let out = run(&[
        "sweep",
        "phi1=0:3.14:41",
        "theta1=phi1",
        "phi2=0.9",
        "theta2=0.9",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 41);
    for r in &rows {
        assert_eq!(&r[6], "false");
        assert!(r[7].contains("T1"), "{}", &r[7]);
    }
}

#[test]
fn sweep_gap_is_nonnegative() {
    let out = run(&[
        "sweep",
        "phi1=0:3.14:25",
        "theta1=0:3.14:25",
        "phi2=1.1",
        "theta2=0.3",
        "lambda2=0.6",
        "phi2p=2.5",
        "theta2p=1.9",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 625);
    for r in &rows {
        let gap: f64 = r[11].parse().unwrap();
        assert!(gap >= -1e-9, "{gap}");
    }
}

#[test]
fn sweep_rejects_bad_spec() {
    let out = run(&["sweep", "phi1=0:9:3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["sweep", "phi1=0.2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_single_probe_mode_passes() {
    let v = json(&[
        "verify",
        "--mode",
        "lemma1",
        "--samples",
        "20",
        "--seed",
        "7",
    ]);
    assert_eq!(v["report"]["passed"], true);
    assert!(f(&v["report"]["max_deviation"]) <= 1e-6);
    assert_eq!(v["rng"], "chacha8");
}

#[test]
fn verify_tree_passes() {
    let v = json(&[
        "verify",
        "--mode",
        "tree",
        "--samples",
        "40",
        "--seed",
        "3",
        "--grid",
        "128",
    ]);
    assert_eq!(v["report"]["passed"], true);
    assert_eq!(f(&v["report"]["max_deviation"]), 0.0);
}

#[test]
fn verify_montecarlo_within_band() {
    let v = json(&[
        "verify",
        "--mode",
        "montecarlo",
        "--samples",
        "3",
        "--seed",
        "11",
    ]);
    assert_eq!(v["report"]["checked"], 3);
    assert!(f(&v["report"]["max_deviation"]) <= 4.0);
}

#[test]
fn verify_rejects_bad_flags() {
    assert_eq!(run(&["verify", "--mode", "lemma9"]).status.code(), Some(1));
    assert_eq!(
        run(&["verify", "--mode", "lemma1", "--grid", "8"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["verify", "--mode", "lemma1", "--samples", "0"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn simulate_orthogonal_outputs() {
    let v = json(&[
        "simulate",
        "identity",
        "ad(1.5707963267948966)",
        "1",
        "--trials",
        "10000",
    ]);
    assert_eq!(f(&v["empirical"]), 1.0);
    assert_eq!(f(&v["theoretical"]), 1.0);
}

#[test]
fn simulate_equal_channels_is_a_coin_flip() {
    let v = json(&[
        "simulate",
        "ad(0.3)",
        "ad(0.3)",
        "bloch(1,0)",
        "--trials",
        "100000",
    ]);
    assert!((f(&v["empirical"]) - 0.5).abs() < 4.0 * (0.25f64 / 1e5).sqrt());
}

#[test]
fn simulate_optimal_uses_oracle_probe() {
    let v = json(&[
        "simulate",
        "extremal(0,3)",
        "extremal(0.5,0)",
        "--optimal",
        "--trials",
        "100000",
    ]);
    assert_eq!(v["probe"]["kind"], "entangled");
    let d = f(&v["oracle"]["distance"]["value"]);
    assert!((f(&v["theoretical"]) - 0.5 * (1.0 + 0.5 * d)).abs() < 1e-9);
    assert!(f(&v["z_score"]).abs() < 4.0);
}

#[test]
fn simulate_needs_a_probe() {
    assert_eq!(
        run(&["simulate", "identity", "ad(1)"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["simulate", "identity", "ad(1)", "1", "--trials", "0"])
            .status
            .code(),
        Some(1)
    );
}
