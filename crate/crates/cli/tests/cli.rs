use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pisubspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn pi_report_for_bundled_mhd_system() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "pi",
        "--system",
        "mhd_u_avg",
        "--verify",
        "--no-timestamp",
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&dir.path().join("pi.json"));
    assert_eq!(r["n"], 3);
    assert_eq!(r["audit"]["particular_ok"], true);
    assert!(r.get("generated_at").is_none());
    let text = fs::read_to_string(dir.path().join("pi.txt")).unwrap();
    assert!(text.contains("Pi_3"));
}

#[test]
fn pi_inconsistent_output_is_user_error() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("bad.json");
    fs::write(
        &sys,
        r#"{"inputs":[{"name":"l","units":"m"}],"output":{"name":"t","units":"s"}}"#,
    )
    .unwrap();
    let o = run(&["pi", "--system", p(&sys), "--out", p(dir.path())]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("output units not expressible"));
}

#[test]
fn timestamp_present_unless_suppressed() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["pi", "--system", "pendulum", "--out", p(dir.path())]);
    assert_eq!(code(&o), 0);
    assert!(json(&dir.path().join("pi.json"))["generated_at"].is_string());
}

#[test]
fn subspace_quadrature_selects_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "subspace",
        "--model",
        "hartmann_u_avg",
        "--quadrature",
        "11",
        "--system",
        "mhd_u_avg",
        "--no-timestamp",
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&dir.path().join("spectrum.json"));
    assert_eq!(r["selected_n"], 2);
    let ratio = r["eigenvalue_ratios"][2].as_f64().unwrap().abs();
    assert!(ratio < 1e-10);
    assert_eq!(r["consistency"]["containment_ok"], true);
    assert!(dir.path().join("eigenvalues.csv").exists());
    let s = json(&dir.path().join("sensitivity.json"));
    assert!(s["scores"][1].as_f64().unwrap() < 1e-12);
}

#[test]
fn monte_carlo_without_seed_is_user_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "subspace",
        "--model",
        "hartmann_u_avg",
        "--mc",
        "50",
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn unknown_model_is_user_error() {
    let o = run(&["subspace", "--model", "nope", "--out", "/tmp"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn bootstrap_from_sample_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("gen.csv");
    let o = run(&[
        "sample",
        "--model",
        "hartmann_b_ind",
        "--mc",
        "200",
        "--seed",
        "3",
        "--file",
        p(&gen),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    // sample files are never overwritten
    let again = run(&[
        "sample",
        "--model",
        "hartmann_b_ind",
        "--mc",
        "200",
        "--seed",
        "3",
        "--file",
        p(&gen),
    ]);
    assert_eq!(code(&again), 2);

    let mut outputs = Vec::new();
    for run_dir in ["a", "b"] {
        let out = dir.path().join(run_dir);
        let o = run(&[
            "subspace",
            "--samples",
            p(&gen),
            "--bootstrap",
            "500",
            "--seed",
            "7",
            "--no-timestamp",
            "--out",
            p(&out),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        outputs.push(
            ["spectrum.json", "eigenvalues.csv", "sensitivity.json"]
                .map(|f| fs::read(out.join(f)).unwrap()),
        );
    }
    assert_eq!(outputs[0], outputs[1]);
    let r = json(&dir.path().join("a/spectrum.json"));
    assert_eq!(r["bootstrap"]["replicates"], 500);
    assert_eq!(r["bootstrap"]["eigenvalues"].as_array().unwrap().len(), 5);
}

#[test]
fn summary_defaults_and_count() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "summary",
        "--model",
        "hartmann_u_avg",
        "--seed",
        "1",
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for f in ["summary1.csv", "summary2.csv"] {
        let rows = fs::read_to_string(dir.path().join(f))
            .unwrap()
            .lines()
            .count();
        assert_eq!(rows, 1001, "{f}");
    }
    assert!(dir.path().join("summary1.svg").exists());
    assert!(dir.path().join("summary2.svg").exists());

    let small = dir.path().join("small");
    let o = run(&[
        "summary",
        "--model",
        "hartmann_u_avg",
        "--seed",
        "1",
        "--count",
        "10",
        "--out",
        p(&small),
    ]);
    assert_eq!(code(&o), 0);
    let rows = fs::read_to_string(small.join("summary2.csv"))
        .unwrap()
        .lines()
        .count();
    assert_eq!(rows, 11);
}

#[test]
fn two_d_summary_with_one_dimension_is_user_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "summary",
        "--model",
        "hartmann_u_avg",
        "--seed",
        "1",
        "--dim",
        "1",
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("2-D summary"));
}

#[test]
fn check_passes_and_detects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    for model in ["hartmann_u_avg", "hartmann_b_ind"] {
        let o = run(&[
            "check",
            "--model",
            model,
            "--seed",
            "4",
            "--out",
            p(dir.path()),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        assert_eq!(json(&dir.path().join("check.json"))["passed"], true);
    }
    let o = run(&[
        "check",
        "--model",
        "hartmann_u_avg",
        "--seed",
        "4",
        "--corrupt-gradient",
        "3",
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("component 3"));
    // a loose enough tolerance accepts the corrupted gradient
    let o = run(&[
        "check",
        "--model",
        "hartmann_u_avg",
        "--seed",
        "4",
        "--corrupt-gradient",
        "3",
        "--tol",
        "0.5",
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}
