use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orbit-lift"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn stderr_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stderr)
        .lines()
        .map(|l| serde_json::from_str(l).expect("stderr lines are JSON"))
        .collect()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Ten sine humps on [0, 1] with exact zeros between them; the fifth is
/// a hundred times taller.
fn humps_csv() -> String {
    let mut out = String::from("t,re_1,im_1\n");
    for i in 0..=200 {
        let t = i as f64 / 200.0;
        let v = (10.0 * std::f64::consts::PI * t).sin();
        let v = if v.abs() < 1e-9 {
            0.0
        } else if t > 0.4 && t < 0.5 {
            100.0 * v
        } else {
            v
        };
        writeln!(out, "{t},{v},0").unwrap();
    }
    out
}

fn identity_csv(n: usize) -> String {
    let mut out = String::from("t,re_1,im_1\n");
    for i in 0..n {
        let t = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
        writeln!(out, "{t},{t},0").unwrap();
    }
    out
}

#[test]
fn malformed_header_exits_2_naming_the_column() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.csv", "t,re_1,imag_1\n0,1,0\n1,2,0\n");
    let out = run(&["radical", "--d", "2", "--input", s(&p)]);
    assert_eq!(out.status.code(), Some(2));
    let lines = stderr_lines(&out);
    let msg = lines.last().unwrap()["message"].as_str().unwrap().to_string();
    assert!(msg.contains("imag_1"), "{msg}");
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_file_is_an_input_error() {
    let out = run(&["radical", "--input", "/nonexistent/g.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cover_negative_control_exits_4_with_the_point() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "b.csv", &humps_csv());
    let out = run(&["cover", "--input", s(&p), "--L", "1", "--D", "2.5"]);
    assert_eq!(out.status.code(), Some(4));
    let lines = stderr_lines(&out);
    assert_eq!(lines[0]["level"], "warning");
    let err = lines.last().unwrap();
    assert_eq!(err["code"], 4);
    assert!(err["t"].as_f64().unwrap() > 0.0);
    assert!(err["message"].as_str().unwrap().contains("overlap"));
}

#[test]
fn cover_within_hypothesis_succeeds() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "b.csv", &humps_csv());
    let out = run(&["cover", "--input", s(&p), "--L", "1", "--D", "0.2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schema"], 1);
    let res = &r["result"];
    assert!(res["max_overlap"].as_u64().unwrap() <= 2);
    assert!(res["total_length"].as_f64().unwrap() <= 2.0 * res["measure"].as_f64().unwrap());
    let first = &res["intervals"][0];
    for key in ["t1", "ell", "s_minus", "s_plus", "kind"] {
        assert!(first.get(key).is_some(), "{key}");
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = TempDir::new().unwrap();
    let b = write(&dir, "b.csv", &humps_csv());
    let cfg = write(&dir, "run.cfg", "# budget outside the hypothesis\nD = 2.5\nL = 1\n");
    let out = run(&["cover", "--config", s(&cfg), "--input", s(&b)]);
    assert_eq!(out.status.code(), Some(4));
    let out = run(&["cover", "--config", s(&cfg), "--input", s(&b), "--D", "0.2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["config"]["D"], 0.2);
    assert_eq!(r["config"]["L"], 1.0);
    assert_eq!(r["config"]["degrees"], "1");
}

#[test]
fn scan_of_square_root_finds_two() {
    let out = run(&["scan", "--family", "radical", "--d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let p = r["result"]["p_star"].as_f64().unwrap();
    assert!((1.9..=2.1).contains(&p), "p* = {p}");
    assert_eq!(r["config"]["levels"], 6);
}

#[test]
fn radical_writes_long_format_lift_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.csv", &identity_csv(101));
    let out_dir = dir.path().join("out");
    let args = [
        "radical",
        "--d",
        "2",
        "--input",
        s(&g),
        "--levels",
        "2",
        "--out",
        s(&out_dir),
    ];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let b = bin().args(args).env("ORBIT_LIFT_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    let lift = std::fs::read_to_string(out_dir.join("lift.csv")).unwrap();
    assert!(lift.starts_with("t,branch,re,im\n"));
    assert_eq!(lift.lines().count(), 1 + 201);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report, json(&a));
    let l1 = report["result"]["levels"][0]["norms"]["lp"][0].as_f64().unwrap();
    assert!((l1 - 2.0).abs() < 1e-9);
}

#[test]
fn radical_from_polynomial_preset() {
    let out = run(&["radical", "--d", "3", "--g", "0,0,0,1", "--nodes", "51", "--p", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    // cube root of t^3 is t up to a rotation: unit slope, length 2
    let l1 = r["result"]["levels"][0]["norms"]["lp"][0].as_f64().unwrap();
    assert!((l1 - 2.0).abs() < 1e-9, "{l1}");
}

#[test]
fn roots_from_csv() {
    let dir = TempDir::new().unwrap();
    let mut body = String::from("t,re_1,im_1,re_2,im_2\n");
    for i in 0..=40 {
        let t = -1.0 + i as f64 / 20.0;
        writeln!(body, "{t},0,0,{},0", -t * t).unwrap();
    }
    let p = write(&dir, "e.csv", &body);
    let out = run(&["roots", "--input", s(&p), "--p", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["result"]["q"], 2);
    assert!(r["result"]["levels"][0]["residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn verify_passes_on_smooth_data() {
    let dir = TempDir::new().unwrap();
    let mut body = String::from("t,re_1,im_1,re_2,im_2\n");
    for i in 0..=100 {
        let t = i as f64 / 100.0;
        writeln!(body, "{t},{},0,{},{}", 1.0 + t, (3.0 * t).cos(), t * t).unwrap();
    }
    let p = write(&dir, "a.csv", &body);
    let out = run(&["verify", "--input", s(&p), "--degrees", "1,2", "--B", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["result"]["nodes_checked"], 101);
    assert_eq!(r["result"]["all_pass"], 101);
    let one = run(&["verify", "--input", s(&p), "--degrees", "1,2", "--t0", "0.5"]);
    assert_eq!(json(&one)["result"]["entries"][0]["data"]["t0"], 0.5);
}

#[test]
fn verify_counts_unresolved_intervals_on_coarse_grids() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "a.csv", "t,re_1,im_1\n0,1,0\n0.5,6,0\n1,11,0\n");
    let out = run(&["verify", "--input", s(&p), "--degrees", "1", "--B", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["result"]["unresolved_intervals"], 3);
    assert_eq!(r["result"]["entries"][1]["unresolved"], true);
    let one = run(&[
        "verify",
        "--input",
        s(&p),
        "--degrees",
        "1",
        "--B",
        "0.01",
        "--t0",
        "0.5",
    ]);
    assert_eq!(one.status.code(), Some(3));
}

#[test]
fn verify_rejects_wrong_degree_count() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "a.csv", &identity_csv(11));
    let out = run(&["verify", "--input", s(&p), "--degrees", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn qdist_matches_enumeration() {
    let dir = TempDir::new().unwrap();
    let a = write(
        &dir,
        "a.csv",
        "id,point,re_1,im_1\n0,0,1,0\n0,1,2,0\n0,2,5,1\n1,0,0,0\n1,1,0,0\n1,2,0,0\n",
    );
    let b = write(
        &dir,
        "b.csv",
        "id,point,re_1,im_1\n0,0,2.1,0\n0,1,5,0\n0,2,1,0.5\n1,0,3,4\n1,1,0,0\n1,2,0,0\n",
    );
    let out = run(&["qdist", "--input", s(&a), s(&b)]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let d = &r["result"]["distances"];
    assert!((d[1]["distance"].as_f64().unwrap() - 5.0).abs() < 1e-12);
    assert_eq!(r["result"]["max_discrepancy"], 0.0);
}

#[test]
fn grid2d_reports_consistency_and_obstruction() {
    let dir = TempDir::new().unwrap();
    let mut square = String::from("x,y,re_1,im_1\n");
    let mut annulus = String::from("x,y,re_1,im_1\n");
    for i in 0..=20 {
        for j in 0..=20 {
            let (x, y) = (-1.0 + i as f64 / 10.0, -1.0 + j as f64 / 10.0);
            writeln!(square, "{x},{y},{},0", x * x + y * y).unwrap();
            let r = (x * x + y * y).sqrt();
            if (0.4..=1.0).contains(&r) {
                writeln!(annulus, "{x},{y},{x},{y}").unwrap();
            }
        }
    }
    let sq = write(&dir, "sq.csv", &square);
    let out_dir = dir.path().join("o");
    let out = run(&["grid2d", "--input", s(&sq), "--spec", "cyclic:2", "--out", s(&out_dir)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["status"], "consistent");
    assert!(out_dir.join("lift2d.csv").exists());

    let an = write(&dir, "an.csv", &annulus);
    let out = run(&["grid2d", "--input", s(&an), "--spec", "cyclic:2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["result"]["status"], "obstructed");
    assert_eq!(r["result"]["winding"].as_i64().unwrap().rem_euclid(2), 1);
    assert!(!r["result"]["witness"].as_array().unwrap().is_empty());
}

#[test]
fn bad_spec_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "f.csv", "x,y,re_1,im_1\n0,0,1,0\n0,1,1,0\n1,0,1,0\n1,1,1,0\n");
    let out = run(&["grid2d", "--input", s(&p), "--spec", "dihedral:3"]);
    assert_eq!(out.status.code(), Some(2));
}
