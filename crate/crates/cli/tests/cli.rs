use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_torsionkit"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/golden").join(name)
}

fn run(args: &[&str]) -> (i32, String) {
    let out: Output = bin().args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn cubic_scan_finds_six_lines() {
    let p = golden("cubic.poly");
    let (code, out) = run(&["torus-scan", "--polys", p.to_str().unwrap(), "--subspace", "identity"]);
    assert_eq!(code, 0, "{out}");
    let lines: Vec<&str> = out.lines().filter(|l| l.starts_with("line ")).collect();
    assert_eq!(lines.len(), 6, "{out}");
    for want in ["(1, -1, t)", "(-1, 1, t)", "(t, 1, -1)", "(t, -1, 1)", "(1, t, -1)", "(-1, t, 1)"] {
        assert!(lines.iter().any(|l| l.ends_with(want)), "missing {want} in {out}");
    }
}

#[test]
fn affine_height_is_exact_log3() {
    let (code, out) = run(&["height", "--affine", "2/3"]);
    assert_eq!(code, 0);
    assert!(out.contains("[exact] exact log(3)"), "{out}");
}

#[test]
fn theta_with_single_current_is_infeasible() {
    let g = data("theta.net");
    let (code, out) = run(&["network", "--graph", g.to_str().unwrap(), "--solve-moduli"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("infeasible"), "{out}");
}

#[test]
fn two_edge_trace_matrix() {
    let g = data("two.net");
    let (code, out) = run(&["network", "--graph", g.to_str().unwrap(), "--trace-matrix"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("1/3 -1/3\n-1/3 1/3"), "{out}");
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(run(&["height", "--affine", "2/x"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.poly");
    std::fs::write(&bad, "vars x y\nx^2 + z\n").unwrap();
    assert_eq!(run(&["torus-scan", "--polys", bad.to_str().unwrap()]).0, 2);
    assert_eq!(run(&["torus-scan", "--polys", "/nonexistent.poly"]).0, 2);
    assert_eq!(run(&["reproduce", "no-such-target"]).0, 2);
}

#[test]
fn cross_ratio_checks() {
    let c = data("cyclo3.cfg");
    let (code, out) = run(&["cross-ratio", "--config", c.to_str().unwrap(), "--check", "torsion", "--torsion-order", "6"]);
    assert_eq!(code, 0, "{out}");
    let q = data("quad.cfg");
    let (code, out) = run(&["cross-ratio", "--config", q.to_str().unwrap(), "--check", "zero-order"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("residues: 1, -1, -2, 2"), "{out}");
    let (code, _) = run(&["cross-ratio", "--config", q.to_str().unwrap(), "--check", "torsion", "--torsion-order", "2"]);
    assert_eq!(code, 1);
}

#[test]
fn ideal_membership() {
    let p = data("circle.poly");
    let (code, out) = run(&["ideal", "--polys", p.to_str().unwrap(), "--op", "member", "--poly", "2*y^2 - 1"]);
    assert_eq!(code, 0, "{out}");
    let (code, _) = run(&["ideal", "--polys", p.to_str().unwrap(), "--op", "member", "--poly", "y"]);
    assert_eq!(code, 1);
}

#[test]
fn reproduce_mismatch_reports_diff() {
    let (code, out) = run(&["reproduce", "charpoly-d4"]);
    assert_eq!(code, 1);
    assert!(out.contains("x^4 - 7*x^3 - 36*x^2 - 7*x + 1"), "{out}");
    let (code, _) = run(&["reproduce", "lem-so"]);
    assert_eq!(code, 0);
}

#[test]
fn reports_are_deterministic_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let p = golden("cubic.poly");
    let mut reports = Vec::new();
    for k in ["1", "2", "1"] {
        let path = dir.path().join(format!("r{}.json", reports.len()));
        let (code, _) = run(&["--threads", k, "--no-timings", "--report", path.to_str().unwrap(), "torus-scan", "--polys", p.to_str().unwrap()]);
        assert_eq!(code, 0);
        reports.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0], reports[2]);
    let v: serde_json::Value = serde_json::from_slice(&reports[0]).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["results"]["lines"].as_array().unwrap().len(), 6);
    assert!(v["verdicts"].as_array().unwrap().iter().all(|x| x["grade"].is_string()));
}
