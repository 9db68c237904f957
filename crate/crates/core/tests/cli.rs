use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use utm_core::cli::{builtin, solve, ScenarioConfig};

fn utm(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_utm")).args(args).current_dir(dir).output().expect("run utm")
}

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(format!("{name}.json"))
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|f| if f.is_empty() { None } else { Some(f.parse().unwrap()) }).collect())
        .collect();
    (header, rows)
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn solve_heat_gaussian_meets_tolerance_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = scenario_path("heat_gaussian");
    let out = utm(&["solve", "--config", cfg.to_str().unwrap(), "--out", "a.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("a.csv"));
    assert_eq!(header, ["x", "t", "u_ac", "u_ref", "abs_err"]);
    assert_eq!(rows.len(), 161);
    let worst = rows.iter().map(|r| r[4].unwrap()).fold(0.0, f64::max);
    assert!(worst <= 1e-6, "max abs err {worst}");
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.json")).unwrap()).unwrap();
    assert!(summary["summary"]["max_abs_err"].as_f64().unwrap() <= 1e-6);
    assert_eq!(summary["rows"][0]["provenance"], "continued");

    let again = Command::new(env!("CARGO_BIN_EXE_utm"))
        .args(["solve", "--scenario", "heat_gaussian", "--out", "b.csv"])
        .env("UTM_THREADS", "3")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(again.status.code(), Some(0));
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);

    // reparsed values against the in-memory run
    let mem = solve(&ScenarioConfig::from_json(builtin("heat_gaussian").unwrap()).unwrap()).unwrap();
    for (row, m) in rows.iter().zip(&mem.rows) {
        assert!((row[2].unwrap() - m.u_ac).abs() <= 1e-12 * m.u_ac.abs().max(1e-300));
        assert_eq!(row[0].unwrap(), m.x);
    }
}

#[test]
fn unknown_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = builtin("heat_gaussian").unwrap().replace("\"tol\"", "\"tolerence\"");
    let p = write_config(dir.path(), "bad.json", &text);
    let out = utm(&["solve", "--config", p.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tolerence"));
}

#[test]
fn missing_config_and_bad_flags_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(utm(&["solve", "--config", "nope.json"], dir.path()).status.code(), Some(2));
    assert_eq!(utm(&["solve", "--scenario", "nope"], dir.path()).status.code(), Some(2));
    assert_eq!(utm(&["solve"], dir.path()).status.code(), Some(2));
    assert_eq!(utm(&["solve", "--scenario", "heat_gaussian", "--tol", "-1"], dir.path()).status.code(), Some(2));
}

#[test]
fn numerical_failure_names_the_sample() {
    let dir = tempfile::tempdir().unwrap();
    let text = builtin("interval_gaussian").unwrap().replace("\"x_max\": 2", "\"x_max\": 9");
    let p = write_config(dir.path(), "far.json", &text);
    let out = utm(&["solve", "--config", p.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sample x ="));
}

#[test]
fn homogeneous_scenario_is_odd_row_by_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = utm(&["solve", "--scenario", "heat_images", "--out", "img.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = read_csv(&dir.path().join("img.csv"));
    let n = rows.len();
    for i in 0..n {
        let (a, b) = (&rows[i], &rows[n - 1 - i]);
        assert_eq!(a[0].unwrap(), -b[0].unwrap());
        assert!((a[2].unwrap() + b[2].unwrap()).abs() < 1e-12);
    }
}

#[test]
fn map_initial_continuity_and_jump() {
    let dir = tempfile::tempdir().unwrap();
    let out = utm(&["map-initial", "--scenario", "heat_gaussian", "--out", "w.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = read_csv(&dir.path().join("w.csv"));
    assert_eq!(header, ["x", "w0", "u0_analytic_continuation"]);
    assert_eq!(rows.len(), 161);
    let s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("w.json")).unwrap()).unwrap();
    assert!(s["jumps"][0]["jump"].as_f64().unwrap().abs() < 1e-8);
    assert_eq!(s["compatible_through_order_2"], true);

    let out = utm(&["map-initial", "--scenario", "heat_texp", "--out", "w2.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("w2.json")).unwrap()).unwrap();
    // left limit tilde f0(0,0) - u0(0) = 2 f0(0) - u0(0), right limit u0(0)
    let u00 = (-1.0f64).exp();
    let jump = s["jumps"][0]["jump"].as_f64().unwrap();
    assert!((jump - 2.0 * u00).abs() < 1e-12, "{jump}");
    assert_eq!(s["compatible_through_order_2"], false);
}

#[test]
fn kdv2_incompatible_map_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let out = utm(&["map-initial", "--scenario", "kdv2_incompatible"], dir.path());
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn converge_reports_second_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = utm(&["converge", "--scenario", "heat_prob1", "--out", "c.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("c.csv"));
    assert_eq!(header, ["t", "h", "max_err", "observed_order", "symmetry_defect"]);
    assert_eq!(rows.len(), 3);
    let order = rows[2][3].unwrap();
    assert!((1.7..=2.3).contains(&order), "order {order}");
    assert!(rows[0][3].is_none());
}

#[test]
fn converge_homogeneous_checks_antisymmetry() {
    let dir = tempfile::tempdir().unwrap();
    let out = utm(&["converge", "--scenario", "heat_prob1_homogeneous", "--out", "h.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = read_csv(&dir.path().join("h.csv"));
    assert!(rows.iter().all(|r| r[4].unwrap() < 1e-10));
    let s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("h.json")).unwrap()).unwrap();
    assert_eq!(s["times"][0]["symmetry_ok"], true);
}

#[test]
fn converge_needs_three_spacings() {
    let dir = tempfile::tempdir().unwrap();
    let text = builtin("heat_prob1").unwrap().replace("[0.1, 0.05, 0.025]", "[0.05]");
    let p = write_config(dir.path(), "one.json", &text);
    let out = utm(&["converge", "--config", p.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = utm(&["converge", "--scenario", "heat_gaussian"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn list_scenarios_names_every_file() {
    let out = utm(&["list-scenarios"], Path::new("."));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    for entry in std::fs::read_dir(dir).unwrap() {
        let name = entry.unwrap().path().file_stem().unwrap().to_string_lossy().to_string();
        assert!(text.contains(&name), "{name} not listed");
    }
}
