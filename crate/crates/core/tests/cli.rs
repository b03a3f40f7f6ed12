use std::path::{Path, PathBuf};

use proptest::prelude::*;
use tempfile::TempDir;
use tube_energy::cli::{run, CurveDef, CurveSpec, Num, EXIT_CLEAR, EXIT_CONTACT, EXIT_INADMISSIBLE, EXIT_PARSE, EXIT_USAGE};
use tube_energy::energy::energy;

fn write_spec(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["tube-energy"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TORUS: &str = r#"{"curve": {"kind": "circle", "radius": "2"}, "r": "0.5", "energy": {"grid": [24, 24]}}"#;

#[test]
fn energy_row_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let spec_path = write_spec(&dir, "torus.json", TORUS);
    let (code, out, _) = run_cli(&["energy", "--spec", path(&spec_path)]);
    assert_eq!(code, EXIT_CLEAR);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("r,alpha,value,error_estimate,min_far_chord,status"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let spec = CurveSpec::from_json(TORUS).unwrap();
    let want = energy(&spec.tube().unwrap(), &spec.energy_params().unwrap()).unwrap();
    assert_eq!(row[2].parse::<f64>().unwrap().to_bits(), want.value.to_bits());
    assert_eq!(row[5], "clear");
    assert!(out.contains("# grid: 24x24"));
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec_path = write_spec(&dir, "trefoil.json", r#"{"curve": {"kind": "trefoil"}, "r": 0.3}"#);
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    for out in [&out_a, &out_b] {
        let (code, stdout, _) = run_cli(&["energy", "--spec", path(&spec_path), "--grid", "16,8", "--out", path(out)]);
        assert_eq!(code, EXIT_CLEAR);
        assert!(stdout.is_empty());
    }
    assert_eq!(std::fs::read(&out_a).unwrap(), std::fs::read(&out_b).unwrap());
    assert!(std::fs::read_to_string(&out_a).unwrap().contains("# grid: 16x8"));
}

#[test]
fn emitted_spec_parses_back_identically() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"curve": {"kind": "fourier", "center": ["0.1", 0, 0],
        "harmonics": [{"cos": ["2.0000000000000004", 0, 0], "sin": [0, 2, 0]},
                      {"cos": [0, 0, "0.3"], "sin": [0, 0, 0]}]},
        "r": "0.25", "energy": {"grid": [16, 8], "alpha": "1.5"}}"#;
    let spec_path = write_spec(&dir, "f.json", text);
    let (code, out, err) = run_cli(&["energy", "--spec", path(&spec_path), "--format", "json"]);
    assert_eq!(code, EXIT_CLEAR, "{err}");
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let emitted = serde_json::to_string(&doc["spec"]).unwrap();
    let again = CurveSpec::from_json(&emitted).unwrap();
    assert_eq!(again, CurveSpec::from_json(text).unwrap());
    assert_eq!(doc["rows"][0]["status"], "clear");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let fat = write_spec(&dir, "fat.json", r#"{"curve": {"kind": "circle", "radius": 1}, "r": 1.5, "energy": {"grid": [16, 8]}}"#);
    let bad = write_spec(&dir, "bad.json", "{\"curve\": {\"kind\": \"circle\", \"radius\": 1},\n \"r\": 0.5,\n \"grid\": 3}");
    let broken = write_spec(&dir, "broken.json", "{\"curve\": ");
    let torus = write_spec(&dir, "torus.json", TORUS);
    assert_eq!(run_cli(&["energy", "--spec", path(&fat)]).0, EXIT_INADMISSIBLE);
    let (code, _, err) = run_cli(&["energy", "--spec", path(&bad)]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("unknown field `grid`") && err.contains("line 3"), "{err}");
    assert_eq!(run_cli(&["energy", "--spec", path(&broken)]).0, EXIT_PARSE);
    assert_eq!(run_cli(&["energy", "--spec", "/nonexistent/spec.json"]).0, EXIT_USAGE);
    assert_eq!(run_cli(&["energy", "--spec", path(&torus), "--grid", "15,8"]).0, EXIT_USAGE);
    assert_eq!(run_cli(&["energy", "--spec", path(&torus), "--format", "xml"]).0, EXIT_USAGE);
    assert_eq!(run_cli(&["sweep-r", "--spec", path(&torus), "--r-list", ""]).0, EXIT_USAGE);
    assert_eq!(run_cli(&["exponent-study", "--geometry", "point", "--alphas", "3"]).0, EXIT_USAGE);
}

#[test]
fn report_classifies() {
    let dir = tempfile::tempdir().unwrap();
    let torus = write_spec(&dir, "torus.json", TORUS);
    let fat = write_spec(&dir, "fat.json", r#"{"curve": {"kind": "circle", "radius": 1}, "r": 1.5}"#);
    let (code, out, _) = run_cli(&["report", "--spec", path(&torus)]);
    assert_eq!(code, EXIT_CLEAR);
    assert!(out.lines().any(|l| l == "classification,clear"));
    let (code, out, _) = run_cli(&["report", "--spec", path(&fat), "--format", "json"]);
    assert_eq!(code, EXIT_INADMISSIBLE);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["rows"][0]["value"], "locally_inadmissible");
}

#[test]
fn sweeps_produce_one_row_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let unit = write_spec(&dir, "unit.json", r#"{"curve": {"kind": "circle", "radius": 1}, "r": 0.2, "energy": {"grid": [16, 16]}}"#);
    let (code, out, _) = run_cli(&["sweep-r", "--spec", path(&unit), "--r-list", "0.2,0.1", "--ohara-grid", "256"]);
    assert_eq!(code, EXIT_CLEAR);
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "r,F,F_over_4pi2,ohara_gap,error_estimate,min_far_chord,status");
    assert_eq!(rows.len(), 3);
    let (code, out, _) = run_cli(&["sweep-aspect", "--spec", path(&unit), "--aspects", "2,0.5"]);
    // aspect 0.5 means r κ_max = 2
    assert_eq!(code, EXIT_INADMISSIBLE);
    assert!(out.lines().nth(2).unwrap().ends_with("locally_inadmissible"));
}

#[test]
fn exponent_study_flags_divergence() {
    let (code, out, _) = run_cli(&["exponent-study", "--geometry", "point", "--alphas", "2.5", "--format", "json"]);
    assert_eq!(code, EXIT_CONTACT);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
    assert_eq!(doc["rows"][2]["verdict"], "diverges");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn specs_round_trip(radius in 0.1..10.0_f64, frac in 0.01..0.99_f64, alpha in 0.1..2.9_f64) {
        let mut spec = CurveSpec::from_json(r#"{"curve": {"kind": "trefoil"}, "r": 1}"#).unwrap();
        spec.curve = CurveDef::Circle { radius: Num(radius) };
        spec.r = Num(frac * radius);
        spec.energy.alpha = Num(alpha);
        let again = CurveSpec::from_json(&spec.to_json()).unwrap();
        prop_assert_eq!(again, spec);
    }
}
