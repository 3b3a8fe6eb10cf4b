use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn multipath(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multipath")).args(args).arg("--out").arg(out).output().unwrap()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn fig2_writes_one_table_per_n() {
    let dir = tempfile::tempdir().unwrap();
    let out = multipath(&["fig2", "--points", "11"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for n in 3..=6 {
        let (header, rows) = csv_rows(&dir.path().join(format!("fig2_n{n}.csv")));
        assert_eq!(header, ["one_path_knowledge", "visibility", "coherence"]);
        assert_eq!(rows.len(), 11);
        // Coherence runs from 1 (no path knowledge) to (n−2)/n.
        assert!((rows[0][2] - 1.0).abs() < 1e-12);
        assert!((rows[10][2] - (n as f64 - 2.0) / n as f64).abs() < 1e-12);
    }
    let meta: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("fig2_meta.json")).unwrap()).unwrap();
    assert_eq!(meta["command"], "fig2");
    assert!(meta["constants"]["hbar"].as_f64().unwrap() > 1.05e-34);
}

#[test]
fn fig3_four_path_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    assert!(multipath(&["fig3", "--n", "4", "--points", "3"], dir.path()).status.success());
    let (_, rows) = csv_rows(&dir.path().join("fig3_n4.csv"));
    // Knowledge 0 is β = 1, knowledge 1 is β = 0.
    assert!((rows[0][1] - 4.0 / (3.0 * 3.0_f64.sqrt())).abs() < 1e-6);
    assert!((rows[2][1] - 9.0 / 11.0).abs() < 1e-6);
}

#[test]
fn phase_scan_request_has_4096_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = multipath(&["scan", "--n", "5", "--beta", "0.4"], dir.path());
    assert!(out.status.success());
    let (header, rows) = csv_rows(&dir.path().join("scan.csv"));
    assert_eq!(header, ["theta", "intensity"]);
    assert_eq!(rows.len(), 4096);
}

#[test]
fn fig4_declares_its_sampling() {
    let dir = tempfile::tempdir().unwrap();
    assert!(multipath(&["fig4", "--format", "json"], dir.path()).status.success());
    let doc: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("fig4_tt0.000000.json")).unwrap()).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2048);
    assert_eq!(doc["meta"]["samples"], 2048);
    let range = doc["meta"]["x_range"].as_array().unwrap();
    let period = 0.018e-6 * 37e-3 / 6e-6;
    assert!((range[1].as_f64().unwrap() - 3.0 * period).abs() < 1e-15);
    let peak = rows.iter().map(|r| r["normalized"].as_f64().unwrap()).fold(0.0, f64::max);
    assert_eq!(peak, 1.0);
    let vis: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("fig4_visibility.json")).unwrap()).unwrap();
    let v = vis["rows"].as_array().unwrap();
    assert!(v[4]["visibility"].as_f64().unwrap() > v[0]["visibility"].as_f64().unwrap());
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    fs::write(&config, "[paths]\nn = 3\nbeta = 0.2\n[sweep]\nsamples = 512\n").unwrap();
    let out = dir.path().join("out");
    let status = multipath(&["scan", "--config", config.to_str().unwrap(), "--beta", "0.9", "--format", "json"], &out);
    assert!(status.status.success());
    let doc: Value = serde_json::from_str(&fs::read_to_string(out.join("scan.json")).unwrap()).unwrap();
    assert_eq!(doc["meta"]["n"], 3);
    assert_eq!(doc["meta"]["beta"].as_f64(), Some(0.9));
    assert_eq!(doc["rows"].as_array().unwrap().len(), 512);
}

#[test]
fn negative_spacing_exits_with_validation_code() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    fs::write(&config, "[geometry]\nell = -6e-6\n").unwrap();
    let out = multipath(&["screen", "--config", config.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("geometry.ell"));
}

#[test]
fn far_field_violation_exits_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("near.toml");
    fs::write(&config, "[geometry]\neps = 5e-5\nell = 5e-5\n").unwrap();
    let out = multipath(&["fig4", "--config", config.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unwritable_output_exits_with_code_4() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = multipath(&["decay"], &blocker.join("sub"));
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn missing_config_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = multipath(&["scan", "--config", "/nonexistent/run.toml"], dir.path());
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn screen_gamma_mode_matches_ratio_mode() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(multipath(&["screen", "--t-over-tau", "0.25", "--samples", "512", "--format", "json"], &a).status.success());
    let doc: Value = serde_json::from_str(&fs::read_to_string(a.join("screen.json")).unwrap()).unwrap();
    let gamma = doc["meta"]["gamma"].as_f64().unwrap();
    assert!(multipath(&["screen", "--gamma", &format!("{gamma:e}"), "--samples", "512", "--format", "json"], &b).status.success());
    let other: Value = serde_json::from_str(&fs::read_to_string(b.join("screen.json")).unwrap()).unwrap();
    let t_ratio = other["meta"]["t_over_tau"].as_f64().unwrap();
    assert!((t_ratio - 0.25).abs() < 1e-12);
    for (r1, r2) in doc["rows"].as_array().unwrap().iter().zip(other["rows"].as_array().unwrap()) {
        let (d1, d2) = (r1["density"].as_f64().unwrap(), r2["density"].as_f64().unwrap());
        assert!((d1 - d2).abs() <= 1e-12 * d1.abs().max(1.0));
    }
}

#[test]
fn fig5_and_decay_tables() {
    let dir = tempfile::tempdir().unwrap();
    assert!(multipath(&["fig5", "--n", "4", "--t-over-tau", "0,1,2"], dir.path()).status.success());
    let (header, rows) = csv_rows(&dir.path().join("fig5_n4.csv"));
    assert_eq!(header, ["t_over_tau", "visibility", "coherence"]);
    assert!((rows[1][2] - 0.564386).abs() < 1e-5);
    assert!(multipath(&["decay", "--n", "4", "--t-over-tau", "1"], dir.path()).status.success());
    let (_, rows) = csv_rows(&dir.path().join("decay_n4.csv"));
    assert!((rows[0][1] - rows[0][2]).abs() < 1e-12);
}

#[test]
fn plot_script_lists_the_data_files() {
    let dir = tempfile::tempdir().unwrap();
    assert!(multipath(&["fig5", "--n", "3,4", "--points", "5", "--emit-plot-script"], dir.path()).status.success());
    let script = fs::read_to_string(dir.path().join("plot_fig5.py")).unwrap();
    assert!(script.contains("\"fig5_n3.csv\"") && script.contains("\"fig5_n4.csv\""));
}
