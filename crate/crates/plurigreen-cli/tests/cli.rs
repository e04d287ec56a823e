//! End-to-end binary behavior: exit codes, file parsing, CSV scans and
//! byte-identical reruns.

use std::io::Write;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_plurigreen"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("PLURIGREEN_SEED").output().expect("spawn plurigreen")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn green_ball_brackets_log_half() {
    let out = run(&[
        "green",
        "--domain",
        "builtin:ball2",
        "--z",
        "0.5,0",
        "--w",
        "0,0",
        "--restarts",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let lo = v["lo"].as_f64().unwrap();
    let hi = v["hi"].as_f64().unwrap();
    let target = 0.5f64.ln();
    assert!(lo <= target + 1e-12 && target <= hi + 1e-12);
    assert!(hi - lo <= 0.05);
}

#[test]
fn green_at_pole_prints_inf_strings() {
    let out = run(&["green", "--domain", "builtin:disk", "--z", "0.3", "--w", "0.3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["lo"], "-inf");
    assert_eq!(v["hi"], "-inf");
}

#[test]
fn malformed_domain_file_exits_2() {
    let dir = std::env::temp_dir().join("plurigreen_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "{{ not json").unwrap();
    let out = run(&["green", "--domain", path.to_str().unwrap(), "--z", "0", "--w", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn point_outside_domain_exits_2() {
    let out = run(&["green", "--domain", "builtin:disk", "--z", "1.5", "--w", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_suite_exits_2() {
    let out = run(&["verify", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn infeasible_search_exits_4() {
    // hyperbolically far pair with a starved budget: the Kobayashi engine
    // reports the +∞ sentinel
    let out = bin()
        .args([
            "kobayashi",
            "--domain",
            "builtin:bidisk",
            "--z",
            "0.999,0.999",
            "--w",
            "-0.999,-0.999",
            "--restarts",
            "1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn domain_file_roundtrip() {
    let dir = std::env::temp_dir().join("plurigreen_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ball.json");
    std::fs::write(&path, r#"{"type":"ball","center":[[0,0],[0,0]],"radius":2.0}"#).unwrap();
    let out = run(&[
        "green",
        "--domain",
        path.to_str().unwrap(),
        "--z",
        "0.5,0",
        "--w",
        "0,0",
        "--restarts",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let target = 0.25f64.ln();
    assert!((v["lo"].as_f64().unwrap() - target).abs() < 1e-9);
}

#[test]
fn scan_disk_grid_has_closed_form_lows() {
    let out = run(&[
        "scan",
        "--domain",
        "builtin:disk",
        "--w",
        "0",
        "--grid",
        "9",
        "--extent",
        "1.2",
        "--restarts",
        "0",
        "--workers",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "re_z1,im_z1,status,lo,hi,lo_witness,hi_witness,certified"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 81);
    let mut inside = 0;
    let mut outside = 0;
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        match cells[2] {
            "inside" => {
                inside += 1;
                let re: f64 = cells[0].parse().unwrap();
                let im: f64 = cells[1].parse().unwrap();
                let lo: f64 = cells[3].parse().unwrap();
                if re == 0.0 && im == 0.0 {
                    assert_eq!(lo, f64::NEG_INFINITY, "pole row {row}");
                    continue;
                }
                let expected = (re * re + im * im).sqrt().ln();
                assert!((lo - expected).abs() <= 1e-9, "row {row}");
            }
            "outside" => outside += 1,
            other => panic!("unexpected status {other}"),
        }
    }
    assert!(inside > 20 && outside > 20);
}

#[test]
fn empty_grid_scan_is_header_only() {
    let out = run(&[
        "scan", "--domain", "builtin:disk", "--w", "0", "--grid", "0", "--extent", "1.0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 1);
}

#[test]
fn verify_rerun_is_byte_identical() {
    let a = bin().args(["verify", "pole", "--seed", "42"]).output().unwrap();
    let b = bin().args(["verify", "pole", "--seed", "42"]).output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    // env var seeds the same way
    let c = bin()
        .args(["verify", "pole"])
        .env("PLURIGREEN_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn describe_is_json_with_defaults() {
    let out = run(&["describe"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["defaults"]["restarts"], 32);
    assert_eq!(v["defaults"]["degree"], 6);
    assert!(v["sublevel_instance"]["c"].as_array().unwrap().len() == 8);
}

#[test]
fn continuity_scan_via_path_file_detects_witness() {
    let dir = std::env::temp_dir().join("plurigreen_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("path.json");
    // the designed sequence z_j = (1/2, c_j/2) → (1/2, 0) with pole at 0
    let params = plurigreen::geometry::SublevelParams::default_instance();
    let mut entries = Vec::new();
    for &c in params.c().iter().skip(2) {
        entries.push(serde_json::json!({
            "z": [[0.5, 0.0], [c / 2.0, 0.0]],
            "w": [[0.0, 0.0], [0.0, 0.0]],
        }));
    }
    entries.push(serde_json::json!({
        "z": [[0.5, 0.0], [0.0, 0.0]],
        "w": [[0.0, 0.0], [0.0, 0.0]],
    }));
    std::fs::write(&path, serde_json::Value::Array(entries).to_string()).unwrap();
    let out = run(&[
        "continuity-scan",
        "--domain",
        "builtin:sublevel",
        "--path",
        path.to_str().unwrap(),
        "--restarts",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["verdict"], "DISCONTINUITY WITNESS");
}

#[test]
fn ratio_and_sigma_commands_roundtrip() {
    let out = run(&[
        "ratio-test",
        "--domain",
        "builtin:ball2",
        "--w0",
        "0,0",
        "--excluded-radius",
        "0.3",
        "--eps",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!(v["delta"].as_f64().unwrap() >= 0.01);

    let out = run(&[
        "sigma",
        "--domain",
        "builtin:ball2",
        "--w",
        "0,0",
        "--metric",
        "bergman-ball",
        "--restarts",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let shi = v["sigma_s"]["hi"]["value"].as_f64().unwrap();
    assert!((shi + 3.0f64.sqrt().ln()).abs() <= 0.1);
}
