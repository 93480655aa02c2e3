use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn cqnc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cqnc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join(name)
}

fn write_config(dir: &TempDir, body: &str) -> PathBuf {
    let path = dir.path().join("run.toml");
    std::fs::write(&path, body).unwrap();
    path
}

fn run_to_file(command: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        command,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    cqnc(&args)
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect()
}

#[test]
fn fig2_psd_matches_golden_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("psd.csv");
    let o = run_to_file("psd", &data("data/fig2.toml"), &out, &[]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let produced = std::fs::read_to_string(&out).unwrap();
    let golden = std::fs::read_to_string(data("golden/fig2_psd.csv")).unwrap();
    assert_eq!(data_rows(&produced).len(), 2000);
    assert!(
        produced == golden,
        "psd output drifted from tests/golden/fig2_psd.csv"
    );
}

#[test]
fn every_command_reruns_bit_identically() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "preset = \"cqnc-matched\"\nomega_count = 300\npower_count = 50\n",
    );
    for command in ["psd", "power-sweep", "check", "roots"] {
        let a = dir.path().join(format!("{command}-a.csv"));
        let b = dir.path().join(format!("{command}-b.csv"));
        run_to_file(command, &config, &a, &[]);
        run_to_file(command, &config, &b, &[]);
        assert_eq!(
            std::fs::read(&a).unwrap(),
            std::fs::read(&b).unwrap(),
            "{command}"
        );
    }
}

#[test]
fn power_sweep_has_one_row_per_power() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "preset = \"fig2\"\npower_count = 37\n");
    let out = dir.path().join("power.csv");
    let o = run_to_file("power-sweep", &config, &out, &[]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 37);
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.starts_with("P_L_watts,g,s_standard,"));
    // the 0.3 κ hybrid is past the OPA threshold and must say so
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning:"));
}

#[test]
fn missing_config_exits_2_without_output() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("never.csv");
    let o = run_to_file("psd", &dir.path().join("absent.toml"), &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    assert!(!out.exists());
}

#[test]
fn malformed_values_exit_2() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("never.csv");
    for body in [
        "mode = \"quantum\"\n",
        "kappa = -1.0\n",
        "omega_count = 1\n",
        "no_such_key = 3\n",
        "g = 1e6\nP_L = 0.1\n",
    ] {
        let config = write_config(&dir, body);
        let o = run_to_file("psd", &config, &out, &[]);
        assert_eq!(o.status.code(), Some(2), "{body}");
        assert!(!out.exists(), "{body}");
    }
    let config = write_config(&dir, "preset = \"fig2\"\n");
    assert_eq!(
        run_to_file("psd", &config, &out, &["--mode", "quantum"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(cqnc(&["spectrum"]).status.code(), Some(2));
}

#[test]
fn check_passes_away_from_resonance() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "preset = \"cqnc-matched\"\nomega_max = 0.5\n");
    let out = dir.path().join("check.csv");
    let o = run_to_file("check", &config, &out, &[]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        std::fs::read_to_string(&out).unwrap()
    );
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.contains("# failed_checks=0"));
    assert!(csv.lines().any(
        |l| l.starts_with("roots_closed_form_printed_vs_companion") && l.ends_with(",flagged")
    ));
}

#[test]
fn check_fails_without_cancellation() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "preset = \"cqnc-matched\"\nomega_max = 0.5\nG_em = 0.0\n",
    );
    let out = dir.path().join("check.csv");
    let o = run_to_file("check", &config, &out, &[]);
    assert_eq!(o.status.code(), Some(1));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv
        .lines()
        .any(|l| l.starts_with("cqnc_residual_max_relative") && l.ends_with(",fail")));
}

#[test]
fn json_output_is_self_describing() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "preset = \"fig2\"\nomega_count = 11\nformat = \"json\"\n",
    );
    let o = cqnc(&["psd", "--config", config.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 11);
    assert_eq!(doc["columns"][0], "omega_over_Omega");
    assert_eq!(doc["metadata"]["command"], "psd");

    let csv = cqnc(&[
        "roots",
        "--config",
        config.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(String::from_utf8_lossy(&csv.stdout).contains("set,index,re,im,real,residual"));
}
