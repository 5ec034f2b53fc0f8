//! End-to-end tests of the `cavity-walk` binary: exit statuses, output
//! schemas, config-file precedence, and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cavity-walk"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout(output: &Output) -> &str {
    std::str::from_utf8(&output.stdout).expect("stdout should be UTF-8")
}

fn stderr(output: &Output) -> &str {
    std::str::from_utf8(&output.stderr).expect("stderr should be UTF-8")
}

fn tmp_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

/// Parses one CSV data line into its comma-separated fields.
fn fields(line: &str) -> Vec<&str> {
    line.split(',').collect()
}

fn parse_f64(text: &str) -> f64 {
    text.parse().unwrap_or_else(|_| panic!("expected a real number, got {text:?}"))
}

#[test]
fn usage_errors_exit_2_and_name_the_flag() {
    let zero_n = run(&["evolve", "--n", "0", "--t", "1"]);
    assert_eq!(zero_n.status.code(), Some(2));
    assert!(stderr(&zero_n).contains("--n"), "stderr: {}", stderr(&zero_n));

    let missing_n = run(&["evolve", "--t", "1"]);
    assert_eq!(missing_n.status.code(), Some(2));
    assert!(stderr(&missing_n).contains("--n"), "stderr: {}", stderr(&missing_n));

    let missing_t = run(&["propagator", "--n", "2"]);
    assert_eq!(missing_t.status.code(), Some(2));
    assert!(stderr(&missing_t).contains("--t"), "stderr: {}", stderr(&missing_t));

    let unknown_flag = run(&["propagator", "--n", "2", "--t", "1", "--frobnicate"]);
    assert_eq!(unknown_flag.status.code(), Some(2));

    let unknown_command = run(&["transmogrify"]);
    assert_eq!(unknown_command.status.code(), Some(2));

    let swapped_pair = run(&["evolve", "--n", "4", "--t", "1", "--r", "3", "--s", "3"]);
    assert_eq!(swapped_pair.status.code(), Some(2));
    assert!(stderr(&swapped_pair).contains("distinct"), "stderr: {}", stderr(&swapped_pair));
}

#[test]
fn config_file_errors_exit_2_and_name_the_line() {
    let path = tmp_path("bad-key.conf");
    std::fs::write(&path, "n = 4\nwavelength = 3\n").unwrap();
    let output = run(&["max-deloc", "--config", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    let message = stderr(&output);
    assert!(message.contains("wavelength") && message.contains("line 2"), "stderr: {message}");

    let missing = run(&["max-deloc", "--config", tmp_path("no-such.conf").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn negativity_of_balanced_superposition_is_one_half() {
    let output = run(&["negativity", "--theta", "0.7853981634"]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let lines: Vec<&str> = stdout(&output).lines().collect();
    assert_eq!(lines[0], "theta,phi,negativity");
    let row = fields(lines[1]);
    assert_eq!(parse_f64(row[0]), 0.7853981634);
    assert!((parse_f64(row[2]) - 0.5).abs() < 1e-9, "negativity row: {:?}", row);
}

#[test]
fn propagator_at_time_zero_is_the_identity() {
    let output = run(&["propagator", "--n", "3", "--t", "0"]);
    assert_eq!(output.status.code(), Some(0));
    let lines: Vec<&str> = stdout(&output).lines().collect();
    assert_eq!(lines[0], "j,l,re,im");
    assert_eq!(lines.len(), 1 + 9);
    for line in &lines[1..] {
        let row = fields(line);
        let (j, l) = (row[0], row[1]);
        let expected = if j == l { 1.0 } else { 0.0 };
        assert!((parse_f64(row[2]) - expected).abs() < 1e-12, "row: {line}");
        assert!(parse_f64(row[3]).abs() < 1e-12, "row: {line}");
    }
}

#[test]
fn evolve_reports_the_two_photon_walk_amplitudes() {
    // Two cavities, photons initially both in cavity 1, at Jt = π/4:
    // amplitudes (cos²(Jt), √2·cos(Jt)·sin(Jt), sin²(Jt)) in magnitude,
    // i.e. (1/2, 1/√2, 1/2).
    let output = run(&["evolve", "--n", "2", "--t", "7.853981633974483", "--theta", "0"]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let lines: Vec<&str> = stdout(&output).lines().collect();
    assert_eq!(lines[0], "m,n,re,im");
    assert_eq!(lines.len(), 1 + 3);
    for (line, expected) in lines[1..].iter().zip([0.5, 0.5_f64.sqrt(), 0.5]) {
        let row = fields(line);
        let magnitude = parse_f64(row[2]).hypot(parse_f64(row[3]));
        assert!((magnitude - expected).abs() < 1e-9, "row: {line}");
    }
}

#[test]
fn correlations_emit_the_delocalization_trailer() {
    let output = run(&[
        "correlations",
        "--n",
        "2",
        "--theta",
        "0.7853981633974483",
        "--t",
        "7.853981633974483",
    ]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "m,n,Q,P");
    let trailer = lines.last().unwrap();
    let s_value = parse_f64(trailer.strip_prefix("# S=").expect("trailer comment"));
    assert!((s_value - 1.0).abs() < 1e-9, "S = {s_value}");
}

#[test]
fn fig1_emits_the_full_grid_deterministically() {
    let args = ["fig1", "--n", "2", "--t-max", "50", "--dt", "0.5"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr(&first));
    let text = stdout(&first);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,r,s,theta,phi,s_max,t_at_max,negativity");
    // 33 mixing angles × 5 phases.
    assert_eq!(lines.len(), 1 + 33 * 5);
    for line in &lines[1..] {
        assert_eq!(fields(line)[..3], ["2", "1", "2"], "row: {line}");
    }
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout, "reruns must be byte-identical");
}

#[test]
fn fig2_sweeps_ascending_chain_lengths() {
    let output = run(&["fig2", "--n", "3", "--t-max", "50", "--dt", "0.5"]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let lines: Vec<&str> = stdout(&output).lines().collect();
    // Chains N = 2, 3 at two (theta, phi) settings each.
    assert_eq!(lines.len(), 1 + 2 * 2);
    let sizes: Vec<&str> = lines[1..].iter().map(|l| fields(l)[0]).collect();
    assert_eq!(sizes, ["2", "2", "3", "3"]);
}

#[test]
fn figure_sweeps_reject_overridden_scan_flags() {
    let output = run(&["fig1", "--n", "2", "--theta", "0.3"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("--theta"), "stderr: {}", stderr(&output));

    let output = run(&["fig2", "--r", "1"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("--r"), "stderr: {}", stderr(&output));
}

#[test]
fn command_line_overrides_config_file_values() {
    let path = tmp_path("angles.conf");
    std::fs::write(&path, "# shared run configuration\ntheta = 0.3\nphi = 1.0 # trailing\n")
        .unwrap();

    let from_file = run(&["negativity", "--config", path.to_str().unwrap()]);
    assert_eq!(from_file.status.code(), Some(0));
    let row = fields(stdout(&from_file).lines().nth(1).unwrap());
    let expected = (0.6_f64).sin() / 2.0;
    assert!((parse_f64(row[2]) - expected).abs() < 1e-12, "row: {row:?}");

    let overridden =
        run(&["negativity", "--config", path.to_str().unwrap(), "--theta", "0"]);
    assert_eq!(overridden.status.code(), Some(0));
    let row = fields(stdout(&overridden).lines().nth(1).unwrap());
    assert_eq!(parse_f64(row[0]), 0.0);
    assert_eq!(parse_f64(row[2]), 0.0);
}

#[test]
fn json_output_mirrors_the_csv_schema() {
    let output = run(&[
        "correlations",
        "--n",
        "2",
        "--theta",
        "0.7853981633974483",
        "--t",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(stdout(&output)).expect("valid JSON");
    assert!(parsed["S"].is_number());
    let rows = parsed["rows"].as_array().expect("rows array");
    assert_eq!(rows.len(), 3);
    for key in ["m", "n", "Q", "P"] {
        assert!(rows[0].get(key).is_some(), "missing key {key}");
    }

    let sweep = run(&["max-deloc", "--n", "2", "--format", "json"]);
    assert_eq!(sweep.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(stdout(&sweep)).expect("valid JSON");
    let row = &parsed.as_array().expect("array of records")[0];
    for key in ["N", "r", "s", "theta", "phi", "s_max", "t_at_max", "negativity"] {
        assert!(row.get(key).is_some(), "missing key {key}");
    }
}

#[test]
fn out_flag_writes_the_table_to_a_file() {
    let path = tmp_path("sweep-row.csv");
    let output = run(&[
        "max-deloc",
        "--n",
        "2",
        "--theta",
        "0.7853981633974483",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    assert!(stdout(&output).is_empty(), "table must go to the file only");
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,r,s,theta,phi,s_max,t_at_max,negativity");
    let row = fields(lines[1]);
    assert!((parse_f64(row[5]) - 1.0).abs() < 1e-9, "s_max row: {row:?}");
    assert!((parse_f64(row[6]) - 7.853981634).abs() < 1e-5, "t_at_max row: {row:?}");
}

#[test]
fn verify_passes_and_reports_its_seed() {
    let output = run(&["verify", "--seed", "7"]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("seed = 7"), "report: {text}");
    assert_eq!(text.matches("PASS").count(), 4, "report: {text}");
    assert!(!text.contains("FAIL"), "report: {text}");

    let rerun = run(&["verify", "--seed", "7"]);
    assert_eq!(output.stdout, rerun.stdout, "verify must be deterministic per seed");
    let default_seed = run(&["verify"]);
    assert!(stdout(&default_seed).contains("seed = 42"));
}
