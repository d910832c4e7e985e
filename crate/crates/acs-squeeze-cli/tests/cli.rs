//! Integration tests for the command-line contract: exit codes, diagnostics,
//! config-file handling, output formats, and round-trips.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_acs-squeeze"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

/// Asserts a failed invocation: exit code 2 and a single-line diagnostic
/// starting with `error:` that mentions every listed fragment.
fn assert_usage_error(out: &Output, fragments: &[&str]) {
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(out));
    let text = stderr(out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1, "diagnostic is not single-line: {text:?}");
    assert!(lines[0].starts_with("error: "), "no error prefix: {text:?}");
    for fragment in fragments {
        assert!(
            lines[0].contains(fragment),
            "diagnostic {:?} does not mention {fragment:?}",
            lines[0]
        );
    }
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("acs-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_file(path: &Path, content: &str) {
    std::fs::write(path, content).unwrap();
}

// ------------------------------------------------------------------ report

const REPORT_ARGS: [&str; 11] = [
    "report",
    "--two-j",
    "2",
    "--theta1",
    "1.55444",
    "--theta2",
    "1.57172",
    "--phi",
    "0.0163226",
    "--phi-r",
    "3.12513",
];

#[test]
fn report_prints_json_to_stdout() {
    let out = run(&REPORT_ARGS);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(doc["command"], "report");
    assert_eq!(doc["input"]["two_j"], 2);
    // This parameter point is squeezed along x (value near 1/2) and the
    // report must say so with plain finite numbers.
    let xi_x = doc["report"]["xi_sorensen"]["x"]
        .as_f64()
        .expect("finite x value");
    assert!(
        (xi_x - 0.5).abs() < 5e-3,
        "unexpected directional value {xi_x}"
    );
}

#[test]
fn report_round_trips_through_its_own_output_byte_for_byte() {
    let dir = temp_dir("roundtrip");
    let first = dir.join("first.json");
    let second = dir.join("second.json");
    let out = run(&[
        "report",
        "--two-j",
        "3",
        "--theta1",
        "0.9",
        "--theta2",
        "2.1",
        "--phi",
        "1.3",
        "--phi-r",
        "4.0",
        "--output",
        first.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let out = run(&[
        "report",
        "--from-file",
        first.to_str().unwrap(),
        "--output",
        second.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    assert_eq!(a, b, "re-reporting from saved input changed the document");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn report_rejects_from_file_combined_with_explicit_parameters() {
    let dir = temp_dir("conflict");
    let saved = dir.join("in.json");
    let out = run(&[
        "report",
        "--two-j",
        "2",
        "--theta1",
        "0.5",
        "--theta2",
        "0.5",
        "--phi",
        "0.0",
        "--phi-r",
        "0.0",
        "--output",
        saved.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = run(&[
        "report",
        "--from-file",
        saved.to_str().unwrap(),
        "--theta1",
        "0.7",
    ]);
    assert_usage_error(&out, &["--from-file"]);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn missing_required_parameters_are_all_named() {
    let out = run(&["report", "--two-j", "4", "--theta1", "0.5"]);
    assert_usage_error(&out, &["theta2", "phi", "phi_r"]);
}

#[test]
fn invalid_physics_parameters_exit_with_a_diagnostic() {
    // theta outside [0, pi] is a domain error, not a crash.
    let out = run(&[
        "report", "--two-j", "4", "--theta1", "4.0", "--theta2", "0.5", "--phi", "0.0", "--phi-r",
        "0.0",
    ]);
    assert_usage_error(&out, &[]);
}

// ------------------------------------------------------------------ config

#[test]
fn config_file_supplies_parameters_and_flags_override_it() {
    let dir = temp_dir("config");
    let cfg = dir.join("run.cfg");
    write_file(
        &cfg,
        "# comment line\ntwo_j = 2\ntheta1 = 0.5\ntheta2 = 0.5\nphi = 0.0\nphi_r = 0.0\n",
    );
    let out = run(&["report", "--config", cfg.to_str().unwrap(), "--two-j", "6"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["input"]["two_j"], 6, "flag did not override config");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn unknown_config_keys_are_rejected_by_name() {
    let dir = temp_dir("unknown-key");
    let cfg = dir.join("run.cfg");
    write_file(&cfg, "two_j = 2\nbogus_knob = 1\n");
    let out = run(&[
        "optimize",
        "--config",
        cfg.to_str().unwrap(),
        "--metric",
        "sorensen-x",
    ]);
    assert_usage_error(&out, &["bogus_knob"]);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn malformed_config_lines_report_the_line_number() {
    let dir = temp_dir("malformed");
    let cfg = dir.join("run.cfg");
    write_file(&cfg, "two_j = 2\nnot a key value pair\n");
    let out = run(&["report", "--config", cfg.to_str().unwrap()]);
    assert_usage_error(&out, &["line 2"]);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn duplicate_config_keys_are_rejected() {
    let dir = temp_dir("duplicate");
    let cfg = dir.join("run.cfg");
    write_file(&cfg, "two_j = 2\ntwo_j = 4\n");
    let out = run(&["report", "--config", cfg.to_str().unwrap()]);
    assert_usage_error(&out, &["two_j"]);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn unreadable_config_path_exits_with_a_diagnostic() {
    let out = run(&["report", "--config", "/nonexistent/path.cfg"]);
    assert_usage_error(&out, &[]);
}

// ----------------------------------------------------------------- optimize

#[test]
fn unknown_metric_names_are_rejected() {
    let out = run(&["optimize", "--two-j", "2", "--metric", "sorensen-w"]);
    assert_usage_error(&out, &["sorensen-w"]);
}

#[test]
fn optimize_emits_seed_and_budget_with_the_result() {
    let out = run(&[
        "optimize",
        "--two-j",
        "2",
        "--metric",
        "planar-yz",
        "--seed",
        "5",
        "--restarts",
        "40",
        "--max-evals",
        "800",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["seed"], 5);
    assert_eq!(doc["config"]["restarts"], 40);
    let best = doc["result"]["best_value"].as_f64().unwrap();
    assert!((best - 0.44906).abs() < 1e-3, "unexpected minimum {best}");
}

// -------------------------------------------------------------------- sweep

/// Every float field in the CSVs uses 12 significant digits in scientific
/// notation with a `.` decimal point, e.g. `3.44976543210e-1`.
fn assert_sci_format(field: &str) {
    let body = field.strip_prefix('-').unwrap_or(field);
    let (mantissa, exponent) = body.split_once('e').unwrap_or_else(|| {
        panic!("field {field:?} is not scientific notation");
    });
    assert_eq!(
        mantissa.len(),
        13,
        "field {field:?} does not carry 12 significant digits"
    );
    assert_eq!(
        &mantissa[1..2],
        ".",
        "field {field:?} missing decimal point"
    );
    assert!(exponent.parse::<i32>().is_ok(), "field {field:?} exponent");
}

#[test]
fn sweep_csv_has_the_documented_schema_and_formatting() {
    let dir = temp_dir("sweep");
    let csv_path = dir.join("sweep.csv");
    let out = run(&[
        "sweep",
        "--metric",
        "sorensen-z",
        "--min-two-j",
        "1",
        "--max-two-j",
        "4",
        "--seed",
        "3",
        "--restarts",
        "60",
        "--max-evals",
        "900",
        "--output",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert!(
        !text.contains("NaN") && !text.contains("inf"),
        "non-finite leak"
    );
    assert!(text.contains("# seed = 3"), "seed not recorded in header");
    let mut data_rows = 0;
    for line in text.lines() {
        if line.starts_with('#') {
            continue;
        }
        if line.starts_with("two_j,") {
            assert_eq!(
                line,
                "two_j,metric,best_value,theta1,theta2,phi,phi_r,evaluations,seed"
            );
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 9, "row width: {line:?}");
        for f in &fields[2..7] {
            assert_sci_format(f);
        }
        data_rows += 1;
    }
    assert_eq!(data_rows, 4, "one row per swept spin");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn sweep_rejects_inverted_spin_ranges() {
    let out = run(&[
        "sweep",
        "--metric",
        "sorensen-x",
        "--min-two-j",
        "4",
        "--max-two-j",
        "2",
    ]);
    assert_usage_error(&out, &[]);
}

// ------------------------------------------------------------------- ramsey

#[test]
fn ramsey_marks_undefined_sensitivities_without_nan() {
    // An equal superposition of the two polar coherent states at 2J = 2 has
    // vanishing mean spin, so the signal slope is zero at every phase and the
    // phase uncertainty is undefined all along the scan.
    let dir = temp_dir("ramsey-undef");
    let csv_path = dir.join("scan.csv");
    let out = run(&[
        "ramsey",
        "--two-j",
        "2",
        "--theta1",
        "0.0",
        "--theta2",
        "3.141592653589793",
        "--phi",
        "0.0",
        "--phi-r",
        "0.0",
        "--phi-steps",
        "7",
        "--output",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert!(
        !text.contains("NaN") && !text.contains("inf"),
        "non-finite leak"
    );
    let data: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("phi,"))
        .collect();
    assert_eq!(data.len(), 7);
    for row in data {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 5, "row width: {row:?}");
        assert_eq!(fields[1], "undefined");
        assert_eq!(fields[2], "undefined");
        assert_eq!(fields[4], "undefined", "flag column");
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn ramsey_scan_of_a_pole_state_sits_on_the_coherent_reference() {
    let out = run(&[
        "ramsey",
        "--two-j",
        "20",
        "--theta1",
        "0.0",
        "--theta2",
        "0.0",
        "--phi",
        "0.0",
        "--phi-r",
        "0.0",
        "--phi-min",
        "0.1",
        "--phi-max",
        "0.4",
        "--phi-steps",
        "4",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    for line in stdout(&out).lines() {
        if line.starts_with('#') || line.starts_with("phi,") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let scaled: f64 = fields[2].parse().unwrap();
        assert!(
            (scaled - 1.0).abs() < 1e-9,
            "scaled uncertainty {scaled} != 1"
        );
        let delta: f64 = fields[1].parse().unwrap();
        let bound: f64 = fields[3].parse().unwrap();
        assert!(
            (delta - bound).abs() < 1e-9,
            "pole state should saturate its Fisher bound: {delta} vs {bound}"
        );
        assert_eq!(fields[4], "ok");
    }
}

#[test]
fn ramsey_rejects_empty_phase_grids() {
    let out = run(&[
        "ramsey",
        "--two-j",
        "2",
        "--theta1",
        "0.0",
        "--theta2",
        "0.0",
        "--phi",
        "0.0",
        "--phi-r",
        "0.0",
        "--phi-steps",
        "0",
    ]);
    assert_usage_error(&out, &[]);
}

// ---------------------------------------------------------------------- fit

#[test]
fn fit_consumes_sweep_output_and_reports_coefficients() {
    let dir = temp_dir("fit");
    let csv_path = dir.join("sweep.csv");
    let out = run(&[
        "sweep",
        "--metric",
        "sorensen-x",
        "--min-two-j",
        "1",
        "--max-two-j",
        "8",
        "--output",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let residuals = dir.join("residuals.csv");
    let out = run(&[
        "fit",
        "--input",
        csv_path.to_str().unwrap(),
        "--degrees",
        "0,2",
        "--residuals",
        residuals.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let coefficients = doc["fit"]["coefficients"].as_array().unwrap();
    assert_eq!(coefficients.len(), 2);
    let c0 = coefficients[0].as_f64().unwrap();
    assert!((c0 - 0.35).abs() < 0.1, "constant coefficient {c0}");
    let res_text = std::fs::read_to_string(&residuals).unwrap();
    assert!(
        res_text.lines().any(|l| l.starts_with("j,")),
        "residual header"
    );
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn fit_rejects_unparseable_degree_lists() {
    let out = run(&["fit", "--input", "/dev/null", "--degrees", "0,two"]);
    assert_usage_error(&out, &["two"]);
}

#[test]
fn fit_reports_the_offending_line_of_a_bad_data_file() {
    let dir = temp_dir("fit-bad");
    let data = dir.join("points.csv");
    write_file(&data, "j,value\n1.0,0.5\n2.0,oops\n");
    let out = run(&["fit", "--input", data.to_str().unwrap(), "--degrees", "0,1"]);
    assert_usage_error(&out, &["line 3"]);
    let _ = std::fs::remove_dir_all(&dir);
}

// ------------------------------------------------------------------- figure

#[test]
fn figure_fig3_writes_the_four_curve_comparison() {
    let dir = temp_dir("fig3");
    let out = run(&[
        "figure",
        "fig3",
        "--seed",
        "7",
        "--phi-min",
        "0.001",
        "--phi-max",
        "0.5",
        "--phi-steps",
        "5",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = std::fs::read_to_string(dir.join("fig3.csv")).unwrap();
    assert!(text.contains("# wineland_y_gauge = msd-aligned"));
    assert!(text.contains("# sorensen_y_gauge = as-optimized"));
    let header = text
        .lines()
        .find(|l| !l.starts_with('#'))
        .expect("has a header row");
    assert_eq!(header, "phi,acs,sorensen_y,planar_yz,wineland_y");
    let first = text.lines().find(|l| l.starts_with("1.0")).unwrap();
    let fields: Vec<&str> = first.split(',').collect();
    let acs: f64 = fields[1].parse().unwrap();
    let wineland: f64 = fields[4].parse().unwrap();
    assert!((acs - 1.0).abs() < 1e-3, "coherent curve off unity: {acs}");
    assert!(wineland < 1.0, "aligned curve not sub-unit at small phase");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn figure_rejects_unknown_kinds() {
    let out = bin()
        .args(["figure", "fig9"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2), "clap usage errors also exit 2");
}

// -------------------------------------------------------------- environment

#[test]
fn invalid_thread_cap_is_rejected() {
    let out = bin()
        .args(REPORT_ARGS)
        .env("ACS_SQUEEZE_THREADS", "zero")
        .output()
        .expect("binary runs");
    assert_usage_error(&out, &["ACS_SQUEEZE_THREADS"]);
}

#[test]
fn thread_cap_of_one_works() {
    let out = bin()
        .args(REPORT_ARGS)
        .env("ACS_SQUEEZE_THREADS", "1")
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "stderr: {}", stderr(&out));
}

// ----------------------------------------------------------------- re-entry

#[test]
fn reproduce_tables_truncated_run_has_the_sweep_schema() {
    let dir = temp_dir("tables-small");
    let out = run(&[
        "reproduce-tables",
        "--max-two-j",
        "2",
        "--seed",
        "1",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    for name in ["table1.csv", "table2.csv"] {
        let text = std::fs::read_to_string(dir.join(name)).unwrap();
        let data_rows = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("two_j,"))
            .count();
        assert_eq!(data_rows, 6, "{name}: 2 spins x 3 metrics");
    }
    let _ = std::fs::remove_dir_all(&dir);
}
