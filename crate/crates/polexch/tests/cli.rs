//! End-to-end checks of the command-line binary: table shapes, format
//! switching, env-variable defaults, file output and error exits.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polexch"))
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn run_err(args: &[&str]) -> String {
    let out = bin().args(args).output().unwrap();
    assert!(!out.status.success(), "command {args:?} unexpectedly passed");
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn coefficient_table_shape() {
    let text = run_ok(&["coeffs", "--kmax", "2", "--nmax", "6"]);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "k,n,numerator,denominator");
    assert_eq!(lines.len(), 1 + 3 * 7);
    assert_eq!(lines[1], "0,0,1,1");
}

#[test]
fn series_table_covers_all_formulas_and_orders() {
    let text = run_ok(&["j0", "--kmax", "3", "--digits", "15"]);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "formula,K,j0,error,model_error");
    assert_eq!(lines.len(), 1 + 3 * 4);
    for name in ["surf", "sapt", "var"] {
        assert_eq!(lines.iter().filter(|l| l.starts_with(name)).count(), 4);
    }
}

#[test]
fn series_table_restricts_to_one_formula() {
    let text = run_ok(&["j0", "--formula", "sapt", "--kmax", "2", "--digits", "15"]);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines.len(), 1 + 3);
    assert!(lines[1..].iter().all(|l| l.starts_with("sapt,")));
}

#[test]
fn l_value_table_marks_evaluation_method() {
    let text = run_ok(&["lvalues", "--k1max", "1", "--k2max", "1", "--digits", "15"]);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "k1,k2,value,method");
    assert_eq!(lines.len(), 1 + 4);
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        let expected = if cells[1] == "0" {
            "closed-rational"
        } else {
            "quadrature"
        };
        assert_eq!(cells[3], expected, "line {line}");
    }
}

#[test]
fn error_dataset_is_deterministic_and_always_csv() {
    let first = run_ok(&["figure1", "--kmax", "5", "--digits", "20"]);
    let second = run_ok(&["figure1", "--kmax", "5", "--digits", "20"]);
    assert_eq!(first, second);
    let as_json = run_ok(&["figure1", "--kmax", "5", "--digits", "20", "--format", "json"]);
    assert_eq!(first, as_json);
    let lines: Vec<&str> = first.trim_end().lines().collect();
    assert_eq!(
        lines[0],
        "formula,K,j0,error,model_error,log10_error,log10_model"
    );
    assert_eq!(lines.len(), 1 + 3 * 5);
}

#[test]
fn json_format_carries_the_csv_payload() {
    let csv = run_ok(&["j0", "--kmax", "2", "--digits", "15"]);
    let json = run_ok(&["j0", "--kmax", "2", "--digits", "15", "--format", "json"]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&json).unwrap();
    let lines: Vec<&str> = csv.trim_end().lines().collect();
    let header: Vec<&str> = lines[0].split(',').collect();
    assert_eq!(rows.len(), lines.len() - 1);
    for (row, line) in rows.iter().zip(&lines[1..]) {
        let obj = row.as_object().unwrap();
        assert_eq!(obj.len(), header.len());
        for (key, cell) in header.iter().zip(line.split(',')) {
            assert_eq!(obj[*key].as_str().unwrap(), cell, "column {key}");
        }
    }
}

#[test]
fn oracle_row_reports_negative_exchange() {
    let text = run_ok(&["oracle", "--r", "2", "--digits", "20"]);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "R,E_g,E_u,J,scaled_ratio,model,deviation");
    assert_eq!(lines.len(), 2);
    let cells: Vec<&str> = lines[1].split(',').collect();
    let j: f64 = cells[3].parse().unwrap();
    let scaled: f64 = cells[4].parse().unwrap();
    let model: f64 = cells[5].parse().unwrap();
    assert!(j < 0.0);
    assert!((scaled + 1.09240169).abs() < 1e-6);
    assert!((model + 1.25).abs() < 1e-12);
}

#[test]
fn oracle_rejects_separation_outside_range() {
    let err = run_err(&["oracle", "--r", "0.5", "--digits", "20"]);
    assert!(err.contains("R") && err.contains("[1, 40]"), "stderr: {err}");
}

#[test]
fn digits_floor_is_enforced() {
    let err = run_err(&["j0", "--digits", "5"]);
    assert!(err.contains("digits"), "stderr: {err}");
}

#[test]
fn decay_table_needs_enough_orders() {
    let err = run_err(&["table1", "--kmax", "5", "--digits", "20"]);
    assert!(err.contains("K_max"), "stderr: {err}");
}

#[test]
fn environment_variables_supply_defaults() {
    let out = bin()
        .env("POLEXCH_FORMAT", "json")
        .args(["j0", "--kmax", "2", "--digits", "15"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.trim_start().starts_with('['), "not JSON: {text}");
}

#[test]
fn output_file_flag_redirects_table() {
    let path = std::env::temp_dir().join(format!("polexch-cli-out-{}.csv", std::process::id()));
    let out = bin()
        .args(["coeffs", "--kmax", "1", "--nmax", "3"])
        .args(["--out", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(written.starts_with("k,n,numerator,denominator\n"));
    assert_eq!(written.trim_end().lines().count(), 1 + 2 * 4);
}
