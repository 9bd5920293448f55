mod common;

use std::path::PathBuf;

use medbf::cli::{read_column, read_raw_csv, CliError, EXIT_INVALID, EXIT_NUMERICAL};
use medbf::datamodel::derive_stats;
use medbf::engine::{Alternative, CauchyPrior, EngineError, TestSpec};
use medbf::quadrature::QuadratureError;
use medbf_oracle::{grid_log_bf, GridSpec};
use serde_json::Value;

use common::*;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn data_str(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

const SUMMARY: [&str; 12] = [
    "--n-x", "100", "--n-y", "100", "--mean-x", "0", "--mean-y", "0.5", "--sd-x", "1", "--sd-y", "1",
];

fn with_summary(head: &[&'static str], tail: &[&'static str]) -> Vec<&'static str> {
    let mut v = vec!["medbf"];
    v.extend_from_slice(head);
    v.extend_from_slice(&SUMMARY);
    v.extend_from_slice(tail);
    v
}

#[test]
fn sleep_study_block() {
    let (code, out, err) = run_cli(&sleep_study_args());
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("Non-inferiority margin:       1.04 (standardised)\n"));
    assert!(out.contains("                              1.00 (unstandardised)\n"));
    assert!(out.contains("H0 (inferiority):             mu_y - mu_x > ni_margin\n"));
    assert!(out.contains("    BF10 (non-inferiority) = 1.09e+20\n"));
}

#[test]
fn output_is_deterministic() {
    let args = with_summary(&["equiv"], &["--interval", "-0.2,0.4", "--interval-std"]);
    let runs: Vec<_> = (0..3).map(|_| run_cli(&args).1).collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn identical_groups_favour_the_null() {
    let path = data_str("identical_groups.csv");
    let args = ["medbf", "super", "--raw", &path, "--alternative", "two_sided", "--format", "json"];
    let (code, out, err) = run_cli(&args);
    assert_eq!(code, 0, "{err}");
    let json: Value = serde_json::from_str(&out).unwrap();
    let log_bf = json["log_bf"].as_f64().unwrap();
    assert!(log_bf < 0.0);

    let stats = derive_stats(&read_raw_csv(&data("identical_groups.csv")).unwrap().into()).unwrap();
    assert_eq!(stats.t_obs, 0.0);
    let spec = TestSpec::superiority(Alternative::TwoSided);
    let prior = CauchyPrior::new(spec.prior_scale).unwrap();
    let oracle = grid_log_bf(&stats, &prior, &spec, &GridSpec::with_nodes(200_001));
    assert!(rel_log(log_bf, oracle) < 1e-6, "{log_bf} vs {oracle}");

    let (_, text, _) = run_cli(&args[..6]);
    assert!(text.contains("BF10 (superiority) = 0.43\n"), "{text}");
}

#[test]
fn symmetric_interval_expands() {
    let args = [
        "medbf", "equiv", "--n-x", "10", "--n-y", "10", "--mean-x", "0", "--mean-y", "0.05", "--sd-x", "1",
        "--sd-y", "1", "--interval", "0.3", "--interval-std",
    ];
    let (code, out, _) = run_cli(&args);
    assert_eq!(code, 0);
    assert!(out.contains("H0 (equivalence):             delta in (-0.30, 0.30)\n"), "{out}");
    assert!(out.contains("BF01 (equivalence)"));
}

#[test]
fn equivalence_defaults_to_point_null() {
    let (code, out, _) = run_cli(&with_summary(&["equiv"], &[]));
    assert_eq!(code, 0);
    assert!(out.contains("H0 (equivalence):             mu_y == mu_x\n"));
    assert!(out.contains("Equivalence interval:         point null (0)\n"));
}

#[test]
fn raw_column_files() {
    let (x, y) = (data_str("column_x.txt"), data_str("column_y.txt"));
    let (code, out, err) = run_cli(&["medbf", "super", "--raw-x", &x, "--raw-y", &y]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("Data:                         raw data\n"));
    assert_eq!(read_column(&data("column_x.txt"), 'x').unwrap().len(), 5);
}

#[test]
fn four_row_file() {
    let g = read_raw_csv(&data("four_rows.csv")).unwrap();
    assert_eq!(g.x(), &[1.5, 2.0]);
    assert_eq!(g.y(), &[2.5, 3.25]);
}

#[test]
fn large_fixture_moments() {
    let g = read_raw_csv(&data("large_10000.csv")).unwrap();
    let m = g.moments().unwrap();
    assert_eq!((m.n_x, m.n_y), (4848, 5152));
    // exact rational arithmetic on the parsed values
    let expected = [
        (m.mean_x, 12.549654220090759067948937587307797969),
        (m.mean_y, 12.911261335986024845925628127311622096),
        (m.sd_x, 2.2944633297648799185365628310958138111),
        (m.sd_y, 2.3220971137111891423824740169855463027),
    ];
    for (got, want) in expected {
        assert!(((got - want) / want).abs() < 1e-10, "{got} vs {want}");
    }
}

fn error_of(name: &str) -> CliError {
    read_raw_csv(&data(name)).unwrap_err()
}

#[test]
fn csv_errors_are_distinct() {
    assert!(matches!(error_of("missing_column.csv"), CliError::BadHeader { .. }));
    assert!(matches!(error_of("extra_column.csv"), CliError::ColumnCount { line: 4, found: 3, .. }));
    assert!(matches!(error_of("bad_label.csv"), CliError::UnknownGroup { ref label, line: 4, .. } if label == "z"));
    assert!(matches!(error_of("non_numeric.csv"), CliError::NonNumeric { ref value, line: 3, .. } if value == "two"));
    assert!(matches!(error_of("short_group.csv"), CliError::TooFewRows { group: 'x', n: 1, .. }));
    assert!(matches!(error_of("does_not_exist.csv"), CliError::Io { .. }));

    let messages: Vec<String> = [
        "missing_column.csv",
        "extra_column.csv",
        "bad_label.csv",
        "non_numeric.csv",
        "short_group.csv",
    ]
    .iter()
    .map(|n| error_of(n).to_string())
    .collect();
    for (i, a) in messages.iter().enumerate() {
        for b in &messages[i + 1..] {
            assert_ne!(a, b);
        }
    }
}

#[test]
fn bad_label_exits_with_validation_status() {
    let path = data_str("bad_label.csv");
    let (code, out, err) = run_cli(&["medbf", "super", "--raw", &path]);
    assert_eq!(code, EXIT_INVALID);
    assert!(out.is_empty());
    assert!(err.contains("unknown group label `z`"), "{err}");
}

#[test]
fn invocation_errors() {
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["medbf", "super"], "no input given"),
        (with_summary(&["super"], &["--ci-margin", "0.3"]), "conflicting input modes"),
        (vec!["medbf", "super", "--n-x", "10"], "missing --n-y"),
        (with_summary(&["super"], &["--bogus"]), "unexpected argument '--bogus'"),
        (with_summary(&["infer"], &["--ni-margin", "0.2", "--alternative", "one_sided"]), "unexpected argument '--alternative'"),
        (with_summary(&["infer"], &[]), "--ni-margin"),
        (with_summary(&["super"], &["--prior-scale", "-1"]), "prior scale"),
        (with_summary(&["equiv"], &["--interval", "0.4,0.1"]), "exceeds upper bound"),
        (with_summary(&["equiv"], &["--interval", "a,b"]), "not a finite number"),
        (with_summary(&["sweep"], &["--design", "infer", "--scales", "1", "--alternative", "one_sided"]), "--alternative only applies"),
        (with_summary(&["sweep"], &["--design", "infer", "--scales", "1"]), "requires --ni-margin"),
        (with_summary(&["super"], &["--digits", "1"]), "significant_digits"),
        (
            vec!["medbf", "super", "--n-x", "1", "--n-y", "1", "--mean-x", "0", "--mean-y", "1", "--sd-x", "1", "--sd-y", "1"],
            "group x has 1 observation",
        ),
    ];
    for (args, needle) in cases {
        let (code, out, err) = run_cli(&args);
        assert_eq!(code, EXIT_INVALID, "{args:?}: {err}");
        assert!(out.is_empty(), "{args:?}");
        assert!(err.contains(needle), "{args:?}: expected `{needle}` in {err}");
    }
}

#[test]
fn numerical_failures_map_to_status_3() {
    let e = CliError::Engine(EngineError::Quadrature(QuadratureError::NotConverged {
        log_estimate: 0.0,
        log_error: 1.0,
        subdivisions: 2000,
    }));
    assert_eq!(e.exit_code(), EXIT_NUMERICAL);
    let e = CliError::Engine(EngineError::InvalidSpec("x".into()));
    assert_eq!(e.exit_code(), EXIT_INVALID);
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, err) = run_cli(&["medbf", "--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("infer") && out.contains("sweep"));
    assert!(err.is_empty());
}

#[test]
fn json_output_parses() {
    let (code, out, _) = run_cli(&sleep_study_args().into_iter().chain(["--format", "json"]).collect::<Vec<_>>());
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["design"], "non_inferiority");
    assert_eq!(v["direction"], "low");
    assert_eq!(v["input_mode"], "summary-ci");
    assert!(v["ci_convention"].as_str().unwrap().contains("n_x + n_y - 2"));
    let bf = v["bf"].as_f64().unwrap();
    assert!((v["log_bf"].as_f64().unwrap().exp() / bf - 1.0).abs() < 1e-14);
}

#[test]
fn sweep_json_keeps_scale_order() {
    let args = with_summary(&["sweep"], &["--design", "super", "--scales", "5,0.5,1", "--format", "json"]);
    let (code, out, err) = run_cli(&args);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let scales: Vec<f64> = v["sweep"].as_array().unwrap().iter().map(|e| e["scale"].as_f64().unwrap()).collect();
    assert_eq!(scales, [5.0, 0.5, 1.0]);
}

#[test]
fn sweep_text_reports_extremes() {
    let (code, out, _) = run_cli(&with_summary(&["sweep"], &["--design", "super", "--scales", "0.5,5"]));
    assert_eq!(code, 0);
    assert!(out.contains("Minimum:                      9.87 (scale 5.000)\n"), "{out}");
    assert!(out.contains("Maximum:                      51.58 (scale 0.500)\n"), "{out}");
}

#[test]
fn curves_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curves.csv");
    let p = path.to_str().unwrap().to_string();
    let args = with_summary(&["super"], &["--alternative", "one_sided", "--curves", Box::leak(p.into_boxed_str())]);
    let (code, _, err) = run_cli(&args);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("delta,prior,posterior"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 512);
    // one-sided prior has no mass below zero
    assert!(rows.iter().filter(|r| r[0] < 0.0).all(|r| r[1] == 0.0 && r[2] == 0.0));
}
