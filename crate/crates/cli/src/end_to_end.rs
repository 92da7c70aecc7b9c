//! Whole-command runs through `run`, checking output and exit codes.

use std::fs;

use crate::run;

fn yamabe(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["yamabe"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const CLOSED_EQ: &str = "dim = 2\nscalar_curvature = 10\nhas_boundary = false\nlambda_max = 20\neig 0 1\neig 5/2 3\neig 7 4\n";
const BOUNDED_EQ: &str =
    "dim = 3\nscalar_curvature = 5\nhas_boundary = true\nboundary_minimal = true\nlambda_max = 20\neig 0 1\neig 5/4 2\neig 4 2\n";

#[test]
fn spectrum_table_for_unit_sphere() {
    let (code, out, _) = yamabe(&["spectrum", "--sphere", "2", "--below", "13", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "index,value,multiplicity\n0,0,1\n1,2,3\n2,6,5\n3,12,7\n");
    let (_, out, _) = yamabe(&["spectrum", "--interval", "1", "--below", "10", "--format", "csv"]);
    assert!(out.ends_with("3,9,1\n"));
}

#[test]
fn scan_text_and_json_agree() {
    let base = ["scan", "--sphere", "2", "--hemisphere", "2", "--window", "1/20:20"];
    let (code, text, _) = yamabe(&base);
    assert_eq!(code, 0);
    let mut json_args = base.to_vec();
    json_args.extend(["--format", "json"]);
    let (_, json, _) = yamabe(&json_args);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let instants = v["instants"].as_array().unwrap();
    assert_eq!(instants.len(), 6);
    assert!(text.contains(&format!("instants: {}", instants.len())));
    for inst in instants {
        let s = inst["s"].as_str().unwrap();
        let row = text.lines().find(|l| l.split_whitespace().next() == Some(s)).unwrap();
        let cells: Vec<&str> = row.split_whitespace().collect();
        assert_eq!(cells[2], inst["multiplicity"].to_string());
        assert_eq!(cells[3], inst["n_minus"].to_string());
        assert_eq!(cells[4], inst["n_plus"].to_string());
    }
    assert!(text.contains(&format!("lambda_max: {}", v["lambda_max"].as_str().unwrap())));
}

#[test]
fn bad_custom_file_is_a_config_error_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.spec", "dim = 2\nscalar_curvature = 2\nhas_boundary = false\nlambda_max = 10\neig 0\n");
    let (code, _, err) = yamabe(&["scan", "--custom", &bad, "--hemisphere", "2"]);
    assert_eq!(code, 3);
    assert!(err.contains("line 5"), "{err}");
}

#[test]
fn degenerate_pair_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(&dir, "a.spec", CLOSED_EQ);
    let b = write(&dir, "b.spec", BOUNDED_EQ);
    let (code, _, err) = yamabe(&["scan", "--custom", &a, "--custom", &b, "--window", "1/10:10"]);
    assert_eq!(code, 2);
    assert!(err.contains("degenerate pair at (i*, j*) = (1, 1)"), "{err}");
}

#[test]
fn branches_csv_crosses_zero_where_expected() {
    let (code, out, _) = yamabe(&["branches", "--sphere", "2", "--hemisphere", "2", "--window", "1/10:4", "--samples", "200"]);
    assert_eq!(code, 0);
    let header = out.lines().find(|l| l.starts_with("s,")).unwrap();
    let cols: Vec<&str> = header.split(',').collect();
    let k = cols.iter().position(|c| *c == "sigma_0_1").expect("sigma_0_1 column");
    let rows: Vec<Vec<f64>> = out
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("s,"))
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 200);
    let crossing = rows.windows(2).find(|w| w[0][k] * w[1][k] < 0.0).expect("sign change");
    assert!(crossing[0][0] < 2.0 && 2.0 < crossing[1][0]);
    assert!(out.contains("# sigma_0_1: i=0 j=1 multiplicity=2 monotonicity=decreasing zero=2"));
}

#[test]
fn interval_branches_of_first_factor_are_constant() {
    let (code, out, _) = yamabe(&["branches", "--sphere", "2", "--interval", "1", "--window", "1/2:3", "--samples", "5"]);
    assert_eq!(code, 0);
    let header = out.lines().find(|l| l.starts_with("s,")).unwrap();
    let cols: Vec<&str> = header.split(',').collect();
    if let Some(k) = cols.iter().position(|c| c.ends_with("_0") && *c != "s") {
        let values: Vec<&str> = out.lines().filter(|l| !l.starts_with('#') && !l.starts_with("s,")).map(|l| l.split(',').nth(k).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[0] == w[1]));
    }
}

#[test]
fn empty_window_is_rejected() {
    let (code, _, err) = yamabe(&["scan", "--sphere", "2", "--hemisphere", "2", "--window", "3:2"]);
    assert_eq!(code, 3);
    assert!(!err.is_empty());
}

#[test]
fn verify_passes_and_catches_faults() {
    let (code, out, _) = yamabe(&["verify", "--sphere", "2", "--hemisphere", "2", "--window", "1/10:10", "--samples", "20000"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("all checks passed"));

    let dir = tempfile::tempdir().unwrap();
    let faulty = write(
        &dir,
        "faulty.spec",
        "dim = 2\nscalar_curvature = 2\nhas_boundary = false\nlambda_max = 30\neig 0 1\neig 2 3\neig 6 4\neig 12 7\neig 20 9\n",
    );
    let good = write(
        &dir,
        "good.spec",
        "dim = 2\nscalar_curvature = 2\nhas_boundary = false\nlambda_max = 30\neig 0 1\neig 2 3\neig 6 5\neig 12 7\neig 20 9\n",
    );
    let (code, out, _) = yamabe(&[
        "verify", "--custom", &faulty, "--hemisphere", "2", "--reference-custom", &good, "--window", "1/10:10", "--samples", "20000",
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL"));

    let (code, out, _) = yamabe(&["verify", "--sphere", "2", "--hemisphere", "2", "--lambda-max", "3", "--samples", "20000"]);
    assert_eq!(code, 1);
    assert!(out.contains("verification FAILED"));
}

#[test]
fn config_file_with_flag_override_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(&dir, "run.cfg", "sphere = 2\nhemisphere = 2\nwindow = 1/2:3\nformat = csv\n");
    let out_path = dir.path().join("report.csv");
    let out_str = out_path.to_string_lossy().into_owned();
    let (code, stdout, _) = yamabe(&["scan", "--config", &cfg, "--window", "1/20:20", "--out", &out_str]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let written = fs::read_to_string(&out_path).unwrap();
    assert!(written.starts_with("s,branches,"));
    assert_eq!(written.lines().count(), 7);
}

#[test]
fn float_mode_prints_round_trip_digits() {
    let (code, out, _) = yamabe(&[
        "scan", "--sphere", "2", "--hemisphere", "2", "--window", "1/20:20", "--mode", "float", "--tol", "1e-12", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    for line in out.lines().skip(1) {
        let s = line.split(',').next().unwrap();
        let digits = s.chars().filter(char::is_ascii_digit).collect::<String>();
        assert_eq!(digits.trim_start_matches('0').len(), 17, "{s}");
    }
    let half = out.lines().find(|l| l.starts_with("0.4999")).expect("row near 1/2");
    let s: f64 = half.split(',').next().unwrap().parse().unwrap();
    assert!((s - 0.5).abs() < 1e-12);
}

#[test]
fn argument_errors_exit_three() {
    assert_eq!(yamabe(&["spectrum", "--sphere", "2"]).0, 0);
    assert_eq!(yamabe(&["scan", "--sphere", "two"]).0, 3);
    assert_eq!(yamabe(&["scan"]).0, 3);
    assert_eq!(yamabe(&["--help"]).0, 0);
}
