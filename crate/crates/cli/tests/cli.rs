use redord_cli::{cmd_selftest, ExitStatus};
use redord_core::arith::CyclotomicTable;
use std::path::Path;
use std::process::{Command, Output};

fn redord(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_redord")).args(args).output().expect("binary runs")
}

fn run_config(sub: &str, dir: &Path, config: &str, extra: &[&str]) -> Output {
    let path = dir.join("run.toml");
    std::fs::write(&path, config).unwrap();
    let out = dir.join("out");
    let mut args = vec![sub, "--config", path.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    redord(&args)
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join("out").join(name)).unwrap()
}

const ORDER: &str = "seed = 7\n[spec]\ncoeffs = [-2, 0, 1]\nlabel = \"sqrt2\"\n[census]\nx = 20000\nd = 2\nh_grid = [1, 2, 24]\n";
const ROUGH: &str = "[rough]\npoly = [1, 0, 1]\nepsilon = [0.02, 0.04]\nc = 0.05\nx = 30000\n";
const SMOOTH: &str = "[spec]\ncoeffs = [-2, 0, 0, 1]\n[smooth]\nx = 20000\nd = 2\n";
const LINREC: &str = "[linrec]\nchar_coeffs = [-1, -1, 1]\ninitial = [1, 1]\nx = 100\n";
const THRESHOLD: &str =
    "[[specs]]\ncoeffs = [-3, -1, 0, 1]\n[[specs]]\ncoeffs = [-5, 1, 0, 1]\n[threshold]\nk = 3\nepsilon = [0, \"0.5\"]\nx = 5000\n";

#[test]
fn selftest_passes() {
    let o = redord(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS"));
}

#[test]
fn selftest_with_corrupted_table_fails() {
    let bad = CyclotomicTable::standard().with_row(2, vec![2, 1]).unwrap();
    let status = cmd_selftest(&bad);
    assert_eq!(status, ExitStatus::SelftestFailed);
    assert_eq!(status.code(), 1);
}

#[test]
fn order_census_writes_both_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config("order-census", dir.path(), ORDER, &["--workers", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read(dir.path(), "order_census.csv");
    assert!(rows.starts_with("p,in_S,degree,ord,index,passes_h1,passes_h2,passes_h24\n"));
    let summary = read(dir.path(), "density_summary.csv");
    assert_eq!(summary.lines().count(), 1 + 3 * 3);
    let leftovers: Vec<_> = std::fs::read_dir(dir.path().join("out")).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(leftovers.len(), 2, "{leftovers:?}");
}

#[test]
fn malformed_coefficients_exit_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[spec]\ncoeffs = [1, 2, \"x\"]\n[census]\nx = 100\nd = 1\n";
    let o = run_config("order-census", dir.path(), cfg, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn invalid_polynomial_exit_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[census]\nx = 100\nd = 1\n\n[spec]\ncoeffs = [0, 1]\n";
    let o = run_config("order-census", dir.path(), cfg, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 6"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn oversized_bound_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[spec]\ncoeffs = [-2, 0, 1]\n[census]\nx = 2000000\nd = 2\n";
    assert_eq!(run_config("order-census", dir.path(), cfg, &[]).status.code(), Some(3));
}

#[test]
fn missing_config_file_exit_2() {
    let o = redord(&["rough", "--config", "/nonexistent/run.toml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rough_two_epsilons_two_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config("rough", dir.path(), ROUGH, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(dir.path(), "rough_census.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "epsilon,c,x,hits,total,fraction");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.02,0.05,30000,"));
}

#[test]
fn smooth_with_nothing_found_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[spec]\ncoeffs = [-2, 0, 0, 1]\n[smooth]\nx = 50\nd = 2\n";
    let o = run_config("smooth", dir.path(), cfg, &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read(dir.path(), "smooth_filter.csv"), "p,largest_prime_factor,bound\n");
}

#[test]
fn linrec_fibonacci_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config("linrec", dir.path(), LINREC, &[]);
    assert_eq!(o.status.code(), Some(0));
    let csv = read(dir.path(), "linrec.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "p,T,max_dev,bound,pass");
    // 25 primes below 100, minus the excluded p = 5.
    assert_eq!(lines.len(), 1 + 24);
    assert!(lines.contains(&"11,10,2.090909091,11.00000000,1"));
}

#[test]
fn linrec_over_budget_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[linrec]\nchar_coeffs = [-1, -1, 0, 0, 0, 1]\ninitial = [0, 0, 0, 0, 1]\nx = 200\nbudget = 1000\n";
    let o = run_config("linrec", dir.path(), cfg, &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(read(dir.path(), "linrec.csv").contains(",unverified"));
}

#[test]
fn threshold_census_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config("threshold", dir.path(), THRESHOLD, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(dir.path(), "threshold_census.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "k,g,epsilon,x,pass,total,fraction");
    assert_eq!(lines.len(), 3);
}

#[test]
fn threshold_bad_degree_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[spec]\ncoeffs = [-2, 0, 0, 1]\n[threshold]\nk = 5\nepsilon = [0.1]\nx = 100\n";
    let o = run_config("threshold", dir.path(), cfg, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
}

#[test]
fn outputs_do_not_depend_on_worker_count() {
    let cases: [(&str, &str, &[&str]); 5] = [
        ("order-census", ORDER, &["order_census.csv", "density_summary.csv"]),
        ("rough", ROUGH, &["rough_census.csv"]),
        ("smooth", SMOOTH, &["smooth_filter.csv"]),
        ("linrec", LINREC, &["linrec.csv"]),
        ("threshold", THRESHOLD, &["threshold_census.csv"]),
    ];
    for (sub, cfg, files) in cases {
        let mut seen: Option<Vec<String>> = None;
        for w in ["1", "2", "8"] {
            let dir = tempfile::tempdir().unwrap();
            let o = run_config(sub, dir.path(), cfg, &["--workers", w, "--seed", "11"]);
            assert_eq!(o.status.code(), Some(0), "{sub} with {w} workers");
            let got: Vec<String> = files.iter().map(|f| read(dir.path(), f)).collect();
            match &seen {
                None => seen = Some(got),
                Some(first) => assert_eq!(first, &got, "{sub} differs at {w} workers"),
            }
        }
    }
}
