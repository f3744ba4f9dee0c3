use std::fs;
use std::process::Command;

fn platespec(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_platespec")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn writes_table_plot_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, _) = platespec(&["eigen", "--sigma", "2", "--alpha", "0.25", "--damped", "--out", d]);
    assert_eq!(code, 0);
    let csv = fs::read_to_string(dir.path().join("eigen.csv")).unwrap();
    assert!(csv.starts_with("r,zone,"));
    assert_eq!(csv.lines().count(), 152);
    assert!(fs::read_to_string(dir.path().join("eigen.gp")).unwrap().contains("'eigen.csv'"));
    assert!(fs::read_to_string(dir.path().join("report.csv")).unwrap().starts_with("criterion,case,"));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "preset = plate\nalpha = 0.25  # override the preset\n").unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, _) = platespec(&["eigen", "--config", cfg.to_str().unwrap(), "--sigma", "1.5", "--out", d]);
    assert_eq!(code, 0);
    let report = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(report.contains("sigma=1.5 alpha=0.25 undamped"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(platespec(&["eigen", "--sigma", "0.5", "--out", d]).0, 2);
    assert_eq!(platespec(&["decay", "--sweep", "gap", "--out", d]).0, 2);
    assert_eq!(platespec(&["decay", "--window", "10:1", "--out", d]).0, 2);
    assert_eq!(platespec(&["eigen", "--preset", "nope", "--out", d]).0, 2);
    assert_eq!(platespec(&["eigen", "--config", "/nonexistent/x.cfg", "--out", d]).0, 2);
}

#[test]
fn failed_checks_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    // The fit window is too early for the slow branch to dominate.
    let (code, err) = platespec(&["decay", "--sigma", "1", "--alpha", "0.75", "--window", "1:10", "--out", d]);
    assert_eq!(code, 1, "{err}");
    assert!(err.contains("FAIL"));
}

#[test]
fn output_is_independent_of_thread_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, threads) in [(&a, "1"), (&b, "3")] {
        let d = dir.path().to_str().unwrap();
        assert_eq!(platespec(&["decay", "--preset", "plate", "--threads", threads, "--out", d]).0, 0);
    }
    for f in ["decay.csv", "decay.gp", "report.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}
