use std::path::Path;

use spectral_sbm::harness::{diagnose, diagnose_instance, run_cell, sweep, CellSpec, SweepConfig, CSV_HEADER, DIAGNOSTIC_HEADER};
use spectral_sbm::model::SbmParams;

fn config(out: &Path, extra: &[(&str, &str)]) -> SweepConfig {
    let out = out.to_str().unwrap().to_string();
    let mut pairs = vec![
        ("n", "200"),
        ("a", "4,10,16"),
        ("b", "1,3"),
        ("trials", "3"),
        ("seed", "21"),
        ("timing", "false"),
    ];
    pairs.extend_from_slice(extra);
    let mut c = SweepConfig::from_pairs(pairs).unwrap();
    c.output = out.into();
    c
}

fn body(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect()
}

#[test]
fn header_and_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    sweep(&config(&path, &[])).unwrap();
    let lines = body(&path);
    assert_eq!(lines[0], CSV_HEADER.join(","));
    assert_eq!(lines.len(), 1 + 6);
    assert!(std::fs::read_to_string(&path).unwrap().starts_with('#'));
}

#[test]
fn resumed_sweep_matches_uninterrupted() {
    let dir = tempfile::tempdir().unwrap();
    let whole = dir.path().join("whole.csv");
    sweep(&config(&whole, &[])).unwrap();

    let parts = dir.path().join("parts.csv");
    let mut c = config(&parts, &[]);
    c.max_cells = Some(2);
    assert_eq!(sweep(&c).unwrap().results.len(), 2);
    c.max_cells = None;
    let summary = sweep(&c).unwrap();
    assert_eq!(summary.resumed, 2);
    assert_eq!(summary.results.len(), 4);
    assert_eq!(body(&whole), body(&parts));
}

#[test]
fn resume_refuses_foreign_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    std::fs::write(&path, "x,y\n1,2\n").unwrap();
    assert!(sweep(&config(&path, &[])).is_err());
}

#[test]
fn single_cell_sweep_is_run_cell() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.csv");
    let c = config(&path, &[("a", "12"), ("b", "2")]);
    sweep(&c).unwrap();
    let cell = run_cell(&CellSpec::cells(&c)[0], &c);
    let row = cell.csv_record(false).join(",");
    assert_eq!(body(&path)[1], row);
}

#[test]
fn success_rate_is_monotone_in_s() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(&dir.path().join("m.csv"), &[("a", "5"), ("b", "2"), ("trials", "6")]);
    let cell = run_cell(&CellSpec::cells(&c)[0], &c);
    let mut last = 0.0;
    for s in [0.0, 0.999, 2.0, 5.0, 14.1, 50.0, 199.0] {
        let rate = cell.success_rate_at(s);
        assert!(rate >= last);
        last = rate;
    }
}

#[test]
fn cells_with_p_below_q_are_recorded_not_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pq.csv");
    let c = config(&path, &[("a", "1"), ("b", "3")]);
    let summary = sweep(&c).unwrap();
    assert!(summary.results[0].skipped.is_some());
    assert!(!body(&path)[1].ends_with(','));
}

#[test]
fn diagnose_degree_counter_and_header() {
    let params = SbmParams::binary_symmetric(1000, 20.0, 2.0).unwrap();
    let row = diagnose_instance(&params, 1, 5.0).unwrap();
    assert!(row.h2_violation_frac <= 0.01);
    assert!(row.ratio > 0.5 && row.ratio < 3.0);

    let mut out = Vec::new();
    let rows = diagnose(&[params], &[1, 2], 5.0, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(text.lines().next().unwrap(), DIAGNOSTIC_HEADER.join(","));
    assert_eq!(text.lines().count(), 3);
}
