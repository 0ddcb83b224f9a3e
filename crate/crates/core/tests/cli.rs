use std::path::Path;
use std::process::{Command, Output};

fn sbm(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sbm")).args(args).current_dir(cwd).output().unwrap()
}

fn stdout_value(out: &Output, key: &str) -> Option<String> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")).map(String::from))
}

#[test]
fn generate_then_detect() {
    let dir = tempfile::tempdir().unwrap();
    let gen = sbm(&["generate", "--n", "400", "--a", "20", "--b", "2", "--seed", "4", "--out", "g.txt"], dir.path());
    assert!(gen.status.success(), "{}", String::from_utf8_lossy(&gen.stderr));
    assert!(dir.path().join("g.txt.truth").exists());

    let det = sbm(
        &["detect", "--input", "g.txt", "--k", "2", "--truth", "g.txt.truth", "--out", "est.txt", "--jobs", "2"],
        dir.path(),
    );
    assert!(det.status.success(), "{}", String::from_utf8_lossy(&det.stderr));
    assert_eq!(stdout_value(&det, "misclassified").as_deref(), Some("0"));
    assert_eq!(stdout_value(&det, "n").as_deref(), Some("400"));
    let labels = std::fs::read_to_string(dir.path().join("est.txt")).unwrap();
    assert_eq!(labels.lines().count(), 400);
}

#[test]
fn detect_output_is_stable_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    sbm(&["generate", "--n", "300", "--p", "0.2", "--q", "0.03", "--out", "g.txt"], dir.path());
    let one = sbm(&["detect", "--input", "g.txt", "--k", "2", "--jobs", "1"], dir.path());
    let four = sbm(&["detect", "--input", "g.txt", "--k", "2", "--jobs", "4"], dir.path());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn sweep_from_config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("sweep.cfg"),
        "# grid\nn = 200\na = 6,12   # two columns\nb = 1\ntrials = 2\nout = ignored.csv\n",
    )
    .unwrap();
    let out = sbm(&["sweep", "--config", "sweep.cfg", "--out", "s.csv", "--no-timing", "--exact"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!dir.path().join("ignored.csv").exists());
    let text = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);
    assert_eq!(stdout_value(&out, "cells_run").as_deref(), Some("2"));
}

#[test]
fn diagnose_writes_one_row_per_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = sbm(&["diagnose", "--n", "200,400", "--a", "20", "--b", "2", "--trials", "2", "--out", "d.csv"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("d.csv")).unwrap();
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = sbm(&["detect", "--input", "nope.txt", "--k", "2"], dir.path());
    assert_eq!(missing.status.code(), Some(3));
    let bad_value = sbm(&["sweep", "--n", "ten", "--a", "1", "--b", "1"], dir.path());
    assert_eq!(bad_value.status.code(), Some(2));
    let bad_model = sbm(&["generate", "--n", "10", "--a", "1", "--out", "g.txt"], dir.path());
    assert_eq!(bad_model.status.code(), Some(2));
    let unknown_flag = sbm(&["sweep", "--bogus", "1"], dir.path());
    assert_eq!(unknown_flag.status.code(), Some(2));
    std::fs::write(dir.path().join("bad.txt"), "3 1\n2 1\n").unwrap();
    let bad_file = sbm(&["detect", "--input", "bad.txt", "--k", "2"], dir.path());
    assert_eq!(bad_file.status.code(), Some(2));
    let unwritable = sbm(&["generate", "--n", "20", "--p", "0.5", "--q", "0.1", "--out", "no/such/dir/g.txt"], dir.path());
    assert_eq!(unwritable.status.code(), Some(3));
}
