//! End-to-end checks of the exit-code contract and the printed formats,
//! driven through the real binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schmidt-games"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Temp file removed by the caller; the name carries the pid so parallel
/// test binaries do not collide.
fn scratch(name: &str, contents: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("schmidt-games-test-{}-{}", std::process::id(), name));
    fs::write(&p, contents).expect("scratch file");
    p
}

#[test]
fn undecided_runs_emit_a_trace_and_exit_three() {
    let out = run(&[
        "play", "--alpha", "1/2", "--beta", "1/3", "--rho", "1", "--target", "opaque:line",
        "--depth", "2", "--seed", "11",
    ]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("trace v1 schmidt alpha=1/2 beta=1/3 rho=1\n"), "{}", text);
    assert!(text.contains("outcome Undecided depth=4"), "{}", text);
}

#[test]
fn certified_runs_exit_zero() {
    let out = run(&[
        "play", "--alpha", "1/2", "--beta", "1/3", "--rho", "1", "--target", "all:line",
        "--depth", "2", "--seed", "11",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("outcome WinII ball-inside"), "{}", stdout(&out));
}

#[test]
fn bad_parameters_exit_two() {
    let out = run(&["play", "--alpha", "7/5", "--beta", "1/2", "--rho", "1", "--target", "rayq"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("alpha"), "{}", stderr(&out));
}

#[test]
fn unreadable_files_exit_one() {
    let out = run(&[
        "play", "--alpha", "1/2", "--beta", "1/2", "--rho", "1", "--target", "rayq",
        "--II", "responder:/nonexistent.tbl", "--depth", "2",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("/nonexistent.tbl"), "{}", stderr(&out));

    let out = run(&["play", "--config", "/no/such/config.cfg", "--target", "rayq"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn config_entries_fill_flags_and_explicit_flags_win() {
    let cfg = scratch(
        "play.cfg",
        "alpha = 1/2\nbeta = 1/3\nrho = 1\ntarget = opaque:line\ndepth = 2\nseed = 11\n",
    );
    let cfg_s = cfg.to_str().unwrap();

    let from_file = run(&["play", "--config", cfg_s]);
    assert_eq!(code(&from_file), 3, "{}", stderr(&from_file));
    assert!(stdout(&from_file).contains("outcome Undecided depth=4"), "{}", stdout(&from_file));

    let overridden = run(&["play", "--config", cfg_s, "--depth", "1"]);
    assert_eq!(code(&overridden), 3, "{}", stderr(&overridden));
    assert!(stdout(&overridden).contains("outcome Undecided depth=2"), "{}", stdout(&overridden));

    fs::remove_file(cfg).ok();
}

#[test]
fn transfer_reports_the_window_and_allowances() {
    let out = run(&[
        "transfer", "--alpha", "1/2", "--beta", "1/2", "--alpha-prime", "3/4",
        "--beta-prime", "1/3", "--rho", "1", "--rounds", "0",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("window (1/2, 2)"), "{}", text);
    assert!(text.contains("rho' = 1"), "{}", text);
    assert!(text.contains("eps_II[0] = 1/4"), "{}", text);
    assert!(text.contains("eps_II[1] = 1/16"), "{}", text);
}

#[test]
fn cylinder_duel_prints_the_closed_form_column() {
    let out = run(&["cylinder", "duel", "--alpha", "1/2", "--beta", "1/2", "--rho", "1", "--depth", "2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("critical radius = 1/3"), "{}", text);
    assert!(text.contains("move 1 (II): axis distance 1/2"), "{}", text);
    assert!(text.contains("move 4 (I): axis distance 5/16"), "{}", text);
}

#[test]
fn cylinder_verify_audits_a_table() {
    let tbl = scratch("rel.tbl", "0 3/5 4/5\n0 1 0\n1 5/13 12/13\n");
    let out = run(&[
        "cylinder", "verify", "--alpha", "1/2", "--beta", "1/2", "--rho", "1",
        "--table", tbl.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("pass: 2 of 2 rows conform"), "{}", stdout(&out));
    fs::remove_file(tbl).ok();
}

#[test]
fn simplify_emits_a_parseable_document() {
    let out = run(&[
        "simplify", "--alpha", "1/2", "--beta", "1/2", "--rho", "1/2",
        "--strategy", "concentric", "--lo", "0", "--hi", "1",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# 4 cells cover [0, 1) completely"), "{}", text);
    assert!(text.contains("simple-strategy v1"), "{}", text);
    assert!(text.contains("cell interval [0,1/4) -> abs [0] 1/4"), "{}", text);
}

#[test]
fn gstar_protocol_reaches_a_certificate() {
    let out = run(&["gstar", "--depth", "3", "--seed", "5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("I: pair [0] 1 with 2 cells"), "{}", text);
    assert!(text.contains("certificate: II via ball [0] 1"), "{}", text);
}

#[test]
fn verify_runs_all_suites() {
    let out = run(&["verify", "--seed", "7"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("all 14 suites pass at seed 7"), "{}", text);
    assert!(!text.contains("FAIL"), "{}", text);
}
