//! End-to-end tests of the command-line interface: exit codes, report
//! determinism, and the individual subcommands.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_homfin"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("failed to run binary")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("homfin-cli-{}-{name}", std::process::id()))
}

#[test]
fn verify_case_c5_succeeds_and_names_the_pair() {
    let o = run(&["verify-case", "C5", "--norms", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("u[1/2e1-sqrt(3)/2e2]"), "{out}");
    assert!(out.contains("Obstructed"), "{out}");
}

#[test]
fn validate_algebra_g2_prints_jacobi_residual() {
    let o = run(&["validate-algebra", "G2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("jacobi residual"), "{out}");
    assert!(out.contains("dimension 14"), "{out}");
}

#[test]
fn zero_norm_count_is_an_input_error() {
    let o = run(&["verify-case", "C1", "--norms", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_case_is_an_input_error() {
    let o = run(&["verify-case", "C9", "--norms", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_flags_are_rejected_by_the_parser() {
    let o = run(&["verify-case", "C1", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_for_the_same_seed() {
    let p1 = tmp_path("r1.json");
    let p2 = tmp_path("r2.json");
    for p in [&p1, &p2] {
        let o = run(&[
            "verify-case",
            "sphere_SU",
            "--norms",
            "2",
            "--flags",
            "30",
            "--seed",
            "42",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let b1 = std::fs::read(&p1).unwrap();
    let b2 = std::fs::read(&p2).unwrap();
    assert_eq!(b1, b2);
    let text = String::from_utf8(b1).unwrap();
    assert!(text.contains("\"convention\""));
    assert!(text.contains("\"tolerances\""));
    assert!(text.contains("\"seed\": 42"));
    std::fs::remove_file(p1).ok();
    std::fs::remove_file(p2).ok();
}

#[test]
fn curvature_subcommand_reports_zero_flag() {
    let o = run(&["curvature", "C1", "--y", "u[2e1]", "--v", "u[2e2]"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("K = 0.000000000000"), "{out}");
}

#[test]
fn curvature_rejects_non_commuting_pair() {
    let o = run(&["curvature", "C1", "--y", "u[2e1]", "--v", "u[e1+e2]"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn split_reads_a_space_file() {
    let file = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/AW_degenerate.space");
    let o = run(&["split", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("dim m = 7"), "{out}");
    assert!(out.contains("rank gap 1"), "{out}");
}

#[test]
fn split_reports_parse_errors_with_location() {
    let p = tmp_path("bad.space");
    std::fs::write(&p, "family A\nrank 2\nnonsense here\n").unwrap();
    let o = bin().args(["split", p.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr).into_owned();
    assert!(err.contains("line 3"), "{err}");
    std::fs::remove_file(p).ok();
}

#[test]
fn curvature_accepts_a_norm_file() {
    let p = tmp_path("norm.txt");
    std::fs::write(
        &p,
        "norm\nshape reversible\nkind diagonal\ncoeffs 1 2 0.5 1.5\n",
    )
    .unwrap();
    let o = run(&[
        "curvature",
        "C1",
        "--y",
        "u[2e1]",
        "--v",
        "u[2e2]",
        "--norm",
        p.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("K = 0.000000000000"));
    std::fs::remove_file(p).ok();
}
