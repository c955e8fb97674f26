use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const REP21: &str = "q=2 p=2 s=1 modulus=-\nn=2 k=1\n1 1\n";

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cyclic-embed"));
    cmd.env_remove("CYCLIC_EMBED_BOUND");
    cmd
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = cmd.output().expect("binary runs");
    (status.code().unwrap_or(-1), String::from_utf8(stdout).unwrap(), String::from_utf8(stderr).unwrap())
}

fn embed(dir: &Path, code: &str) -> (i32, String, String) {
    fs::write(dir.join("in.code"), code).unwrap();
    run(bin().arg("embed").arg("--in").arg(dir.join("in.code")).arg("--out").arg(dir.join("out.cert")))
}

fn verify(dir: &Path, mode: &str) -> (i32, String, String) {
    run(bin()
        .arg("verify")
        .arg("--in")
        .arg(dir.join("in.code"))
        .arg("--cert")
        .arg(dir.join("out.cert"))
        .arg("--mode")
        .arg(mode))
}

#[test]
fn embed_then_verify() {
    let dir = TempDir::new().unwrap();
    let (code, out, _) = embed(dir.path(), REP21);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "n=2 k=1 q=2 m=3 deg_g=5 e=15 nprime=15 kprime=10 steps=4");
    for mode in ["oracle", "structural"] {
        let (code, out, err) = verify(dir.path(), mode);
        assert_eq!(code, 0, "{out}{err}");
        assert!(out.starts_with(&format!("mode={mode}\n")));
        assert!(out.ends_with("final_equal=true\n"));
    }
    let (code, out, _) = verify(dir.path(), "auto");
    assert_eq!(code, 0);
    assert!(out.starts_with("mode=oracle\n"));
}

#[test]
fn tampered_certificate_fails() {
    let dir = TempDir::new().unwrap();
    embed(dir.path(), REP21);
    let cert = dir.path().join("out.cert");
    let text = fs::read_to_string(&cert).unwrap();
    fs::write(&cert, text.replace("coords=2,4", "coords=2,4,6")).unwrap();
    let (code, out, _) = verify(dir.path(), "oracle");
    assert_eq!(code, 1);
    assert!(out.contains("final_equal=false"));
}

#[test]
fn report_file() {
    let dir = TempDir::new().unwrap();
    embed(dir.path(), REP21);
    let report = dir.path().join("report.txt");
    let (code, out, _) = run(bin()
        .arg("verify")
        .arg("--in")
        .arg(dir.path().join("in.code"))
        .arg("--cert")
        .arg(dir.path().join("out.cert"))
        .arg("--report")
        .arg(&report));
    assert_eq!((code, out.as_str()), (0, ""));
    assert!(fs::read_to_string(report).unwrap().contains("step E puncture"));
}

#[test]
fn input_errors() {
    let dir = TempDir::new().unwrap();
    let (code, _, err) = embed(dir.path(), "q=2 p=2 s=1 modulus=-\nn=2 k=1\n0 0\n");
    assert_ne!(code, 0);
    assert!(err.contains("zero row space"), "{err}");

    let (code, _, err) = embed(dir.path(), "q=2 p=2 s=1 modulus=-\nn=2 k=1\n1 7\n");
    assert_ne!(code, 0);
    assert!(err.contains("line 3"), "{err}");

    let (code, _, err) = embed(dir.path(), "q=2 p=2 s=1 modulus=-\nn=3 k=3\n1 0 0\n0 1 0\n0 0 1\n");
    assert_ne!(code, 0);
    assert!(err.contains("e=") && err.contains("deg_g=31") && err.contains("nprime="), "{err}");

    embed(dir.path(), REP21);
    fs::write(dir.path().join("in.code"), "q=3 p=3 s=1 modulus=-\nn=2 k=1\n1 1\n").unwrap();
    let (code, _, err) = verify(dir.path(), "auto");
    assert_eq!(code, 2);
    assert!(err.contains("certificate is for"), "{err}");
}

#[test]
fn bound_flag_and_environment() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("in.code"), REP21).unwrap();
    let args = |cmd: &mut Command| {
        cmd.arg("embed").arg("--in").arg(dir.path().join("in.code")).arg("--out").arg(dir.path().join("out.cert"));
    };
    let mut cmd = bin();
    args(&mut cmd);
    cmd.arg("--bound").arg("14");
    assert_ne!(run(&mut cmd).0, 0);

    let mut cmd = bin();
    args(&mut cmd);
    cmd.env("CYCLIC_EMBED_BOUND", "14");
    assert_ne!(run(&mut cmd).0, 0);

    let mut cmd = bin();
    args(&mut cmd);
    cmd.env("CYCLIC_EMBED_BOUND", "14").arg("--bound").arg("15");
    assert_eq!(run(&mut cmd).0, 0);
}

#[test]
fn demo_output() {
    let (code, out, _) = run(bin().args(["demo", "--bound", "100", "--seed", "5"]));
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.contains("skipped (nprime=")));
    assert!(out.lines().all(|l| l.ends_with(" ok") || l.contains("skipped")), "{out}");
    let (_, again, _) = run(bin().args(["demo", "--bound", "100", "--seed", "5"]));
    assert_eq!(out, again);

    let (code, out, _) = run(bin().arg("demo"));
    assert_eq!(code, 0);
    assert!(out.lines().filter(|l| !l.contains("skipped")).all(|l| l.ends_with(" ok")), "{out}");
}
