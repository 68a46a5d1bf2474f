use std::path::{Path, PathBuf};
use std::process::Command;

fn nemo() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nemo"))
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("exp.toml");
    std::fs::write(&path, body).unwrap();
    path
}

const SMALL: &str = "kind = \"simple-seq\"\nseed = 2\ntrials = 2\nlength = [4]\npresentations = [1, 2]\n\
                     [params]\nn = 150\nk = 10\np = 0.3\nbeta = 0.1\n";

#[test]
fn writes_csv_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = nemo()
            .args(["simple-seq", "--quiet", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .env_remove("NEMO_OUT_DIR")
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    assert!(a.starts_with(b"experiment,param,value,trial,metric,metric_value\n"));
}

#[test]
fn seed_and_trials_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = nemo()
        .args(["run", "--quiet", "--trials", "1", "--seed", "99", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(3) == Some("0")));
}

#[test]
fn out_dir_env_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let status = nemo()
        .args(["simple-seq", "--quiet", "--out", "sub/r.csv", "--config"])
        .arg(&cfg)
        .env("NEMO_OUT_DIR", dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(dir.path().join("sub/r.csv").exists());
}

#[test]
fn errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = nemo().args(["fsm-train", "--config"]).arg(&cfg).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("simple-seq"));

    let bad = write_config(dir.path(), "kind = \"simple-seq\"\ntrials = 0\n");
    let out = nemo().args(["run", "--config"]).arg(&bad).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    let out = nemo().args(["run", "--config", "/nonexistent.toml"]).output().unwrap();
    assert!(!out.status.success());
}
