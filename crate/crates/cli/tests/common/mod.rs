#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub const GOLDEN_CASES: [&str; 4] = ["baseline", "crisis", "discrete", "legacy"];

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn harrod(args: &[&str]) -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_harrod"))
        .args(args)
        .output()
        .expect("harrod binary runs");
    Outcome {
        status: out.status.code().expect("exit code"),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// Runs a fixture into `dir` and returns the exit status.
pub fn run_fixture(name: &str, dir: &Path) -> i32 {
    let config = fixture(&format!("{name}.conf"));
    let out = harrod(&[
        "run",
        config.to_str().unwrap(),
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status != 1, "{name}: {}", out.stderr);
    out.status
}

/// Compares a produced artifact with its golden copy; `UPDATE_GOLDEN=1`
/// rewrites the golden copy instead.
pub fn check_golden(produced: &Path, golden_name: &str) -> Result<(), String> {
    let actual =
        std::fs::read_to_string(produced).map_err(|e| format!("{}: {e}", produced.display()))?;
    let path = golden(golden_name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected =
        std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if actual == expected {
        return Ok(());
    }
    let line = actual
        .lines()
        .zip(expected.lines())
        .position(|(a, b)| a != b)
        .map_or_else(
            || "length differs".to_string(),
            |k| format!("first difference at line {}", k + 1),
        );
    Err(format!("{golden_name}: {line}"))
}

/// Parses a trajectory CSV into its header and rows.
pub fn read_csv(text: &str) -> (String, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default().to_string();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|x| x.parse().expect("numeric cell"))
                .collect()
        })
        .collect();
    (header, rows)
}
