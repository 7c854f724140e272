mod common;

use common::{check_golden, read_csv, run_fixture, GOLDEN_CASES};

#[test]
fn artifacts_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut failures = Vec::new();
    for name in GOLDEN_CASES {
        let out = dir.path().join(name);
        run_fixture(name, &out);
        for (file, ext) in [("trajectory.csv", "csv"), ("plot.svg", "svg")] {
            if let Err(e) = check_golden(&out.join(file), &format!("{name}.{ext}")) {
                failures.push(e);
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run_fixture("crisis", &a);
    run_fixture("crisis", &b);
    for file in ["trajectory.csv", "plot.svg", "report.kv", "report.txt"] {
        assert_eq!(
            std::fs::read(a.join(file)).unwrap(),
            std::fs::read(b.join(file)).unwrap(),
            "{file}"
        );
    }
}

#[test]
fn csv_format_contract() {
    let dir = tempfile::tempdir().unwrap();
    run_fixture("discrete", dir.path());
    let text = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let (header, rows) = read_csv(&text);
    assert_eq!(header, "tau,K,I,Y,C,Y_R,K_R,C_R");
    assert_eq!(rows.len(), 21);
    assert!((rows[20][1] - 2.653298).abs() <= 2.653298 * 1e-6);
    for cell in text.lines().skip(1).flat_map(|l| l.split(',')) {
        let (mantissa, exp) = cell.split_once('e').unwrap();
        let digits = mantissa.trim_start_matches('-').replace('.', "");
        assert_eq!(digits.len(), 12, "{cell}");
        assert!(exp.starts_with('+') || exp.starts_with('-'), "{cell}");
    }
}

#[test]
fn legacy_curves_do_not_cross() {
    let dir = tempfile::tempdir().unwrap();
    run_fixture("legacy", dir.path());
    let (_, rows) = read_csv(&std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap());
    // columns: tau, K, I, Y
    assert!(rows.iter().all(|r| r[1] > r[3] && r[3] > r[2]));
    let svg = std::fs::read_to_string(dir.path().join("plot.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 3);
}
