use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use specmeasure_core::{Estimator, MiseTable};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_specmeasure"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn simulate_is_deterministic_and_readable() {
    let args = [
        "simulate", "--model", "mixture", "--r", "0.3", "--n", "50", "--seed", "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1,x2"));
    assert_eq!(lines.count(), 50);
    let other = run(&[
        "simulate", "--model", "mixture", "--r", "0.3", "--n", "50", "--seed", "8",
    ]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn estimate_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    let sim = run(&[
        "simulate",
        "--model",
        "logistic",
        "--n",
        "400",
        "--seed",
        "3",
        "--output",
        data.to_str().unwrap(),
    ]);
    assert!(sim.status.success());
    let out = run(&[
        "estimate",
        "--input",
        data.to_str().unwrap(),
        "--k",
        "30",
        "--p",
        "inf",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "theta,weight_empirical,weight_mele,score_f");
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert!(!rows.is_empty());
    // MELE weights satisfy the centred constraint up to the normaliser
    let centred: f64 = rows.iter().map(|r| r[2] * r[3]).sum();
    assert!(centred.abs() < 1e-12);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
}

#[test]
fn estimator_selection_limits_columns() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "d.csv", "x1,x2\n1,5\n2,6\n3,7\n4,8\n");
    let out = run(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--k",
        "2",
        "--estimator",
        "mele",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out)
        .lines()
        .any(|l| l == "theta,weight_mele,score_f"));
}

#[test]
fn infeasible_sample_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "flat.csv", "x1,x2\n1,5\n2,5\n3,5\n4,5\n5,5\n");
    let out = run(&["estimate", "--input", input.to_str().unwrap(), "--k", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("infeasible"), "{err}");
    assert!(err.contains("tied"), "{err}");
    // the empirical estimator alone needs no constraint
    let emp = run(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--k",
        "1",
        "--estimator",
        "empirical",
    ]);
    assert!(emp.status.success());
}

#[test]
fn configuration_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "d.csv", "x1,x2\n1,5\n2,6\n3,7\n");
    let path = input.to_str().unwrap();
    assert_eq!(
        run(&["estimate", "--input", path, "--k", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["estimate", "--input", path, "--k", "9"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["estimate", "--input", path, "--k", "1", "--p", "0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["simulate", "--model", "mixture", "--r", "2", "--n", "5", "--seed", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["simulate", "--model", "logistic", "--psi1", "0.5", "--n", "5", "--seed", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["estimate", "--input", "/nonexistent/x.csv", "--k", "1"])
            .status
            .code(),
        Some(4)
    );
    let bad = write(dir.path(), "bad.csv", "x1,x2\n1,abc\n");
    assert_eq!(
        run(&["estimate", "--input", bad.to_str().unwrap(), "--k", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn benchmark_table_shape_and_round_trip() {
    let out = run(&[
        "benchmark",
        "--model",
        "cauchy-quadrant",
        "--p",
        "inf",
        "--n",
        "200",
        "--reps",
        "4",
        "--k-grid",
        "10:40:10",
        "--seed",
        "11",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let table = MiseTable::parse(text.as_bytes()).unwrap();
    assert_eq!(table.rows.len(), 4 * 2);
    assert_eq!(table.k_grid(), vec![10, 20, 30, 40]);
    assert_eq!(table.seed, 11);
    assert!(table.row(10, Estimator::Mele).is_some());
    assert_eq!(table.to_csv(), text);
}

#[test]
fn pickands_output_is_a_dependence_function() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    let sim = run(&[
        "simulate",
        "--model",
        "logistic",
        "--n",
        "500",
        "--seed",
        "5",
        "--output",
        data.to_str().unwrap(),
    ]);
    assert!(sim.status.success());
    let out = run(&["pickands", "--input", data.to_str().unwrap(), "--k", "40"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("v,A"));
    let knots: Vec<(f64, f64)> = lines
        .map(|l| {
            let (v, a) = l.split_once(',').unwrap();
            (v.parse().unwrap(), a.parse().unwrap())
        })
        .collect();
    assert_eq!(knots.first().unwrap().0, 0.0);
    assert_eq!(knots.last().unwrap().0, 1.0);
    for &(v, a) in &knots {
        assert!(a >= v.max(1.0 - v) - 1e-8 && a <= 1.0 + 1e-8);
    }
}

#[test]
fn gnuplot_script_written_next_to_output() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("s.csv");
    let script = dir.path().join("s.gp");
    let out = run(&[
        "simulate",
        "--model",
        "cauchy-fullplane",
        "--n",
        "20",
        "--seed",
        "1",
        "--output",
        data.to_str().unwrap(),
        "--gnuplot",
        script.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(&script).unwrap();
    assert!(body.contains(data.to_str().unwrap()));
    let missing = run(&[
        "simulate",
        "--model",
        "cauchy-fullplane",
        "--n",
        "20",
        "--seed",
        "1",
        "--gnuplot",
        "x.gp",
    ]);
    assert_eq!(missing.status.code(), Some(2));
}
