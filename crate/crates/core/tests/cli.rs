//! End-to-end runs of the `conslaw` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn conslaw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conslaw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn example_one_writes_all_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = conslaw(&["example", "--id", "1", "--nodes", "40", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let profile = read(dir.path(), "profile.csv");
    assert!(profile.starts_with("x,u\n"));
    assert_eq!(profile.lines().count(), 2002);
    let shocks = read(dir.path(), "shocks.csv");
    assert!(shocks.starts_with("x_s,u_top,u_bot,speed\n"));
    assert_eq!(shocks.lines().count(), 3);
    assert!(read(dir.path(), "envelope.csv").starts_with("side,kind,u_a,u_b,slope\n"));
    let conv = read(dir.path(), "convergence.csv");
    assert!(conv.starts_with("n,err,order\n"));
    assert_eq!(conv.lines().count(), 7);
}

#[test]
fn outputs_are_byte_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let out = conslaw(&["example", "--id", "3", "--out", path(d.path())]);
        assert_eq!(out.status.code(), Some(0));
    }
    for name in ["profile.csv", "shocks.csv", "envelope.csv", "convergence.csv"] {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }
}

#[test]
fn box_example_lists_both_envelopes() {
    let dir = tempfile::tempdir().unwrap();
    let out = conslaw(&["example", "--id", "5", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let env = read(dir.path(), "envelope.csv");
    assert!(env.lines().any(|l| l.starts_with("lower,secant")));
    assert!(env.lines().any(|l| l.starts_with("upper,secant")));
    assert!(dir.path().join("envelope_jump0.csv").exists());
    assert!(dir.path().join("envelope_jump1.csv").exists());
}

#[test]
fn solve_reads_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out_dir = dir.path().join("out");
    fs::write(
        &cfg,
        format!(
            "# Buckley-Leverett displacement\nflux: named:buckley-leverett{{M:0.5}}\n\
             riemann: 0,1,0\ntime: 1\nnodes: 64\nout: {}\n",
            out_dir.display()
        ),
    )
    .unwrap();
    let out = conslaw(&["--config", path(&cfg), "solve"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let shocks = read(&out_dir, "shocks.csv");
    let row: Vec<f64> = shocks.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((row[0] - (1.0 + 3f64.sqrt()) / 2.0).abs() < 1e-6);
}

#[test]
fn exact_and_numerical_solves_agree() {
    let dir = tempfile::tempdir().unwrap();
    let mut rows = Vec::new();
    for extra in [&["--exact"][..], &["--nodes", "160"][..]] {
        let mut args = vec![
            "solve", "--flux", "polynomial:[0,0,4,-4,1]", "--riemann", "0,2,0", "--time", "1",
            "--out", path(dir.path()),
        ];
        args.extend_from_slice(extra);
        assert_eq!(conslaw(&args).status.code(), Some(0));
        rows.push(read(dir.path(), "shocks.csv"));
    }
    let parse = |s: &str| -> Vec<f64> {
        s.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect()
    };
    for (a, b) in parse(&rows[0]).iter().zip(parse(&rows[1])) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn piecewise_data_breaks_into_shocks() {
    let dir = tempfile::tempdir().unwrap();
    let out = conslaw(&[
        "solve", "--flux", "polynomial:[0,0,1/2]", "--pieces",
        "const:1 | -3 | tanh:-1,1,0,0 | 3 | const:-1", "--time", "2", "--nodes", "64",
        "--out", path(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    // Small jumps at ±3 (tanh(3) < 1) plus the centred shock from breaking.
    let shocks = read(dir.path(), "shocks.csv");
    let xs: Vec<f64> = shocks.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(xs.len(), 3);
    assert!(xs[1].abs() < 1e-8);
    assert!((xs[0] + xs[2]).abs() < 1e-8);
}

#[test]
fn envelope_command_writes_oracle_too() {
    let dir = tempfile::tempdir().unwrap();
    let out = conslaw(&[
        "envelope", "--flux", "polynomial:[0,0,3,-5/3,1/4]", "--states", "0,5",
        "--oracle-n", "20000", "--out", path(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let a = read(dir.path(), "envelope.csv");
    let b = read(dir.path(), "envelope_oracle.csv");
    assert_eq!(a.lines().count(), 4);
    assert_eq!(b.lines().count(), 4);
}

#[test]
fn converge_accepts_a_list_ladder() {
    let dir = tempfile::tempdir().unwrap();
    let out = conslaw(&["converge", "--example", "1", "--ladder", "16,32,64", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let table = read(dir.path(), "convergence.csv");
    assert_eq!(table.lines().count(), 4);
    assert!(table.lines().nth(1).unwrap().ends_with(','), "first row has no order");
    assert!(String::from_utf8_lossy(&out.stdout).contains("fitted order"));
}

#[test]
fn configuration_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = path(dir.path());
    let cases: [&[&str]; 6] = [
        &["solve", "--flux", "polynomial:[0,0,", "--riemann", "0,1,0", "--time", "1", "--out", o],
        &["solve", "--flux", "named:burgers", "--riemann", "0,1,0", "--time", "1", "--out", o],
        &["solve", "--flux", "polynomial:[0,0,1]", "--riemann", "0,1", "--time", "1", "--out", o],
        &["solve", "--flux", "polynomial:[0,0,1]", "--time", "1", "--out", o],
        &["example", "--id", "9", "--out", o],
        &["frobnicate"],
    ];
    for args in cases {
        assert_eq!(conslaw(args).status.code(), Some(1), "{args:?}");
    }
    let missing = dir.path().join("absent.cfg");
    assert_eq!(conslaw(&["--config", path(&missing), "example", "--id", "1"]).status.code(), Some(1));
}

#[test]
fn numerical_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    // The two fans of the box meet before t = 0.2.
    let out = conslaw(&["example", "--id", "5", "--time", "0.2", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("overlap"));
}

#[test]
fn help_exits_cleanly() {
    let out = conslaw(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("converge"));
}
