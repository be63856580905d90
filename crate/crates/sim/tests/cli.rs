//! The `simulate` binary: exit codes, failed rows and re-runs from the echo.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cavity_lattice_sim::read_csv;
use cavity_lattice_sim::table::{extract_config, TIMESTAMP_PREFIX};

fn simulate(config: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simulate"))
        .arg(config)
        .args(args)
        .env("SIM_JOBS", "1")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const CUSTOM: &str = "\
scenario = custom
mode = exact-elim
u0 = -1
delta_c = -3
eta = 2
v_cl = -4
a_s = 1
n_atoms = 2
n_sites = 2
";

#[test]
fn missing_file_and_bad_config_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = simulate(&dir.path().join("absent.cfg"), &[]);
    assert_eq!(out.status.code(), Some(1));

    let cfg = write(dir.path(), "bad.cfg", "scenario = fig3\nu0 = minus one\n");
    let out = simulate(&cfg, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let cfg = write(dir.path(), "unknown.cfg", "scenario = fig3\nwidth = 3\n");
    let out = simulate(&cfg, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("width"));

    let cfg = write(dir.path(), "custom.cfg", "scenario = custom\nu0 = -1\n");
    let out = simulate(&cfg, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("n_atoms"));
}

#[test]
fn failed_single_point_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    // the coupled model has no bounded ground state above resonance
    let cfg = write(dir.path(), "run.cfg", CUSTOM);
    let out = simulate(&cfg, &["--mode", "coupled", "--set", "delta_c=1"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn failed_sweep_points_become_nan_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sweep.cfg",
        &format!("{CUSTOM}sweep = delta_c\nsweep_start = -6\nsweep_stop = 2\nsweep_points = 5\n"),
    );
    let csv = dir.path().join("out.csv");
    let out = simulate(&cfg, &["--out", csv.to_str().unwrap(), "--mode", "coupled"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let parsed = read_csv(&fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(parsed.values.len(), 5);
    let failed: Vec<usize> = (0..5).filter(|&i| !parsed.errors[i].is_empty()).collect();
    assert!(
        !failed.is_empty() && failed.len() < 5,
        "{:?}",
        parsed.errors
    );
    for i in 0..5 {
        let nan = parsed.values[i][1..].iter().all(|x| x.is_nan());
        assert_eq!(nan, failed.contains(&i));
        // the sweep coordinate survives a failure
        assert!(parsed.values[i][0].is_finite());
    }
}

#[test]
fn custom_two_point_sweep_has_two_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "two.cfg",
        &format!("{CUSTOM}sweep = a_s\nsweep_start = 0\nsweep_stop = 2\nsweep_points = 2\n"),
    );
    let out = simulate(&cfg, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let parsed = read_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(parsed.values.len(), 2);
    assert_eq!(parsed.values[1][0], 2.0);
    assert!(parsed.errors.iter().all(String::is_empty));
}

fn without_timestamp(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with(TIMESTAMP_PREFIX))
        .map(|l| format!("{l}\n"))
        .collect()
}

#[test]
fn echoed_config_reproduces_the_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "fig3.cfg",
        "scenario = fig3\nsweep_points = 9\n",
    );
    let first = dir.path().join("first.csv");
    let out = simulate(
        &cfg,
        &["--out", first.to_str().unwrap(), "--set", "u0_values=-1.2"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let first_text = fs::read_to_string(&first).unwrap();
    assert!(first_text.lines().any(|l| l.starts_with(TIMESTAMP_PREFIX)));

    let echo = write(dir.path(), "echo.cfg", &extract_config(&first_text));
    let second = dir.path().join("second.csv");
    let out = simulate(&echo, &["--out", second.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let second_text = fs::read_to_string(&second).unwrap();
    assert_eq!(
        without_timestamp(&first_text),
        without_timestamp(&second_text)
    );
}

#[test]
fn output_key_is_used_when_no_flag_is_given() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from_key.csv");
    let cfg = write(
        dir.path(),
        "out.cfg",
        &format!("{CUSTOM}output = {}\n", target.display()),
    );
    let out = simulate(&cfg, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let parsed = read_csv(&fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(parsed.values.len(), 1);
}
