use std::fs;
use std::process::{Command, Output};

fn hvpade(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hvpade")).args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn default_table_has_full_grid() {
    let out = hvpade(&[]);
    let text = stdout(&out);
    let data: Vec<&str> = text.lines().skip(2).filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 24);
    let first: Vec<&str> = data[0].split_whitespace().collect();
    assert_eq!(&first[..5], &["0", "0.005", "0.501248", "0.501248", "0.501248"]);
}

#[test]
fn default_exit_code_reflects_flags() {
    let out = hvpade(&["--format", "csv"]);
    let text = stdout(&out);
    let flagged = text.lines().skip(1).any(|l| l.contains("defective") || l.contains("pole-contaminated"));
    assert_eq!(out.status.code(), Some(if flagged { 2 } else { 0 }));
}

#[test]
fn pole_exits_with_two() {
    // [1,0] of the ground state is ½/(1 − λ/2)
    let out = hvpade(&[
        "--states",
        "0",
        "--lambdas",
        "1,2",
        "--order",
        "1",
        "--pade",
        "1:0",
        "--oracle",
        "off",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    let flags: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(4).unwrap()).collect();
    assert_eq!(flags, ["ok", "pole-contaminated"]);
}

#[test]
fn trivial_cell_csv() {
    let out = hvpade(&["--states", "0", "--lambdas", "0", "--format", "csv", "--oracle", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,lambda,E4,E_3_3,E_3_4,flag_3_3,flag_3_4,eq13,oracle,oracle_converged,max_disc"
    );
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(fields[2], "5.0000000000000000e-1");
    assert_eq!(fields[8], "5.0000000000000000e-1");
}

#[test]
fn config_file_and_override() {
    let dir = std::env::temp_dir().join(format!("hvpade-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.conf");
    fs::write(&path, "# two states\nstates = 0, 1\nlambdas = 0.01\noracle = off\n").unwrap();
    let out = hvpade(&["--config", path.to_str().unwrap(), "--format", "csv", "--lambdas", "0.005,0.01"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 5);

    fs::write(&path, "states = 0\ncolour = blue\n").unwrap();
    let out = hvpade(&["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2") && err.contains("colour"), "{err}");
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_errors_exit_one() {
    for args in [
        &["--order", "5"][..],
        &["--lambdas", "-1"],
        &["--omega", "0"],
        &["--precision", "quad"],
        &["--config", "/nonexistent/sweep.conf"],
        &["--no-such-flag"],
    ] {
        let out = hvpade(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn help_exits_zero() {
    let out = hvpade(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("--pole-threshold"));
}

#[test]
fn export_series_is_exact() {
    let out = hvpade(&["--states", "0", "--order", "8", "--export-series"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,k,numerator,denominator");
    assert_eq!(&lines[1..6], &["0,0,1,2", "0,1,1,4", "0,2,-1,16", "0,3,1,32", "0,4,-357,256"]);
    assert_eq!(lines.len(), 10);

    let out = hvpade(&["--export-series", "--precision", "float"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn rational_output_is_deterministic() {
    let args = ["--states", "2,4", "--format", "csv"];
    assert_eq!(hvpade(&args).stdout, hvpade(&args).stdout);
}
