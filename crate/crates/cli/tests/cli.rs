use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn mtjsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtjsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn testbench(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../testbenches").join(name)
}

#[test]
fn run_writes_csv_to_stdout() {
    let out = mtjsim(&["run", testbench("rc_step.net").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("time,v(out),i(V1)"));
    assert_eq!(lines.next(), Some("0e0,0e0,-1.000000001e-3"));
    assert_eq!(text.lines().count(), 1002);
}

#[test]
fn run_dt_override_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    let out = mtjsim(&[
        "run",
        testbench("rc_step.net").to_str().unwrap(),
        "--dt",
        "100p",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(path).unwrap().lines().count(), 102);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.net");
    std::fs::write(&bad, "R1 a 0 1k\nC1 a 0 1p\nX9 a 0\n").unwrap();
    let out = mtjsim(&["run", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let out = mtjsim(&["run", dir.path().join("missing.net").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let notran = dir.path().join("notran.net");
    std::fs::write(&notran, "V1 a 0 DC 1\nR1 a 0 1k\n").unwrap();
    assert_eq!(mtjsim(&["run", notran.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(mtjsim(&["gate", "--kind", "nor", "--style", "adiabatic"]).status.code(), Some(2));
    assert_eq!(mtjsim(&["sweep", "--kind", "and", "--tphase-list", "10n"]).status.code(), Some(2));
    assert_eq!(
        mtjsim(&["gate", "--kind", "and", "--style", "adiabatic", "--patterns", "012"]).status.code(),
        Some(2)
    );
    assert_eq!(
        mtjsim(&["gate", "--kind", "and", "--style", "adiabatic", "--tphase", "-1n"]).status.code(),
        Some(2)
    );
}

#[test]
fn logic_failure_exits_five() {
    // Writes cannot complete when the wait phase is shorter than the
    // switching time, so patterns that change the stored bit misread.
    let out = mtjsim(&["gate", "--kind", "xor", "--style", "adiabatic", "--tphase", "5n"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn gate_writes_report_and_netlist() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let netlist = dir.path().join("g.net");
    let out = mtjsim(&[
        "gate",
        "--kind",
        "and",
        "--style",
        "baseline",
        "--report",
        report.to_str().unwrap(),
        "--netlist",
        netlist.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("4/4 patterns pass"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(json["passed"], true);
    assert_eq!(json["verdicts"].as_array().unwrap().len(), 4);
    assert!(json["energy_per_op"]["logic_j_per_op"].as_f64().unwrap() > 0.0);
    assert!(json["energy"]["energy_balance_residual"].is_number());
    assert!(!json["energy"]["elements"].as_array().unwrap().is_empty());
    assert_eq!(
        std::fs::read_to_string(netlist).unwrap(),
        std::fs::read_to_string(testbench("and_baseline.net")).unwrap()
    );
}

#[test]
fn baseline_sweep_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("s.json");
    let out = mtjsim(&[
        "sweep",
        "--kind",
        "and",
        "--style",
        "baseline",
        "--tphase-list",
        "10n,20n,40n",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(json["trend_holds"], true);
    let e: Vec<f64> = json["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["energy_per_op"]["logic_j_per_op"].as_f64().unwrap())
        .collect();
    let mean = e.iter().sum::<f64>() / e.len() as f64;
    assert!(e.iter().all(|x| (x / mean - 1.0).abs() <= 0.10));
}
