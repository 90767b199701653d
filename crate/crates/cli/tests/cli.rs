//! End-to-end tests of the `qdynmap` binary: flags, exit codes, output
//! formats and determinism.

use std::path::Path;
use std::process::{Command, Output};

fn qdynmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdynmap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = qdynmap(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

#[test]
fn decompose_reports_the_ncp_spot_value() {
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "decompose",
        "--a1",
        "0",
        "--a2",
        "0.6667",
        "--omega-t",
        "1.5708",
    ]))
    .expect("valid JSON report");
    assert_eq!(json["classification"], "NCP");
    assert_eq!(json["dim"], 2);
    let eigenvalues: Vec<f64> = json["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(eigenvalues.len(), 4);
    let min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    assert!((min + 0.10093).abs() < 5e-5, "min eigenvalue {min}");
    assert!(json["negativity"].as_f64().unwrap() > 0.2);
    assert_eq!(json["operators"].as_array().unwrap().len(), 4);
}

#[test]
fn decompose_at_zero_phase_is_cp_identity() {
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "decompose",
        "--scenario",
        "werner",
        "--x",
        "0.5",
        "--omega-t",
        "0",
    ]))
    .unwrap();
    assert_eq!(json["classification"], "CP");
    let eigenvalues: Vec<f64> = json["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert!((eigenvalues[0] - 2.0).abs() < 1e-12);
    for &l in &eigenvalues[1..] {
        assert!(l.abs() < 1e-12);
    }
}

#[test]
fn decompose_at_half_period_is_cp_for_any_phi() {
    // at omega_t = pi the sine vanishes and the map is CP with spectrum
    // (2, 0, 0, 0) regardless of phi
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "decompose",
        "--scenario",
        "pure",
        "--phi",
        "0.7854",
        "--omega-t",
        "3.141592653589793",
    ]))
    .unwrap();
    assert_eq!(json["classification"], "CP");
    let top = json["eigenvalues"][0].as_f64().unwrap();
    assert!((top - 2.0).abs() < 1e-10);

    // a coarser input is a different point: sin(3.1416) = -7.3e-6 with
    // 1 + cos ~ 0 leaves a genuine lambda ~ -|a||S|/2 ~ -2.4e-6, below the
    // -1e-10 classification threshold, so the map is (barely) NCP there
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "decompose",
        "--scenario",
        "pure",
        "--phi",
        "0.7854",
        "--omega-t",
        "3.1416",
    ]))
    .unwrap();
    assert_eq!(json["classification"], "NCP");
    let min = json["eigenvalues"][3].as_f64().unwrap();
    assert!((min + 2.449e-6).abs() < 1e-8, "min = {min}");
}

#[test]
fn decompose_flag_conflicts_exit_2() {
    for args in [
        vec!["decompose", "--omega-t", "1"],
        vec!["decompose", "--a1", "0.5", "--omega-t", "1"],
        vec![
            "decompose",
            "--scenario",
            "werner",
            "--a1",
            "0",
            "--a2",
            "0.1",
            "--omega-t",
            "1",
        ],
        vec!["decompose", "--a1", "7", "--a2", "0", "--omega-t", "1"],
    ] {
        let out = qdynmap(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }
}

#[test]
fn unknown_flags_exit_2() {
    let out = qdynmap(&["decompose", "--frequency", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn evolve_frozen_werner_trace() {
    let csv = stdout_of(&[
        "evolve",
        "--scenario",
        "werner",
        "--x",
        "1",
        "--resolution",
        "5",
    ]);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "omega_t,rho00_re,rho01_re,rho01_im,rho11_re,bloch_x,bloch_y,bloch_z,min_eig"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[1], "5.00000000000e-1");
        assert_eq!(cols[2], "0.00000000000e0");
        assert_eq!(cols[3], "0.00000000000e0");
        assert_eq!(cols[4], "5.00000000000e-1");
    }
}

#[test]
fn evolve_werner_quarter_period_off_diagonal() {
    // resolution 5 over [0, 2 pi] puts omega_t = pi/2 on the second row;
    // there rho01 = +i(1-x) sin(omega_t)/2 = +i/2 at x = 0
    let csv = stdout_of(&[
        "evolve",
        "--scenario",
        "werner",
        "--x",
        "0",
        "--resolution",
        "5",
    ]);
    let row: Vec<&str> = csv.lines().nth(2).unwrap().split(',').collect();
    let rho01_im: f64 = row[3].parse().unwrap();
    assert!((rho01_im - 0.5).abs() < 1e-11, "rho01_im = {rho01_im}");
}

#[test]
fn evolve_pure_initial_population() {
    let csv = stdout_of(&[
        "evolve",
        "--scenario",
        "pure",
        "--phi",
        "0",
        "--resolution",
        "3",
    ]);
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let rho00: f64 = row[1].parse().unwrap();
    assert!((rho00 - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn witness_csv_shape_and_values() {
    let csv = stdout_of(&["witness", "--scenario", "werner", "--resolution", "5"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "omega_t,param,S_diff,G_diff,flags");
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    assert_eq!(rows.len(), 25);
    // omega_t = 0 rows are exactly zero
    for cols in rows.iter().filter(|c| c[0] == "0.00000000000e0") {
        assert_eq!(cols[2], "0.00000000000e0");
        assert_eq!(cols[3], "0.00000000000e0");
    }
    // x = 0, omega_t = pi/2 row: G = -1 and the relative entropy diverges
    let deep = rows
        .iter()
        .find(|c| c[1] == "0.00000000000e0" && c[0].starts_with("1.57"))
        .expect("grid contains (pi/2, 0)");
    assert_eq!(deep[2], "-inf");
    let g: f64 = deep[3].parse().unwrap();
    assert!((g + 1.0).abs() < 1e-9);
    assert_eq!(deep[4], "SupportViolation");
}

#[test]
fn witness_rejects_bad_scenarios() {
    let out = qdynmap(&["witness", "--resolution", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qdynmap(&[
        "witness",
        "--scenario",
        "separable",
        "--sx",
        "2.0",
        "--resolution",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = qdynmap(&[
        "witness",
        "--scenario",
        "werner",
        "--omega-tau",
        "-1",
        "--resolution",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figure_writes_two_deterministic_surfaces() {
    let dir = std::env::temp_dir().join("qdynmap_fig_test");
    let _ = std::fs::remove_dir_all(&dir);
    let out = qdynmap(&[
        "figure",
        "2",
        "--resolution",
        "5",
        "--output",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let s_path = dir.join("figure2_S_diff.csv");
    let g_path = dir.join("figure2_G_diff.csv");
    let s_first = std::fs::read_to_string(&s_path).unwrap();
    let g_first = std::fs::read_to_string(&g_path).unwrap();
    assert!(s_first.starts_with("omega_t,x,S_diff\n"));
    assert!(g_first.starts_with("omega_t,x,G_diff\n"));

    // rerun with a different worker count: byte-identical output
    let out = qdynmap(&[
        "figure",
        "2",
        "--resolution",
        "5",
        "--jobs",
        "2",
        "--output",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&s_path).unwrap(), s_first);
    assert_eq!(std::fs::read_to_string(&g_path).unwrap(), g_first);

    // the x = 1 rows are zero, and G reaches -1 at (pi/2, 0)
    for line in g_first.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols[1] == "1.00000000000e0" {
            let v: f64 = cols[2].parse().unwrap();
            assert!(v.abs() <= 1e-12);
        }
    }
    let deep = g_first
        .lines()
        .find(|l| l.starts_with("1.57") && l.contains(",0.00000000000e0,"))
        .expect("(pi/2, x=0) row present");
    let g: f64 = deep.split(',').nth(2).unwrap().parse().unwrap();
    assert!((g + 1.0).abs() < 1e-9);

    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn figure_rejects_unknown_index() {
    let out = qdynmap(&["figure", "4", "--resolution", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_3() {
    let out = qdynmap(&[
        "evolve",
        "--scenario",
        "werner",
        "--x",
        "0.5",
        "--resolution",
        "3",
        "--output",
        "/nonexistent-dir/trace.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn witness_output_to_file_matches_stdout() {
    let path = std::env::temp_dir().join("qdynmap_witness_test.csv");
    let _ = std::fs::remove_file(&path);
    let from_stdout = stdout_of(&["witness", "--scenario", "pure", "--resolution", "4"]);
    let out = qdynmap(&[
        "witness",
        "--scenario",
        "pure",
        "--resolution",
        "4",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), from_stdout);
    let _ = std::fs::remove_file(&path);
    assert!(!Path::new(&path).exists());
}
