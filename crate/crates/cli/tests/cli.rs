//! End-to-end CLI behavior: exit-status contract, output shapes, and the
//! generator dump format.

use std::process::Command;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_octet"))
}

fn write_config(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const DEPHASING_CONFIG: &str = r#"{
  "scenario": "dephasing3",
  "omega": 1.0,
  "eta": 0.1,
  "delta": [[0.5773502691896258, 0.0], [0.5773502691896258, 0.0], [0.5773502691896258, 0.0]],
  "t_max": 1.0,
  "dt": 0.001,
  "sample_every": 200
}"#;

#[test]
fn invalid_config_exits_with_1_and_lists_fields() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, "bad.json", r#"{"scenario": "dephasing3", "dt": -2.0}"#);
    let output = binary().arg("evolve").arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8(output.stderr).unwrap();
    for field in ["omega", "eta", "delta", "t_max", "dt"] {
        assert!(stderr.contains(field), "missing {field} in: {stderr}");
    }
}

#[test]
fn scenario_subcommand_mismatch_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, "dephasing.json", DEPHASING_CONFIG);
    let output = binary().arg("phase").arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("berry_loop"), "{stderr}");
}

#[test]
fn missing_config_file_is_a_config_error() {
    let output = binary().arg("evolve").arg("/nonexistent.json").output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn dephasing_csv_has_the_contractual_header_and_purity_one_at_eta_zero() {
    let dir = tempfile::tempdir().unwrap();
    let unitary = DEPHASING_CONFIG.replace("\"eta\": 0.1", "\"eta\": 0.0");
    let path = write_config(&dir, "unitary.json", &unitary);
    let output = binary().arg("evolve").arg(&path).arg("--quiet").output().unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,n1,n2,n3,n4,n5,n6,n7,n8,r,purity,re_rho12,im_rho12,re_rho13,im_rho13,re_rho23,im_rho23"
    );
    for line in lines {
        let purity: f64 = line.split(',').nth(10).unwrap().parse().unwrap();
        assert!((purity - 1.0).abs() < 1e-8, "purity drifted: {line}");
    }
}

#[test]
fn dephasing_coherence_follows_the_analytic_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, "dephasing.json", DEPHASING_CONFIG);
    let output = binary().arg("evolve").arg(&path).arg("--quiet").output().unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    for line in stdout.lines().skip(1) {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let (t, re12, im12) = (cells[0], cells[11], cells[12]);
        let expected = num_complex::Complex64::new(-0.2 * t, -t).exp() / 3.0;
        assert!((re12 - expected.re).abs() < 1e-6, "re_rho12 at t = {t}");
        assert!((im12 - expected.im).abs() < 1e-6, "im_rho12 at t = {t}");
    }
}

#[test]
fn berry_loop_reports_the_closed_form_to_1e3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        &dir,
        "loop.json",
        r#"{
  "scenario": "berry_loop",
  "loop": {
    "r": 1.0,
    "theta": 1.0471975511965976,
    "phi": 0.7853981633974483,
    "sweeps": [{"angle": "xi", "from": 0.0, "to": 6.283185307179586}],
    "samples": 10000
  }
}"#,
    );
    let output = binary().arg("phase").arg(&path).arg("--quiet").output().unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    let data = stdout.lines().nth(1).unwrap();
    let cells: Vec<f64> = data.split(',').map(|c| c.parse().unwrap()).collect();
    let (wrapped, closed_form, abs_error) = (cells[2], cells[4], cells[5]);
    assert!((wrapped - (-std::f64::consts::FRAC_PI_2)).abs() < 1e-3);
    assert!((closed_form - (-std::f64::consts::FRAC_PI_2)).abs() < 1e-12);
    assert!(abs_error < 1e-3);
}

#[test]
fn polarization_scenario_includes_the_analytic_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        &dir,
        "polarization.json",
        r#"{
  "scenario": "polarization",
  "model": "pure_dephasing",
  "gamma_plus": 0.3,
  "gamma_minus": 0.2,
  "n_max": 1,
  "delta": [[0.0, 0.0], [0.6, 0.0], [0.48, 0.64]],
  "t_max": 5.0,
  "dt": 0.001,
  "sample_every": 500
}"#,
    );
    let output = binary()
        .arg("polarization")
        .arg(&path)
        .arg("--quiet")
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "t,s1,s2,s3,s0_expect,p,p_analytic");
    for line in lines {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let (s0, p, p_analytic) = (cells[4], cells[5], cells[6]);
        assert!((s0 - 1.0).abs() < 1e-9, "photon number not conserved");
        assert!((p - p_analytic).abs() < 1e-6);
    }
}

#[test]
fn atomic_bath_scenario_runs_on_the_single_photon_block() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        &dir,
        "bath.json",
        r#"{
  "scenario": "polarization",
  "model": "atomic_bath",
  "gamma": 0.02,
  "omega": 1.0,
  "delta": [[0.0, 0.0], [0.8, 0.0], [0.36, 0.48]],
  "t_max": 5.0,
  "dt": 0.001,
  "sample_every": 500
}"#,
    );
    let output = binary()
        .arg("polarization")
        .arg(&path)
        .arg("--quiet")
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let stdout = String::from_utf8(output.stdout).unwrap();
    let last = stdout.lines().last().unwrap();
    let cells: Vec<f64> = last.split(',').map(|c| c.parse().unwrap()).collect();
    let (t, p, p_analytic) = (cells[0], cells[5], cells[6]);
    assert_eq!(t, 5.0);
    assert!((p - p_analytic).abs() < 1e-6);
    assert!(p < 1.0, "the bath must depolarize the state");
}

#[test]
fn json_format_mirrors_the_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, "dephasing.json", DEPHASING_CONFIG);
    let output = binary()
        .arg("evolve")
        .arg(&path)
        .arg("--format")
        .arg("json")
        .arg("--quiet")
        .output()
        .unwrap();
    assert!(output.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(parsed["scenario"], "dephasing3");
    let columns = parsed["columns"].as_object().unwrap();
    for name in ["t", "n1", "n8", "r", "purity", "re_rho23"] {
        let column = columns[name].as_array().unwrap();
        assert_eq!(column.len(), 6, "5 samples plus t = 0");
    }
}

#[test]
fn output_flag_writes_the_file_and_report_goes_to_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, "dephasing.json", DEPHASING_CONFIG);
    let out_path = dir.path().join("series.csv");
    let output = binary()
        .arg("evolve")
        .arg(&path)
        .arg("--output")
        .arg(&out_path)
        .output()
        .unwrap();
    assert!(output.status.success());
    assert!(output.stdout.is_empty(), "table must go to the file");
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("rows written: 6"), "{stderr}");
    assert!(stderr.contains("max trace drift"), "{stderr}");
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(written.lines().count(), 7);
}

#[test]
fn generators_dump_emits_the_advertised_keys() {
    let output = binary().arg("generators").arg("dump").output().unwrap();
    assert!(output.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(parsed["pauli"].as_array().unwrap().len(), 3);
    assert_eq!(parsed["gell_mann"].as_array().unwrap().len(), 8);
    // λ₈[2][2] = −2/√3.
    let entry = &parsed["gell_mann"][7][2][2];
    // Floats go through the deterministic e-notation formatter but are
    // still plain JSON numbers.
    let re = entry[0].as_f64().unwrap();
    assert!((re + 2.0 / 3.0_f64.sqrt()).abs() < 1e-12);
    assert_eq!(entry[1].as_f64().unwrap(), 0.0);

    // The f tensor contains all 6 permutations of each independent triple.
    let f = parsed["f"].as_array().unwrap();
    assert_eq!(f.len(), 9 * 6);
    let d = parsed["d"].as_array().unwrap();
    assert!(d.len() > 9 * 6);
    let first = &f[0];
    assert_eq!(first["indices"].as_array().unwrap().len(), 3);
    assert!(first["value"].is_number());

    // Byte determinism of the dump.
    let again = binary().arg("generators").arg("dump").output().unwrap();
    assert_eq!(output.stdout, again.stdout);
}

#[test]
fn oversized_steps_exit_with_the_numeric_code() {
    let dir = tempfile::tempdir().unwrap();
    let unstable = DEPHASING_CONFIG
        .replace("\"eta\": 0.1", "\"eta\": 100.0")
        .replace("\"dt\": 0.001", "\"dt\": 0.05");
    let path = write_config(&dir, "unstable.json", &unstable);
    let output = binary().arg("evolve").arg(&path).arg("--quiet").output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}
