use std::process::{Command, Output};

use serde_json::Value;

fn hes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hes"))
        .args(args)
        .output()
        .expect("run hes")
}

fn ok_stdout(args: &[&str]) -> String {
    let out = hes(args);
    assert!(
        out.status.success(),
        "hes {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    serde_json::from_str(&ok_stdout(args)).expect("valid JSON")
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

const KEYS: [&str; 4] = ["phi_plus", "phi_minus", "psi_plus", "psi_minus"];

#[test]
fn kz_sweep_csv() {
    let text = ok_stdout(&["kz", "--zmin", "0", "--zmax", "3", "--steps", "13"]);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "z,K_series,K_matrix,abs_diff,violation"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 13);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[0][1], 1.0);
    assert!((rows[0][4] - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    for r in &rows {
        assert!(r[3] < 1e-10, "abs_diff {}", r[3]);
        assert!(r[4] > 2.0);
    }
    assert_eq!(rows[12][0], 3.0);
}

#[test]
fn kz_json_has_snake_case_rows() {
    let v = ok_json(&[
        "kz", "--zmin", "1", "--zmax", "1", "--steps", "1", "--format", "json",
    ]);
    let row = &v["rows"][0];
    for k in ["z", "k_series", "k_matrix", "abs_diff", "violation", "dim"] {
        assert!(row.get(k).is_some(), "missing {k}");
    }
    assert!((f(&row["k_series"]) - 0.971_191_715_835_318).abs() < 1e-13);
}

#[test]
fn chsh_matches_closed_form() {
    let v = ok_json(&["chsh", "--z", "0"]);
    assert!((f(&v["analytic_value"]) - 2.0 * 2f64.sqrt()).abs() < 1e-6);
    assert!((f(&v["optimizer_value"]) - 2.0 * 2f64.sqrt()).abs() < 1e-6);
    for z in ["0.5", "1", "2"] {
        let v = ok_json(&["chsh", "--z", z]);
        assert!(f(&v["gap"]) >= -1e-6, "z = {z}");
        assert_eq!(v["seed"], 0);
        assert_eq!(v["restarts_used"], 16);
        for s in ["a", "a_prime", "b", "b_prime"] {
            assert!(v["optimizer_settings"][s]["theta"].is_number());
            assert!(v["analytic_settings"][s]["phi"].is_number());
        }
    }
    let v = ok_json(&["chsh", "--z", "1", "--state", "ψ⁻"]);
    assert_eq!(v["state"], "psi_minus");
    assert!(f(&v["gap"]) >= -1e-6);
}

#[test]
fn spin_teleport_report() {
    let v = ok_json(&[
        "teleport", "spin", "--alpha", "0.6", "--beta", "0.8i", "--trials", "1000",
    ]);
    assert!(f(&v["min_fidelity"]) >= 1.0 - 1e-9);
    assert_eq!(v["seed"], 0);
    let mut total = 0;
    for k in KEYS {
        let fr = f(&v["frequencies"][k]);
        assert!((fr - 0.25).abs() < 0.05, "{k}: {fr}");
        total += v["counts"][k].as_u64().unwrap();
    }
    assert_eq!(total, 1000);
    assert_eq!(v["corrections"]["psi_minus"], "y");
}

#[test]
fn parity_teleport_report() {
    let v = ok_json(&[
        "teleport",
        "parity",
        "--alpha",
        "0.3+0.4i",
        "--beta",
        "-0.5",
        "--normalize",
        "--z",
        "0.8",
        "--zpp",
        "1.2",
        "--channel",
        "psi+",
        "--trials",
        "1000",
    ]);
    assert!(f(&v["min_fidelity"]) >= 1.0 - 1e-9);
    assert_eq!(v["kind"], "parity");
    assert_eq!(f(&v["z_input"]), 1.2);
    for k in KEYS {
        assert!((f(&v["frequencies"][k]) - 0.25).abs() < 0.05);
    }
}

#[test]
fn swap_report() {
    let v = ok_json(&["swap", "--z", "1", "--zprime", "0.5", "--trials", "1000"]);
    assert!((f(&v["entropy_min"]) - 1.0).abs() < 1e-9);
    assert!((f(&v["entropy_max"]) - 1.0).abs() < 1e-9);
    assert!(f(&v["min_fidelity"]) >= 1.0 - 1e-9);
    let pairing = ["φ̃⁺", "φ̃⁻", "ψ̃⁺", "ψ̃⁻"];
    let signs = [0.5, -0.5, -0.5, 0.5];
    for (i, k) in KEYS.iter().enumerate() {
        assert_eq!(v["pairing"][k], pairing[i]);
        assert!((f(&v["coefficients"][k][0]) - signs[i]).abs() < 1e-12);
        assert!((f(&v["frequencies"][k]) - 0.25).abs() < 0.05);
    }
}

#[test]
fn swap_csv_has_one_row_per_trial() {
    let text = ok_stdout(&["swap", "--trials", "20", "--format", "csv"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "trial,outcome,parity_state,probability,fidelity,entropy"
    );
    assert_eq!(lines.len(), 21);
    for l in &lines[1..] {
        let entropy: f64 = l.rsplit(',').next().unwrap().parse().unwrap();
        assert!((entropy - 1.0).abs() < 1e-9);
    }
}

#[test]
fn entropy_of_named_states() {
    for (spec, want) in [
        ("hes:φ⁺:z=1", 1.0),
        ("hes:psi-:z=2", 1.0),
        ("paritybell:φ̃⁻:z=0.5,z'=2", 1.0),
        ("spinbell:Φ⁺", 1.0),
        ("product:z=1", 0.0),
    ] {
        let v = ok_json(&["entropy", spec]);
        assert!((f(&v["entropy"]) - want).abs() < 1e-10, "{spec}");
    }
    let v = ok_json(&["entropy", "hes:ψ⁺:z=1"]);
    let c = v["schmidt_coefficients"].as_array().unwrap();
    assert_eq!(c.len(), 2);
    for x in c {
        assert!((f(x) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
    }
}

#[test]
fn same_seed_gives_identical_bytes() {
    for args in [
        &["teleport", "spin", "--trials", "300", "--seed", "7"][..],
        &[
            "teleport", "parity", "--trials", "300", "--seed", "7", "--format", "csv",
        ],
        &["swap", "--trials", "300", "--seed", "7"],
        &["chsh", "--z", "1.5", "--seed", "7"],
        &["kz", "--steps", "25"],
    ] {
        let a = hes(args);
        let b = hes(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = ok_stdout(&["swap", "--trials", "50", "--seed", "1"]);
    let b = ok_stdout(&["swap", "--trials", "50", "--seed", "2"]);
    assert_ne!(a, b);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("hes-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("kz.csv");
    let out = hes(&["kz", "--steps", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("z,K_series"));
    assert_eq!(text, ok_stdout(&["kz", "--steps", "3"]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn failures_exit_nonzero_with_one_line() {
    for args in [
        &["kz", "--zmin", "2", "--zmax", "1"][..],
        &["kz", "--steps", "0"],
        &["teleport", "--trials", "0"],
        &["teleport", "--alpha", "1", "--beta", "1"],
        &["teleport", "--channel", "chi+"],
        &["swap", "--z", "-1"],
        &["chsh", "--z", "2", "--dim", "4"],
        &["chsh", "--dim", "5"],
        &["entropy", "cat:z=1"],
        &["entropy", "hes:φ⁺"],
        &["nonsense"],
    ] {
        let out = hes(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(out.stdout.is_empty());
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error:"), "{err}");
    }
}
