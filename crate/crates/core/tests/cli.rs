use std::path::Path;
use std::process::Command;

use mepkit::basis::{compute_moments, GasModel, MomentBasis, PhaseSpace, Quadrature};
use mepkit::closures::{maxwellian, Distribution};
use serde_json::Value;

fn mepkit(args: &[&str], cwd: &Path) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mepkit"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn equilibrium_moments(n: u32) -> Vec<f64> {
    // A grid matched to the Maxwellian integrates its polynomial moments exactly.
    let gas = GasModel::default();
    let basis = MomentBasis::full(n, PhaseSpace::Classical);
    let (v, t) = ([0.3, -0.1, 0.2], 0.8);
    let fe = maxwellian(1.2, v, t, &gas).unwrap();
    let s = t.sqrt();
    let scale = [[s, 0.0, 0.0], [0.0, s, 0.0], [0.0, 0.0, s]];
    let q = Quadrature::new(3, 12, v, scale, None, &gas).unwrap();
    compute_moments(|x, en| fe.value(x, en), &basis, &q, &gas).unwrap().values
}

#[test]
fn speeds_reports_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = mepkit(&["speeds", "--N", "2"], dir.path());
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!((v["bound"].as_f64().unwrap() - 1.3416408).abs() < 1e-6);
    assert!(v["satisfied"].as_bool().unwrap());
}

#[test]
fn close_equilibrium_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let values = equilibrium_moments(4);
    let input = serde_json::json!({"basis": "full:4", "values": values});
    std::fs::write(dir.path().join("m.json"), input.to_string()).unwrap();
    let (code, _, err) = mepkit(&["close", "m.json", "--out", "c.json"], dir.path());
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(dir.path().join("c.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let basis = MomentBasis::full(4, PhaseSpace::Classical);
    let lam: Vec<f64> = serde_json::from_value(v["multipliers"].clone()).unwrap();
    for (e, l) in basis.elements.iter().zip(&lam) {
        if e.velocity_degree() >= 3 {
            assert!(l.abs() < 1e-10, "{} = {l}", e.label());
        }
    }
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("c.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "close");
    assert_eq!(manifest["outputs"][0]["sha256"], mepkit::cli::sha256_hex(text.as_bytes()));
    assert_eq!(
        manifest["inputs"][0]["sha256"],
        mepkit::cli::sha256_hex(std::fs::read(dir.path().join("m.json")).unwrap().as_slice())
    );

    let (code, out, err) = mepkit(&["close", "--from-multipliers", "c.json"], dir.path());
    assert_eq!(code, 0, "{err}");
    let back: Value = serde_json::from_str(&out).unwrap();
    let m: Vec<f64> = serde_json::from_value(back["moments"].clone()).unwrap();
    for (a, b) in m.iter().zip(&values) {
        assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()), "{a} vs {b}");
    }
}

#[test]
fn rel_coeffs_grid_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = mepkit(
        &["rel-coeffs", "--alphas", "-1,0,1", "--gammas", "1,2,5", "--out", "k.csv"],
        dir.path(),
    );
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(dir.path().join("k.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "alpha,gamma,n,e,p,C01,Cpi1,C03,C05,status");
    assert_eq!(lines.len(), 10);
    assert!(lines[1..].iter().all(|l| l.ends_with(",ok")));
    assert!(dir.path().join("k.csv.manifest.json").exists());
}

#[test]
fn data_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let (code, _, err) = mepkit(&["rel-table", "--out", name], dir.path());
        assert_eq!(code, 0, "{err}");
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn exit_codes_and_error_json() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"basis":"full:4","values":[1,2]}"#).unwrap();
    let (code, _, err) = mepkit(&["close", "bad.json"], dir.path());
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(v["error"], "InvalidInput");

    let (code, _, err) = mepkit(&["no-such-command"], dir.path());
    assert_eq!(code, 2);
    assert!(serde_json::from_str::<Value>(err.trim()).is_ok());

    // Realizable (positive Hankel determinant) but beyond what the
    // maximum-entropy closure reaches.
    std::fs::write(dir.path().join("junk.json"), r#"{"basis":"line:4","values":[1,0,1,0,4]}"#).unwrap();
    let (code, _, err) = mepkit(&["close", "junk.json"], dir.path());
    assert_eq!(code, 3, "{err}");
    let v: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(v["error"], "NotRealizable");
}

#[test]
fn region_axis_scan_writes_a_mask() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = mepkit(
        &["region", "--sigma-points", "3", "--q-points", "3", "--directions", "axis", "--out", "r.csv"],
        dir.path(),
    );
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert_eq!(csv.lines().count(), 10);
    assert!(csv.starts_with("sigma_over_p,q_norm,hyperbolic"));
}

#[test]
fn probe_junk_summary_in_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = mepkit(&["probe-junk", "--steps", "10", "--resolution", "1e-2", "--out", "p.csv"], dir.path());
    assert_eq!(code, 0, "{err}");
    let m: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("p.csv.manifest.json")).unwrap()).unwrap();
    assert!(m["extra"]["boundary"].as_f64().is_some());
    assert_eq!(std::fs::read_to_string(dir.path().join("p.csv")).unwrap().lines().count(), 12);
}

#[test]
fn simulate_writes_snapshots_and_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"closure":{"kind":"polyatomic6","d":7},"cells":20,"t_final":0.05,"tau":0.01,
        "boundary":"periodic","snapshot_times":[0.0],
        "initial":{"kind":"smooth","base":{"rho":1,"v":[0.2,0,0],"t":1},"amplitude":0.1}}"#;
    std::fs::write(dir.path().join("sim.json"), cfg).unwrap();
    let (code, _, err) = mepkit(&["simulate", "sim.json", "--out-dir", "run"], dir.path());
    assert_eq!(code, 0, "{err}");
    let run = dir.path().join("run");
    let s0 = std::fs::read_to_string(run.join("snapshot_0000.csv")).unwrap();
    assert!(s0.starts_with("x,rho,v1,v2,v3,T,Pi\n"));
    assert_eq!(s0.lines().count(), 21);
    assert!(run.join("snapshot_0001.csv").exists());
    let m: Value = serde_json::from_str(&std::fs::read_to_string(run.join("manifest.json")).unwrap()).unwrap();
    for r in m["extra"]["ledger"]["relative_residual"].as_array().unwrap() {
        assert!(r.as_f64().unwrap().abs() < 1e-12);
    }
    assert_eq!(m["extra"]["config"]["cells"], 20);
}
