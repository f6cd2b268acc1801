use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn demo(file: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../demo").join(file).to_str().unwrap().to_string()
}

fn sers_kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sers-kit")).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn base(particle: Option<&str>, separation: Option<[f64; 3]>) -> Value {
    let mut v = json!({
        "inputs": {"molecule": demo("molecule.json"), "modes": [demo("mode.json")]},
        "sweep": {"omega_min": 0.05, "omega_max": 0.25, "points": 5},
        "field": {"pol_in": [1.0, 0.0, 0.0], "pol_out": [1.0, 0.0, 0.0]}
    });
    if let Some(p) = particle {
        v["inputs"]["particle"] = demo(p).into();
    }
    if let Some(s) = separation {
        v["separation"] = json!(s);
    }
    v
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn run_to_string(mode: &str, config: &Path, extra: &[&str]) -> (Option<i32>, String) {
    let mut args = vec![mode, "--config", config.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = sers_kit(&args);
    (o.status.code(), String::from_utf8(o.stdout).unwrap())
}

#[test]
fn classical_without_particle_has_unit_enhancement() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = base(None, None);
    v["sweep"] = json!({"omega_min": 0.1, "omega_max": 0.3, "points": 1});
    let path = write_config(dir.path(), "c.json", &v);
    let (code, csv) = run_to_string("classical", &path, &[]);
    assert_eq!(code, Some(0));
    let r = rows(&csv);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][0], "1e-1");
    assert_eq!(r[0][4], "1e0");
    assert_eq!(r[0][8], "ok");
}

#[test]
fn quantum_rpa_without_particle_matches_normal_raman() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "q.json", &base(None, None));
    let (code, csv) = run_to_string("quantum-rpa", &path, &[]);
    assert_eq!(code, Some(0));
    for r in rows(&csv) {
        let (raman, sers): (f64, f64) = (r[2].parse().unwrap(), r[3].parse().unwrap());
        assert!(raman > 0.0);
        assert!((sers - raman).abs() <= 4.0 * f64::EPSILON * raman, "{sers} vs {raman}");
    }
}

#[test]
fn stdout_and_file_output_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "q.json", &base(Some("particle_rpa.json"), Some([0.0, 0.0, 5.0])));
    let (_, stdout) = run_to_string("quantum-rpa", &path, &[]);
    let out = dir.path().join("out.csv");
    let (code, _) = run_to_string("quantum-rpa", &path, &["--out", out.to_str().unwrap()]);
    assert_eq!(code, Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), stdout);
}

#[test]
fn config_output_path_is_relative_to_config() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = base(None, None);
    v["output"] = "result.csv".into();
    let path = write_config(dir.path(), "q.json", &v);
    let (code, stdout) = run_to_string("classical", &path, &[]);
    assert_eq!(code, Some(0));
    assert!(stdout.is_empty());
    assert!(std::fs::read_to_string(dir.path().join("result.csv")).unwrap().starts_with("omega_k,"));
}

#[test]
fn failed_rows_are_isolated() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = base(Some("particle_voxel.json"), None);
    v["sweep"] = json!({"omega_min": 0.05, "omega_max": 0.55, "points": 51});
    // The demo sweep needs between 15 and 25 iterations depending on frequency.
    v["numeric"] = json!({"max_iter": 20});
    let path = write_config(dir.path(), "d.json", &v);
    let (code, csv) = run_to_string("quantum-dda", &path, &[]);
    assert_eq!(code, Some(0));
    let r = rows(&csv);
    let failed: Vec<_> = r.iter().filter(|x| x[8] != "ok").collect();
    assert!(!failed.is_empty() && failed.len() < r.len(), "{} of {} failed", failed.len(), r.len());
    for f in failed {
        assert_eq!(f[8], "nonconvergence");
        assert!(f[0].parse::<f64>().is_ok() && f[1].parse::<f64>().is_ok());
        assert!(f[2..8].iter().all(String::is_empty));
    }
}

#[test]
fn all_rows_failing_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = base(Some("particle_voxel.json"), None);
    v["numeric"] = json!({"max_iter": 1});
    let path = write_config(dir.path(), "d.json", &v);
    let (code, csv) = run_to_string("quantum-dda", &path, &[]);
    assert_eq!(code, Some(1));
    assert_eq!(rows(&csv).len(), 5);
}

#[test]
fn eta_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = base(Some("particle_rpa.json"), Some([0.0, 0.0, 5.0]));
    v["numeric"] = json!({"eta": 0.05});
    let path = write_config(dir.path(), "q.json", &v);
    let (_, from_config) = run_to_string("quantum-rpa", &path, &[]);
    v["numeric"] = json!({"eta": 1e-3});
    let path2 = write_config(dir.path(), "q2.json", &v);
    let (_, from_flag) = run_to_string("quantum-rpa", &path2, &["--eta", "0.05"]);
    let (_, default) = run_to_string("quantum-rpa", &path2, &[]);
    assert_eq!(from_config, from_flag);
    assert_ne!(from_flag, default);
    let (code, _) = run_to_string("quantum-rpa", &path2, &["--eta", "0"]);
    assert_eq!(code, Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "c.json", &base(None, None));
    assert_eq!(sers_kit(&["fourier", "--config", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(sers_kit(&["classical"]).status.code(), Some(2));
    let (code, _) = run_to_string("classical", &path, &["--threads", "0"]);
    assert_eq!(code, Some(2));
}

#[test]
fn config_mode_must_match_command() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = base(None, None);
    v["mode"] = "classical".into();
    let path = write_config(dir.path(), "c.json", &v);
    let o = sers_kit(&["quantum-rpa", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mode"));
}

#[test]
fn anti_stokes_shifts_scattered_frequency_up() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = base(None, None);
    v["stokes"] = json!({"omega_j": 0.02, "anti_stokes": true});
    let path = write_config(dir.path(), "c.json", &v);
    let (code, csv) = run_to_string("classical", &path, &[]);
    assert_eq!(code, Some(0));
    for r in rows(&csv) {
        let (wk, wkp): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        assert_eq!(wkp, wk + 0.02);
    }
}

#[test]
fn self_energy_rows_cover_every_orbital() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = base(Some("particle_rpa.json"), Some([0.0, 0.0, 5.0]));
    v["inputs"].as_object_mut().unwrap().remove("modes");
    let path = write_config(dir.path(), "s.json", &v);
    let (code, csv) = run_to_string("self-energy", &path, &[]);
    assert_eq!(code, Some(0));
    let r = rows(&csv);
    assert_eq!(r.len(), 10);
    // Every sweep point lies above the chemical potential, where widths are non-negative.
    assert!(r.iter().all(|x| x[3].parse::<f64>().unwrap() >= 0.0));
}
