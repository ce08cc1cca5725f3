use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BALL: &str = r#"
mu = 0.1

[domain]
kind = "ball"
radius = 1.0
dim = 3

[nonlinearity]
kind = "power"
p = 3.0

[mesh]
points = 800
gamma = 3.0

[hardy]
mesh_points = [200, 400]
"#;

fn run(cmd: &str, config: &str, out: &Path, extra: &[&str]) -> Output {
    let cfg = out.join("run.toml");
    fs::create_dir_all(out).unwrap();
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_blowup"))
        .arg(cmd)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn sweep_config() -> String {
    format!("{BALL}\n[sweep]\nparameter = \"mu\"\nvalues = [0.0, 0.1, 0.25, 0.5, 1.0]\n").replace("points = 800", "points = 400")
}

#[test]
fn profile_columns_and_cubic_closed_form() {
    let tmp = TempDir::new().unwrap();
    let o = run("profile", BALL, tmp.path(), &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(tmp.path(), "profile.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "delta,psi,phi,tilde_phi,h_phi_d2");
    let mut rows = 0;
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let exact = 2f64.sqrt() / v[0];
        assert!((v[2] - exact).abs() <= 1e-6 * exact, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 51);
    let constants: serde_json::Value = serde_json::from_str(&read(tmp.path(), "constants.json")).unwrap();
    assert!((constants["c2"].as_f64().unwrap() - 21.985).abs() < 1e-3);
}

#[test]
fn solve_writes_solution_and_manifest() {
    let tmp = TempDir::new().unwrap();
    let o = run("solve", BALL, tmp.path(), &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(tmp.path(), "solution.csv");
    assert!(csv.starts_with("r,delta,u,u_over_phi,u_over_tilde_phi,h_u_delta2\n"));
    // u increases toward the boundary, i.e. decreases in delta
    let u: Vec<(f64, f64)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
            (v[1], v[2])
        })
        .collect();
    assert!(u.windows(2).all(|w| w[1].0 < w[0].0 && w[1].1 > w[0].1));
    let m: serde_json::Value = serde_json::from_str(&read(tmp.path(), "manifest.json")).unwrap();
    assert_eq!(m["status"], "ok");
    assert!(m["residual_norm"].as_f64().unwrap() < 1e-10);
    assert_eq!(m["fingerprint"].as_str().unwrap().len(), 64);
}

#[test]
fn every_command_is_byte_deterministic() {
    let tmp = TempDir::new().unwrap();
    let cases: Vec<(&str, String, Vec<&str>)> = vec![
        ("profile", BALL.to_string(), vec!["profile.csv", "constants.json"]),
        ("solve", BALL.to_string(), vec!["solution.csv", "manifest.json"]),
        ("verify", BALL.to_string(), vec!["report.json"]),
        ("hardy", BALL.to_string(), vec!["hardy.csv", "hardy.json"]),
        ("sweep", sweep_config(), vec!["sweep.csv"]),
    ];
    for (cmd, cfg, files) in cases {
        let a: PathBuf = tmp.path().join(format!("{cmd}_a"));
        let b: PathBuf = tmp.path().join(format!("{cmd}_b"));
        let oa = run(cmd, &cfg, &a, &[]);
        let ob = run(cmd, &cfg, &b, &["--threads", "1"]);
        assert_eq!(code(&oa), 0, "{cmd}: {}", String::from_utf8_lossy(&oa.stderr));
        assert_eq!(code(&ob), 0);
        assert_eq!(oa.stdout, ob.stdout, "{cmd} stdout");
        for f in files {
            assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{cmd}/{f}");
        }
    }
}

#[test]
fn verify_default_suite_passes_and_lists_statements() {
    let tmp = TempDir::new().unwrap();
    let o = run("verify", BALL, tmp.path(), &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let rep: serde_json::Value = serde_json::from_str(&read(tmp.path(), "report.json")).unwrap();
    let checks = rep["checks"].as_array().unwrap();
    assert!(checks.len() >= 15);
    for c in checks {
        assert!(!c["statement"].as_str().unwrap().is_empty());
        assert!(c["tolerance"].is_number());
    }
}

#[test]
fn zero_tolerance_fixture_exits_one_naming_the_check() {
    let tmp = TempDir::new().unwrap();
    let cfg = format!("{BALL}\n[checks]\nnames = [\"asymptotic_ratio\", \"convexity_sampling\"]\nratio_tolerance = 0.0\n");
    let o = run("verify", &cfg, tmp.path(), &[]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("asymptotic_ratio"), "{err}");
    let rep: serde_json::Value = serde_json::from_str(&read(tmp.path(), "report.json")).unwrap();
    assert_eq!(rep["all_pass"], false);
}

#[test]
fn config_errors_exit_two() {
    let tmp = TempDir::new().unwrap();
    for bad in [
        BALL.replace("p = 3.0", "p = 3.0\nq = 1"),
        BALL.replace("kind = \"ball\"", "kind = \"cube\""),
        BALL.replace("p = 3.0", "p = 1.0"),
        "not toml at all [".to_string(),
        format!("{BALL}\n[checks]\nnames = [\"nope\"]\n"),
    ] {
        let o = run("solve", &bad, tmp.path(), &[]);
        assert_eq!(code(&o), 2, "{bad}");
    }
    let o = run("sweep", BALL, tmp.path(), &[]);
    assert_eq!(code(&o), 2, "sweep without a [sweep] section");
    let o = Command::new(env!("CARGO_BIN_EXE_blowup")).arg("solve").output().unwrap();
    assert_eq!(code(&o), 2, "missing --config");
    let o = Command::new(env!("CARGO_BIN_EXE_blowup")).arg("frobnicate").output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn solver_failure_exits_three_with_manifest() {
    let tmp = TempDir::new().unwrap();
    let cfg = format!("{BALL}\n[solver]\nmax_iters = 1\n");
    let o = run("solve", &cfg, tmp.path(), &[]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    let m: serde_json::Value = serde_json::from_str(&read(tmp.path(), "manifest.json")).unwrap();
    assert_eq!(m["status"], "failed");
    assert!(m["error"].as_str().unwrap().contains("Newton"));
    assert!(!tmp.path().join("solution.csv").exists());
}

#[test]
fn hardy_on_interval_near_quarter() {
    let tmp = TempDir::new().unwrap();
    let cfg = BALL
        .replace("kind = \"ball\"\nradius = 1.0\ndim = 3", "kind = \"interval\"\nlength = 1.0")
        .replace("[200, 400]", "[2000, 8000]");
    let o = run("hardy", &cfg, tmp.path(), &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let h: serde_json::Value = serde_json::from_str(&read(tmp.path(), "hardy.json")).unwrap();
    let v = h["value"].as_f64().unwrap();
    assert!((v - 0.25).abs() <= 0.005, "{v}");
    assert_eq!(read(tmp.path(), "hardy.csv").lines().count(), 3);
}

#[test]
fn sweep_has_one_row_per_value_and_small_gaps() {
    let tmp = TempDir::new().unwrap();
    let o = run("sweep", &sweep_config(), tmp.path(), &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(tmp.path(), "sweep.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "parameter,value,c1,c2,a_bar,b0,m,gap,limsup");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    for r in rows {
        let gap: f64 = r.split(',').nth(7).unwrap().parse().unwrap();
        assert!(gap < 1e-2, "{r}");
    }
}

#[test]
fn output_formats_filter_files() {
    let tmp = TempDir::new().unwrap();
    let cfg = format!("{BALL}\n[output]\nformats = [\"json\"]\n");
    assert_eq!(code(&run("profile", &cfg, tmp.path(), &[])), 0);
    assert!(tmp.path().join("constants.json").exists());
    assert!(!tmp.path().join("profile.csv").exists());
}
