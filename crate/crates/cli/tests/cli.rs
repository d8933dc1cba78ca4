//! CLI behaviour: exit codes, file outputs, determinism of emissions.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_floquet")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("floquet-cli-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Constant-field "orbit": an equilibrium of the Lorenz system written as a
/// zero-mode-only enclosure.
fn write_equilibrium_orbit(dir: &Path) -> PathBuf {
    let text = r#"{
  "field": { "n": 3, "kind": "Lorenz", "sigma": 1.0, "rho": 0.5, "beta": 1.0 },
  "tau": { "lo": "0.3", "hi": "0.3" },
  "s_star": 2.0,
  "m_gamma": 0,
  "r_gamma": 0.0,
  "rigorous": false,
  "xi": [ { "k": 0, "re": [ {"lo":"0.0","hi":"0.0"}, {"lo":"0.0","hi":"0.0"}, {"lo":"0.0","hi":"0.0"} ],
            "im": [ {"lo":"0.0","hi":"0.0"}, {"lo":"0.0","hi":"0.0"}, {"lo":"0.0","hi":"0.0"} ] } ]
}"#;
    let path = dir.join("equilibrium.json");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn malformed_orbit_exits_4_with_diagnostic() {
    let dir = tmp_dir("malformed");
    let orbit = fixture("lorenz_sol4.json");
    let broken = std::fs::read_to_string(&orbit)
        .unwrap()
        .replacen("\"r_gamma\"", "\"r_gamma_oops\"", 1);
    let path = dir.join("broken.json");
    std::fs::write(&path, broken).unwrap();
    let out = Command::new(bin())
        .args(["solve", "--orbit"])
        .arg(&path)
        .args(["--out"])
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("r_gamma"), "diagnostic should name the missing field: {err}");
}

#[test]
fn equilibrium_verifies_but_has_no_trivial_direction() {
    let dir = tmp_dir("equilibrium");
    let orbit = write_equilibrium_orbit(&dir);
    // solve: residual at the constant-field solution is zero within rounding.
    let out = Command::new(bin())
        .args(["solve", "--orbit"])
        .arg(&orbit)
        .args(["--m", "8", "--M", "14", "--tol", "1e-14", "--out"])
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let res_line = stdout.lines().find(|l| l.contains("candidate residual")).unwrap();
    let res: f64 = res_line.split(':').nth(1).unwrap().trim().parse().unwrap();
    assert!(res < 1e-13, "constant field residual {res}");

    // verify: succeeds (exit 0) and writes a report.
    let out = Command::new(bin())
        .args(["verify", "--orbit"])
        .arg(&orbit)
        .args(["--m", "8", "--M", "14", "--out"])
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.join("out/report.json").exists());
    assert!(dir.join("out/verified_form.json").exists());

    // bundles: all exponents negative, no trivial direction -> exit 5.
    let out = Command::new(bin())
        .args(["bundles", "--orbit"])
        .arg(&orbit)
        .args(["--m", "8", "--M", "14", "--grid", "4", "--out"])
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn sol4_pipeline_emits_csv_and_eigen_json() {
    let dir = tmp_dir("sol4");
    let out_dir = dir.join("out");
    let run = |grid: &str, out: &Path| {
        Command::new(bin())
            .args(["pipeline", "--orbit"])
            .arg(fixture("lorenz_sol4.json"))
            .args(["--m", "60", "--M", "66", "--grid", grid, "--out"])
            .arg(out)
            .output()
            .unwrap()
    };
    let out = run("2", &out_dir);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("bundles.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    // header plus exactly two sample rows at θ ∈ {0, τ}
    assert_eq!(rows.len(), 3, "csv:\n{csv}");
    assert!(rows[0].starts_with("theta,base_1,base_2,base_3,w1_1_lo,w1_1_hi"));
    assert!(rows[1].starts_with("0,"));

    let eigen: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("eigen.json")).unwrap())
            .unwrap();
    assert_eq!(eigen["conditional"], serde_json::Value::Bool(true));
    assert_eq!(eigen["directions"].as_array().unwrap().len(), 3);

    // Byte-identical rerun.
    let out_dir2 = dir.join("out2");
    let out2 = run("2", &out_dir2);
    assert_eq!(out2.status.code(), Some(0));
    assert_eq!(
        std::fs::read(out_dir.join("bundles.csv")).unwrap(),
        std::fs::read(out_dir2.join("bundles.csv")).unwrap()
    );
    assert_eq!(
        std::fs::read(out_dir.join("eigen.json")).unwrap(),
        std::fs::read(out_dir2.join("eigen.json")).unwrap()
    );
}
