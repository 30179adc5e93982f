use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dyad_cli::{columns, Observable};
use dyad_core::greens;
use dyad_core::verify::{run_with_kernel, GreenKernel, Level};
use dyad_core::{CMat3, Result, Vec3};

const LI70: &str = r#"{"rydberg": {"n": 70, "isotope_mass_u": 7.0160034366, "lambda0_um": 448}}"#;

fn dyad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dyad")).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(p).unwrap().trim_end().to_string()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let head = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|s| s.parse().unwrap()).collect())
        .collect();
    (head, rows)
}

#[test]
fn headers_match_golden() {
    use Observable::*;
    let cases: [(&str, &[Observable]); 4] = [
        ("all.csv", &[Emission, Displacement, Forces, Populations]),
        ("populations_forces_displacement.csv", &[Populations, Forces, Displacement]),
        ("populations.csv", &[Populations]),
        ("displacement.csv", &[Displacement]),
    ];
    for (file, obs) in cases {
        let mut obs = obs.to_vec();
        obs.sort();
        assert_eq!(columns(&obs).join(","), golden(file), "{file}");
    }
}

#[test]
fn written_header_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let cfg = format!(
        r#"{{"system": {LI70}, "k0R": 1.0, "times": [0.5],
            "observables": ["displacement", "emission", "forces", "populations"]}}"#
    );
    let cfg = write_config(dir.path(), "c.json", &cfg);
    let o = dyad(&["run", &cfg, "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), golden("all.csv"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn output_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!(
        r#"{{"system": {LI70},
            "k0R": {{"start": 0.3, "stop": 6, "count": 17, "spacing": "log"}},
            "times": {{"start": 0, "stop": 3, "count": 7}},
            "observables": ["populations", "forces", "displacement", "emission"]}}"#
    );
    let cfg = write_config(dir.path(), "c.json", &cfg);
    let mut outputs = Vec::new();
    for (threads, fmt) in [("1", "csv"), ("4", "csv"), ("3", "json"), ("1", "json")] {
        let p = dir.path().join(format!("out_{threads}.{fmt}"));
        let o = dyad(&["run", &cfg, "-o", p.to_str().unwrap(), "--threads", threads, "--format", fmt]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(fs::read(&p).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[2], outputs[3]);

    let (_, rows) = read_csv(&dir.path().join("out_1.csv"));
    assert_eq!(rows.len(), 17 * 7);
    let keys: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    assert_eq!(keys, sorted);

    let json: serde_json::Value = serde_json::from_slice(&outputs[2]).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), rows.len());
    assert_eq!(json["rows"][5][3].as_f64().unwrap(), rows[5][3]);
}

#[test]
fn empty_observables_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!(r#"{{"system": {LI70}, "k0R": 1.0, "times": 1.0, "observables": []}}"#);
    let cfg = write_config(dir.path(), "c.json", &cfg);
    let out = dir.path().join("never.csv");
    let o = dyad(&["run", &cfg, "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "invalid_config");
    assert_eq!(err["violations"][0]["field"], "observables");
    assert!(!out.exists());
}

#[test]
fn malformed_json_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", "{\"system\": ");
    let o = dyad(&["run", &cfg, "-o", "/nonexistent/x.csv"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn underresolved_quadrature_names_the_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!(
        r#"{{"system": {LI70}, "k0R": [1.0, 40.0], "times": [0.5],
            "observables": ["emission"], "quadrature": {{"order": 4, "tolerance": 1e-12}}}}"#
    );
    let cfg = write_config(dir.path(), "c.json", &cfg);
    let out = dir.path().join("o.csv");
    let o = dyad(&["run", &cfg, "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "numerical");
    assert!(err["k0R"].as_f64().is_some());
    assert_eq!(err["gamma0_t"].as_f64(), Some(0.5));
}

#[test]
fn displacement_sweep_peaks_near_077() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let cfg = format!(
        r#"{{"system": {LI70},
            "k0R": {{"start": 0.3, "stop": 3, "count": 200, "spacing": "log"}},
            "times": [1.0], "observables": ["displacement"],
            "output": {{"path": {:?}}}}}"#,
        out.to_str().unwrap()
    );
    let cfg = write_config(dir.path(), "c.json", &cfg);
    let o = dyad(&["run", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("peak |S_CM|"));

    let (head, rows) = read_csv(&out);
    assert_eq!(head, ["k0R", "T_s", "S_CM_m"]);
    assert_eq!(rows.len(), 200);
    let peak = rows.iter().max_by(|a, b| a[2].abs().total_cmp(&b[2].abs())).unwrap();
    assert!((peak[0] - 0.77).abs() < 0.1, "global peak at k0R = {}", peak[0]);
    // secondary maximum near k0R = 2
    let local: Vec<f64> = rows
        .windows(3)
        .filter(|w| w[1][2].abs() > w[0][2].abs() && w[1][2].abs() > w[2][2].abs())
        .map(|w| w[1][0])
        .collect();
    assert!(local.iter().any(|x| (x - 2.0).abs() < 0.1), "{local:?}");
}

fn negated_curl(x: f64, rhat: &Vec3) -> Result<CMat3> {
    Ok(-greens::green_curl(x, rhat)?)
}

#[test]
fn tampered_kernel_fails_quick_verify() {
    let kernel = GreenKernel {
        curl: negated_curl,
        ..GreenKernel::default()
    };
    let report = run_with_kernel(Level::Quick, &kernel);
    assert!(!report.all_passed());
    assert!(report.checks.iter().any(|c| c.name == "green_curl_mode_sum" && !c.passed));
}

#[test]
fn verify_quick_passes() {
    let start = std::time::Instant::now();
    let o = dyad(&["verify", "--level", "quick", "--json"]);
    assert!(start.elapsed().as_secs() < 30);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() >= 6);
    assert!(checks.iter().all(|c| c["passed"] == true));
}
