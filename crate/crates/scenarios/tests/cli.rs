use std::path::Path;
use std::process::{Command, Output};

use scenarios::ScenarioConfig;

const BIN: &str = env!("CARGO_BIN_EXE_curvtherm");
const CONFIGS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/configs");

fn curvtherm(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn run_config(sub: &str, config: &Path, out: &Path) -> Output {
    curvtherm(&[sub, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()])
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|v| v.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn shipped_configs_run_and_emit_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    for (sub, name) in [
        ("newtonian", "newtonian"),
        ("desitter", "desitter"),
        ("desitter", "planck"),
        ("custom", "custom_desitter"),
        ("custom", "custom_uniform"),
    ] {
        let cfg_path = Path::new(CONFIGS).join(format!("{name}.json"));
        let out = dir.path().join(name);
        let o = run_config(sub, &cfg_path, &out);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));

        for file in ["forward.csv", "reverse.csv"] {
            let (header, rows) = read_csv(&out.join(file));
            assert_eq!(header, ["work", "probability"]);
            assert!(!rows.is_empty());
            assert!(rows.iter().all(|r| (0.0..=1.0).contains(&r[1])));
            let total: f64 = rows.iter().map(|r| r[1]).sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
        let raw = std::fs::read_to_string(out.join("curves.csv")).unwrap();
        assert!(raw.ends_with('\n'));
        let (header, rows) = read_csv(&out.join("curves.csv"));
        assert!(header[0] == "t" || header[0] == "zfactor");
        assert!(rows.iter().all(|r| r.len() == header.len()));

        // metadata echoes the parsed config exactly
        let report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
        let echoed: ScenarioConfig = serde_json::from_value(report["metadata"]["config"].clone()).unwrap();
        assert_eq!(echoed, ScenarioConfig::from_path(&cfg_path).unwrap());
        assert!(report["report"]["crooks_max_residual"].as_f64().unwrap() < 1e-8);
    }
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");

    let unknown = write_config(
        dir.path(),
        "unknown.json",
        r#"{"scenario": "newtonian", "system": {"two_level": {"eps": 1}},
            "geometry": {"uniform_gravity": {"g": 0.01}}, "colour": "red"}"#,
    );
    assert_eq!(run_config("newtonian", &unknown, &out).status.code(), Some(1));

    let wrong_system = write_config(
        dir.path(),
        "osc.json",
        r#"{"scenario": "newtonian", "system": {"oscillator": {"mass": 1, "omega0": 1}},
            "geometry": {"uniform_gravity": {"g": 0.01}}}"#,
    );
    assert_eq!(run_config("newtonian", &wrong_system, &out).status.code(), Some(1));

    let inverted = write_config(
        dir.path(),
        "inverted.json",
        r#"{"scenario": "desitter", "system": {"oscillator": {"mass": 1, "omega0": 1}},
            "geometry": {"de_sitter": {"hubble": 1.5}}}"#,
    );
    assert_eq!(run_config("desitter", &inverted, &out).status.code(), Some(1));

    let empty = write_config(
        dir.path(),
        "empty.json",
        r#"{"scenario": "custom", "system": {"two_level": {"eps": 1}},
            "geometry": {"tables": {"samples": []}}}"#,
    );
    assert_eq!(run_config("custom", &empty, &out).status.code(), Some(1));

    let leaky = write_config(
        dir.path(),
        "leaky.json",
        r#"{"scenario": "desitter", "beta": 0.5, "system": {"oscillator": {"mass": 1, "omega0": 1, "dim": 4}},
            "geometry": {"de_sitter": {"hubble": 0.1}}}"#,
    );
    let o = run_config("desitter", &leaky, &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("increase dim"));

    let missing = dir.path().join("missing.json");
    assert_eq!(run_config("desitter", &missing, &out).status.code(), Some(1));
}

#[test]
fn verify_fast_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = curvtherm(&["verify", "--level", "fast", "--out", dir.path().to_str().unwrap()]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{stdout}");
    for id in scenarios::verify::CRITERIA {
        assert!(stdout.contains(&format!("{id} PASS")), "{stdout}");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["level"], "fast");
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["criteria"].as_array().unwrap().len(), 8);
}
