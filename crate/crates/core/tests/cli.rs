use std::path::PathBuf;
use std::process::{Command, Output};

use su3_phase::report::{ResultDocument, Status, Value};

fn root() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
}

fn su3phase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_su3phase")).current_dir(root()).args(args).output().expect("binary runs")
}

fn doc(out: &Output) -> ResultDocument {
    ResultDocument::from_json(std::str::from_utf8(&out.stdout).unwrap()).expect("valid result document")
}

fn real(d: &ResultDocument, key: &str) -> f64 {
    match d.outputs.get(key) {
        Some(Value::Real(x)) => *x,
        other => panic!("{key}: expected a real output, got {other:?}"),
    }
}

fn text(d: &ResultDocument, key: &str) -> String {
    match d.outputs.get(key) {
        Some(Value::Text(s)) => s.clone(),
        other => panic!("{key}: expected text, got {other:?}"),
    }
}

#[test]
fn loop_phase_is_pi() {
    let out = su3phase(&["phase", "--spec", "specs/alpha_circle.toml"]);
    assert_eq!(out.status.code(), Some(0));
    let d = doc(&out);
    assert_eq!(d.schema_version, 1);
    assert_eq!(d.status, Status::Pass);
    assert_eq!(text(&d, "label"), "loop phase");
    assert!((real(&d, "phase") - std::f64::consts::PI).abs() < 1e-9);
    assert_eq!(d.spec_digest.as_deref().map(str::len), Some(64));
}

#[test]
fn open_path_is_labelled() {
    let out = su3phase(&["phase", "--spec", "specs/open_segment.toml"]);
    assert_eq!(out.status.code(), Some(0));
    let d = doc(&out);
    assert_eq!(text(&d, "label"), "open-path line integral");
    assert!(!d.outputs.contains_key("phase_mod_2pi"));
}

#[test]
fn holonomy_of_single_level_loop() {
    let d = doc(&su3phase(&["holonomy", "--spec", "specs/a1_loop.toml"]));
    assert_eq!(d.status, Status::Pass);
    assert!((real(&d, "phase").abs() - std::f64::consts::PI).abs() < 1e-8);
    match d.outputs.get("holonomy") {
        Some(Value::Matrix { real, imag }) => {
            assert_eq!((real.len(), imag.len()), (1, 1));
            assert!((real[0][0] + 1.0).abs() < 1e-8);
        }
        other => panic!("unexpected holonomy output {other:?}"),
    }
}

#[test]
fn usage_errors_exit_2() {
    let cases: [&[&str]; 6] = [
        &["verify", "--suite", "nonsense"],
        &["phase"],
        &["phase", "--spec", "specs/does_not_exist.toml"],
        &["holonomy", "--spec", "specs/open_segment.toml"],
        &["holonomy", "--spec", "specs/alpha_circle.toml", "--segments", "8"],
        &["holonomy", "--spec", "specs/alpha_circle.toml", "--levels", "1,4"],
    ];
    for args in cases {
        let out = su3phase(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty(), "{args:?} wrote a document");
    }
}

#[test]
fn bad_spec_points_at_the_field() {
    let dir = std::env::temp_dir().join(format!("su3phase-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec = dir.join("bad.toml");
    std::fs::write(&spec, "[path]\nkind = \"circle\"\nangle = \"delta\"\n").unwrap();
    let out = su3phase(&["phase", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.toml:3:"), "{err}");
    assert!(err.contains("path.angle"), "{err}");
}

#[test]
fn tolerance_failure_exits_1() {
    let out = su3phase(&["verify", "--suite", "algebra", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let d = doc(&out);
    assert_eq!(d.status, Status::Fail);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
}

#[test]
fn fast_sweep_is_a_warning() {
    let out = su3phase(&["evolve", "--spec", "specs/adiabatic_alpha.toml", "--t-ladder", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let d = doc(&out);
    assert_eq!(d.status, Status::Warning);
    assert!(!d.warnings.is_empty());
}

#[test]
fn csv_output_and_out_file() {
    let dir = std::env::temp_dir().join(format!("su3phase-csv-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("density.csv");
    let args = ["--format", "csv", "--out", file.to_str().unwrap(), "density", "--theta", "pi/2"];
    let out = su3phase(&args);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&file).unwrap();
    let mut lines = written.lines();
    assert_eq!(lines.next(), Some("section,name,index,value"));
    assert!(written.contains("meta,schema_version,,1"));
    assert!(written.contains("meta,status,,pass"));

    let stdout = su3phase(&["--format", "csv", "density", "--theta", "pi/2"]).stdout;
    assert_eq!(stdout, written.as_bytes());
}

#[test]
fn density_at_theta_half_pi() {
    let d = doc(&su3phase(&["density", "--theta", "pi/2"]));
    match d.outputs.get("n") {
        Some(Value::Vector(n)) => {
            assert!((n[2] - 3f64.sqrt() / 2.0).abs() < 1e-12);
            assert!((n[7] - 0.5).abs() < 1e-12);
        }
        other => panic!("unexpected n {other:?}"),
    }
}

#[test]
fn seed_changes_sampled_suites_only_through_samples() {
    let a = su3phase(&["verify", "--suite", "purity", "--seed", "1"]);
    let b = su3phase(&["verify", "--suite", "purity", "--seed", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert_ne!(a.stdout, b.stdout);
    assert_eq!(a.stdout, su3phase(&["verify", "--suite", "purity", "--seed", "1"]).stdout);
}

#[test]
fn json_round_trips_exactly() {
    let out = su3phase(&["holonomy", "--spec", "specs/quad_loop.toml", "--levels", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(ResultDocument::from_json(&text).unwrap().to_json(), text);
}
