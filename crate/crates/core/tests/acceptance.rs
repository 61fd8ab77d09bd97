//! Acceptance criteria. Each criterion prints one PASS/FAIL line (written to
//! the raw stderr handle so it shows up without `--nocapture`).

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use su3_phase::report::ResultDocument;
use su3_phase::suites::{run_suite, Suite, SuiteConfig};

struct Outcome {
    passed: bool,
    detail: String,
}

fn suite_outcome(suite: Suite) -> Outcome {
    match run_suite(suite, &SuiteConfig::default()) {
        Ok(r) => {
            let failing: Vec<String> = r.checks.iter().filter(|c| !c.passed).map(|c| c.describe()).collect();
            let worst = r.checks.iter().map(|c| format!("{}={:.3e}", c.name, c.value)).collect::<Vec<_>>().join("; ");
            Outcome { passed: failing.is_empty(), detail: if failing.is_empty() { worst } else { failing.join("; ") } }
        }
        Err(e) => Outcome { passed: false, detail: format!("error: {e}") },
    }
}

fn report(id: usize, title: &str, o: &Outcome) {
    let line = format!("{} criterion {id:>2} ({title}): {}\n", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_su3phase"));
    c.current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."));
    c
}

fn run_twice(args: &[&str]) -> Result<(), String> {
    let a = bin().args(args).output().map_err(|e| e.to_string())?;
    let b = bin().args(args).output().map_err(|e| e.to_string())?;
    if a.stdout.is_empty() {
        return Err(format!("{args:?}: empty output, stderr {}", String::from_utf8_lossy(&a.stderr)));
    }
    if a.stdout != b.stdout || a.status.code() != b.status.code() {
        return Err(format!("{args:?}: outputs differ between runs"));
    }
    if !args.contains(&"csv") {
        let text = String::from_utf8(a.stdout).map_err(|e| e.to_string())?;
        let doc = ResultDocument::from_json(&text).map_err(|e| format!("{args:?}: {e}"))?;
        if doc.to_json() != text {
            return Err(format!("{args:?}: JSON round trip is not exact"));
        }
    }
    Ok(())
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 7] = [
        &["verify", "--suite", "purity"],
        &["verify", "--suite", "stokes", "--seed", "7"],
        &["phase", "--spec", "specs/alpha_circle.toml"],
        &["phase", "--spec", "specs/open_segment.toml", "--format", "csv"],
        &["holonomy", "--spec", "specs/quad_loop.toml", "--levels", "1,2"],
        &["evolve", "--spec", "specs/adiabatic_alpha.toml", "--t-ladder", "20,40", "--parallel"],
        &["density", "--alpha", "0.3", "--beta", "pi/5", "--gamma", "-1", "--theta", "1.2"],
    ];
    let errors: Vec<String> = runs.iter().filter_map(|a| run_twice(a).err()).collect();
    Outcome {
        passed: errors.is_empty(),
        detail: if errors.is_empty() { format!("{} commands byte-identical across runs", runs.len()) } else { errors.join("; ") },
    }
}

#[test]
fn acceptance_criteria() {
    let mut all = true;
    let criteria = [
        (1, "algebra", Suite::Algebra),
        (2, "purity", Suite::Purity),
        (3, "adjoint row", Suite::Adjoint),
        (4, "abelian closed forms", Suite::Abelian),
        (5, "Stokes", Suite::Stokes),
        (6, "frame-connection oracle", Suite::Frame),
        (7, "holonomy", Suite::Holonomy),
    ];
    for (id, title, suite) in criteria {
        let o = suite_outcome(suite);
        report(id, title, &o);
        all &= o.passed;
    }

    let start = Instant::now();
    let mut o = suite_outcome(Suite::Adiabatic);
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        o.passed = false;
    }
    o.detail = format!("{} ({:.1} s)", o.detail, elapsed.as_secs_f64());
    report(8, "adiabatic sweeps", &o);
    all &= o.passed;

    let o = suite_outcome(Suite::Gauge);
    report(9, "gauge covariance", &o);
    all &= o.passed;

    let o = determinism();
    report(10, "CLI determinism", &o);
    all &= o.passed;

    assert!(all, "at least one acceptance criterion failed");
}
