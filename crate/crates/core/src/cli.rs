//! `su3phase` command line: argument parsing, command dispatch and output.
//!
//! Exit codes: 0 success, 1 invariant or tolerance failure (including a
//! non-adiabatic warning), 2 usage or spec error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::abelian::{geometric_phase, geometric_phase_numeric, DEFAULT_SAMPLES, DEFAULT_STEP};
use crate::adiabatic::{convergence_study_with, Sweep, RESIDUAL_LIMIT, STEPS_PER_TIME};
use crate::error::{Error, Result};
use crate::euler::{coset_project, d_matrix, EulerAngles};
use crate::nonabelian::{holonomy, transport, LevelSet, DEFAULT_SEGMENTS};
use crate::report::{digest, Check, ResultDocument, Value};
use crate::spec::{eval_expr, PathSpec};
use crate::state::{density_from_n, n_vector, pure_state, DensityMatrix, PureStateCoords, PURITY_TOL};
use crate::suites::{run_suite, Suite, SuiteConfig, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const DEFAULT_E1: f64 = 0.0;
const DEFAULT_E3: f64 = 5.0;
const DEFAULT_LADDER: [f64; 4] = [50.0, 100.0, 200.0, 400.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "su3phase", version, about = "Geometric phases and holonomies of three-level systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Write the result document here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Override the pass tolerance of the command's checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Evaluate independent ladder entries concurrently (output is unchanged).
    #[arg(long, global = true)]
    pub parallel: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run seeded invariant suites.
    Verify {
        /// `all` or one of algebra, purity, adjoint, abelian, stokes, frame, holonomy, gauge, adiabatic.
        #[arg(long, default_value = "all", value_parser = parse_selector)]
        suite: SuiteSelector,
    },
    /// Abelian geometric phase of a path.
    Phase {
        #[command(flatten)]
        spec: SpecArg,
        /// Quadrature intervals.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Non-abelian holonomy of a closed path.
    Holonomy {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        ham: HamArgs,
        /// Path-ordering steps (at least 64).
        #[arg(long)]
        segments: Option<usize>,
    },
    /// Schroedinger sweeps compared with the holonomy.
    Evolve {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        ham: HamArgs,
        /// Comma-separated ascending sweep times.
        #[arg(long, value_delimiter = ',')]
        t_ladder: Option<Vec<String>>,
        /// Holonomy steps for the prediction.
        #[arg(long)]
        segments: Option<usize>,
    },
    /// Pure-state density matrix, Gell-Mann vector and purity checks.
    Density {
        /// Angles in radians; expressions such as pi/6 are accepted.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        beta: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        theta: String,
        /// Overall phase of the state vector.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        chi: String,
    },
}

#[derive(Clone, Debug)]
pub struct SuiteSelector(pub Vec<Suite>);

fn parse_selector(s: &str) -> std::result::Result<SuiteSelector, String> {
    Suite::parse_selector(s).map(SuiteSelector)
}

#[derive(Args, Debug, Clone)]
pub struct SpecArg {
    /// Path spec file (TOML).
    #[arg(long)]
    pub spec: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct HamArgs {
    /// Frame levels, e.g. `1,2` or `3`.
    #[arg(long)]
    pub levels: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub e1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub e3: Option<f64>,
}

fn usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::SpecParse { .. }
            | Error::InvalidLevels(_)
            | Error::InvalidPath(_)
            | Error::InvalidSweep(_)
            | Error::PathNotClosed
            | Error::TooFewSegments { .. }
            | Error::PathTooShort { .. }
            | Error::DegenerateSplit
            | Error::MixedLevels(_)
            | Error::PartialEigenspace(_)
    )
}

/// Parses `args` (program name first), runs the command, writes the
/// document and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let doc = match execute(&cli) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return if usage_error(&e) { EXIT_USAGE } else { EXIT_FAILURE };
        }
    };
    let text = match cli.format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv(),
    };
    let written = match &cli.out {
        Some(p) => std::fs::write(p, text.as_bytes()).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return EXIT_FAILURE;
    }
    for c in doc.failing() {
        eprintln!("{}", c.describe());
    }
    for w in &doc.warnings {
        eprintln!("warning: {w}");
    }
    doc.status.exit_code()
}

/// Runs the parsed command and returns its finalized document.
pub fn execute(cli: &Cli) -> Result<ResultDocument> {
    let mut doc = match &cli.command {
        Command::Verify { suite } => cmd_verify(&suite.0, cli)?,
        Command::Phase { spec, samples } => cmd_phase(spec, *samples, cli)?,
        Command::Holonomy { spec, ham, segments } => cmd_holonomy(spec, ham, *segments, cli)?,
        Command::Evolve { spec, ham, t_ladder, segments } => cmd_evolve(spec, ham, t_ladder.as_deref(), *segments, cli)?,
        Command::Density { alpha, beta, gamma, theta, chi } => cmd_density([alpha, beta, gamma, theta, chi], cli)?,
    };
    doc.finalize();
    Ok(doc)
}

fn load_spec(arg: &SpecArg, doc: &mut ResultDocument) -> Result<PathSpec> {
    let (spec, text) = PathSpec::load(&arg.spec)?;
    doc.arg("spec", arg.spec.display());
    doc.spec_digest = Some(digest(&text));
    doc.output("path_kind", spec.kind.as_str());
    doc.output("path_closed", if spec.path.is_closed() { "true" } else { "false" });
    Ok(spec)
}

fn tol(cli: &Cli, default: f64) -> f64 {
    cli.tol.unwrap_or(default)
}

fn cmd_verify(suites: &[Suite], cli: &Cli) -> Result<ResultDocument> {
    let mut doc = ResultDocument::new("verify");
    let names: Vec<&str> = suites.iter().map(|s| s.name()).collect();
    doc.arg("suite", names.join(",")).arg("seed", cli.seed);
    if let Some(t) = cli.tol {
        doc.arg("tol", t);
    }
    let cfg = SuiteConfig { seed: cli.seed, tol: cli.tol, parallel: cli.parallel };
    for &suite in suites {
        let result = run_suite(suite, &cfg)?;
        for c in result.checks {
            doc.check(Check { name: format!("{suite}: {}", c.name), ..c });
        }
        for (k, v) in result.outputs {
            doc.output(&format!("{suite}.{k}"), v);
        }
    }
    Ok(doc)
}

fn cmd_phase(arg: &SpecArg, samples: Option<usize>, cli: &Cli) -> Result<ResultDocument> {
    let mut doc = ResultDocument::new("phase");
    let spec = load_spec(arg, &mut doc)?;
    let samples = samples.or(spec.samples).unwrap_or(DEFAULT_SAMPLES);
    doc.arg("samples", samples);
    let phase = geometric_phase(&spec.path, samples)?;
    let numeric = geometric_phase_numeric(&spec.path, samples, DEFAULT_STEP, 0.0)?;
    let label = if spec.path.is_closed() { "loop phase" } else { "open-path line integral" };
    doc.output("label", label)
        .output("phase", phase)
        .output("phase_numeric", numeric)
        .output("delta", (phase - numeric).abs());
    if spec.path.is_closed() {
        doc.output("phase_mod_2pi", phase.rem_euclid(std::f64::consts::TAU));
    }
    doc.disc("samples", samples).disc("fd_step", DEFAULT_STEP).disc("quadrature", "composite Simpson per keyframe segment");
    doc.check(Check::at_most("closed form vs finite differences", (phase - numeric).abs(), tol(cli, 1e-9)));
    Ok(doc)
}

struct Resolved {
    levels: LevelSet,
    e1: f64,
    e3: f64,
}

fn resolve_ham(ham: &HamArgs, spec: &PathSpec, doc: &mut ResultDocument) -> Result<Resolved> {
    let levels = match &ham.levels {
        Some(s) => s.parse()?,
        None => spec.hamiltonian.levels.clone().unwrap_or(LevelSet::new(&[1, 2])?),
    };
    let e1 = ham.e1.or(spec.hamiltonian.e1).unwrap_or(DEFAULT_E1);
    let e3 = ham.e3.or(spec.hamiltonian.e3).unwrap_or(DEFAULT_E3);
    if !(e1.is_finite() && e3.is_finite()) {
        return Err(Error::InvalidSweep("energies must be finite".into()));
    }
    if e1 == e3 {
        return Err(Error::DegenerateSplit);
    }
    doc.arg("levels", &levels).arg("e1", e1).arg("e3", e3);
    Ok(Resolved { levels, e1, e3 })
}

fn cmd_holonomy(arg: &SpecArg, ham: &HamArgs, segments: Option<usize>, cli: &Cli) -> Result<ResultDocument> {
    let mut doc = ResultDocument::new("holonomy");
    let spec = load_spec(arg, &mut doc)?;
    let r = resolve_ham(ham, &spec, &mut doc)?;
    let segments = segments.or(spec.segments).unwrap_or(DEFAULT_SEGMENTS);
    doc.arg("segments", segments);
    let w = holonomy(&spec.path, &r.levels, segments)?;
    let (half, half_used) = transport(&spec.path, &r.levels, (segments / 2).max(1));
    let refinement = w.matrix.op_distance(&half);
    let residual = w.unitarity_residual();
    doc.output("holonomy", Value::matrix(&w.matrix))
        .output("unitarity_residual", residual)
        .output("refinement_delta", refinement);
    if w.matrix.dim == 1 {
        doc.output("phase", w.matrix.get(0, 0).arg());
    }
    doc.disc("segments", w.segments)
        .disc("half_segments", half_used)
        .disc("composition", "midpoint exp(i A(t_mid) dt), later steps on the left");
    doc.check(Check::at_most("unitarity", residual, tol(cli, 1e-10)));
    Ok(doc)
}

fn cmd_evolve(
    arg: &SpecArg,
    ham: &HamArgs,
    ladder: Option<&[String]>,
    segments: Option<usize>,
    cli: &Cli,
) -> Result<ResultDocument> {
    let mut doc = ResultDocument::new("evolve");
    let spec = load_spec(arg, &mut doc)?;
    let r = resolve_ham(ham, &spec, &mut doc)?;
    let ladder: Vec<f64> = match ladder {
        Some(items) => items
            .iter()
            .map(|s| eval_expr(s.trim()).map_err(|m| Error::InvalidSweep(format!("bad --t-ladder entry `{s}`: {m}"))))
            .collect::<Result<_>>()?,
        None => spec.hamiltonian.t_ladder.clone().unwrap_or_else(|| DEFAULT_LADDER.to_vec()),
    };
    let ladder_text: Vec<String> = ladder.iter().map(|t| format!("{t:?}")).collect();
    doc.arg("t_ladder", ladder_text.join(","));
    let segments = segments.or(spec.segments).unwrap_or(DEFAULT_SEGMENTS);
    doc.arg("segments", segments);
    let first = *ladder.first().ok_or_else(|| Error::InvalidSweep("empty T ladder".into()))?;
    let template = Sweep::new(spec.path.clone(), r.e1, r.e3, first)?;
    let study = convergence_study_with(&template, &ladder, &r.levels, segments, cli.parallel)?;
    let rows = study.rows.iter().map(|x| vec![x.t_total, x.deviation, x.residual, x.steps as f64, x.report.norm_drift]).collect();
    doc.output(
        "ladder",
        Value::Table {
            columns: ["T", "deviation", "residual", "steps", "norm_drift"].iter().map(|s| s.to_string()).collect(),
            rows,
        },
    );
    doc.output("prediction", Value::matrix(&study.prediction));
    let last = study.rows.last().expect("ladder is nonempty");
    doc.output("geometric_part", Value::matrix(&last.report.geometric_part))
        .output("total", Value::matrix(&last.report.total))
        .output("dynamical_phase", last.report.dynamical_phase)
        .output("final_deviation", last.deviation);
    doc.disc("steps_per_time", STEPS_PER_TIME)
        .disc("prediction_segments", study.prediction_segments)
        .disc("integrator", "RK4, renormalized each step");

    let bad: Vec<String> = study.rows.iter().filter(|x| x.residual > RESIDUAL_LIMIT).map(|x| format!("T = {:?} (residual {:e})", x.t_total, x.residual)).collect();
    if bad.is_empty() {
        doc.check(Check::at_most("deviation from holonomy at largest T", last.deviation, tol(cli, 1e-2)));
        if study.rows.len() > 1 {
            doc.check(Check::holds("deviations nonincreasing in T", study.is_monotone()));
        }
    } else {
        doc.warn(format!("non-adiabatic sweep: polar residual above {RESIDUAL_LIMIT} at {}", bad.join(", ")));
    }
    Ok(doc)
}

fn cmd_density(inputs: [&String; 5], cli: &Cli) -> Result<ResultDocument> {
    let mut doc = ResultDocument::new("density");
    let names = ["alpha", "beta", "gamma", "theta", "chi"];
    let mut v = [0.0; 5];
    for (i, (name, text)) in names.iter().zip(inputs).enumerate() {
        v[i] = eval_expr(text).map_err(|m| Error::SpecParse { location: format!("--{name}"), message: m })?;
        doc.arg(name, text);
    }
    let [a, b, g, t, chi] = v;
    let psi = pure_state(&PureStateCoords::new(a, b, g, t).with_phase(chi));
    let n = n_vector(a, b, g, t);
    let rho = DensityMatrix::from_state(&psi);
    let from_n = density_from_n(&n)?;
    let coset = coset_project(&d_matrix(&EulerAngles::coset(a, b, g, t)))?;
    let report = rho.check();
    let norm_defect = (n.dot(&n) - 1.0).abs();
    let star_defect = (n.star(&n) - n).max_abs();
    let routes = (rho.matrix - from_n.matrix).max_abs().max((rho.matrix - coset).max_abs());
    let pure = norm_defect <= PURITY_TOL && star_defect <= PURITY_TOL;
    doc.output("n", Value::Vector(n.0.to_vec()))
        .output("rho", Value::matrix(&rho.matrix.into()))
        .output("psi", Value::complex_vector(&psi.0))
        .output("is_pure", if pure { "true" } else { "false" })
        .output("min_eigenvalue", report.min_eigenvalue);
    doc.check(Check::at_most("n . n = 1", norm_defect, tol(cli, PURITY_TOL)))
        .check(Check::at_most("n star n = n", star_defect, tol(cli, PURITY_TOL)))
        .check(Check::at_most("rho^2 = rho", report.idempotency_defect, tol(cli, 1e-12)))
        .check(Check::at_most("trace rho = 1", report.trace_defect, tol(cli, 1e-12)))
        .check(Check::at_most("density routes agree", routes, tol(cli, 1e-12)));
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("su3phase").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn verify_selector() {
        let cli = parse(&["verify", "--suite", "algebra"]);
        let doc = execute(&cli).unwrap();
        assert_eq!(doc.status, Status::Pass);
        assert!(doc.checks.iter().any(|c| c.name.contains("512 triples")));
        assert!(Cli::try_parse_from(["su3phase", "verify", "--suite", "none"]).is_err());
        assert_eq!(run(["su3phase", "verify", "--suite", "none"]), EXIT_USAGE);
    }

    #[test]
    fn density_examples() {
        let doc = execute(&parse(&["density"])).unwrap();
        assert_eq!(doc.status, Status::Pass);
        let Value::Vector(n) = &doc.outputs["n"] else { panic!() };
        assert_eq!(n[7], -1.0);
        let doc = execute(&parse(&["density", "--theta", "pi/2"])).unwrap();
        let Value::Vector(n) = &doc.outputs["n"] else { panic!() };
        assert!((n[2] - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((n[7] - 0.5).abs() < 1e-15);
        let doc = execute(&parse(&["density", "--alpha", "-1.3", "--beta", "0.4", "--gamma", "2", "--theta", "1"])).unwrap();
        assert_eq!(doc.outputs["is_pure"], Value::Text("true".into()));
        assert!(execute(&parse(&["density", "--alpha", "pi/"])).is_err());
    }
}
