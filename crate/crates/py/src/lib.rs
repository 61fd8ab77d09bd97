//! Python bindings. Complex matrices cross the boundary as `(real, imag)`
//! pairs of nested lists; result documents as JSON text.

use clap::Parser;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use su3_phase::cli::{execute, Cli, Format};
use su3_phase::euler::{d_matrix as d_matrix_rs, EulerAngles};
use su3_phase::gellmann::AlgebraVector8;
use su3_phase::nonabelian::{self, LevelSet};
use su3_phase::smallcomplex::DynMatrix;
use su3_phase::spec::PathSpec;
use su3_phase::state;

type Parts = (Vec<Vec<f64>>, Vec<Vec<f64>>);

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parts(m: &DynMatrix) -> Parts {
    (m.real_parts(), m.imag_parts())
}

/// `D(alpha, beta, gamma, theta, a, b, c, phi)` as `(real, imag)`.
#[pyfunction]
#[pyo3(signature = (alpha, beta, gamma, theta, a=0.0, b=0.0, c=0.0, phi=0.0))]
#[allow(clippy::too_many_arguments)]
fn d_matrix(alpha: f64, beta: f64, gamma: f64, theta: f64, a: f64, b: f64, c: f64, phi: f64) -> Parts {
    parts(&d_matrix_rs(&EulerAngles { alpha, beta, gamma, theta, a, b, c, phi }).into())
}

#[pyfunction]
fn n_vector(alpha: f64, beta: f64, gamma: f64, theta: f64) -> Vec<f64> {
    state::n_vector(alpha, beta, gamma, theta).0.to_vec()
}

/// Pure-state components `(real, imag)`, optionally with a global phase.
#[pyfunction]
#[pyo3(signature = (alpha, beta, gamma, theta, chi=0.0))]
fn pure_state(alpha: f64, beta: f64, gamma: f64, theta: f64, chi: f64) -> (Vec<f64>, Vec<f64>) {
    let psi = state::pure_state(&state::PureStateCoords::new(alpha, beta, gamma, theta).with_phase(chi));
    (psi.0.iter().map(|z| z.re).collect(), psi.0.iter().map(|z| z.im).collect())
}

fn algebra_vector(n: Vec<f64>) -> PyResult<AlgebraVector8> {
    let arr: [f64; 8] = n.try_into().map_err(|v: Vec<f64>| err(format!("expected 8 components, got {}", v.len())))?;
    Ok(AlgebraVector8(arr))
}

/// `rho = (1 + sqrt(3) n.lambda) / 3`; `n` must be a unit 8-vector.
#[pyfunction]
fn density(n: Vec<f64>) -> PyResult<Parts> {
    let rho = state::density_from_n(&algebra_vector(n)?).map_err(err)?;
    Ok(parts(&rho.matrix.into()))
}

#[pyfunction]
#[pyo3(signature = (n, tol=1e-9))]
fn is_pure(n: Vec<f64>, tol: f64) -> PyResult<bool> {
    Ok(state::is_pure(&algebra_vector(n)?, tol))
}

/// Abelian line integral of the pure-state connection along a TOML path spec.
#[pyfunction]
#[pyo3(signature = (spec, samples=None))]
fn geometric_phase(spec: &str, samples: Option<usize>) -> PyResult<f64> {
    let s = PathSpec::parse(spec, "<spec>").map_err(err)?;
    let samples = samples.or(s.samples).unwrap_or(1024);
    su3_phase::abelian::geometric_phase(&s.path, samples).map_err(err)
}

/// Path-ordered holonomy of the connection on a level set such as `"1,2"`.
#[pyfunction]
#[pyo3(signature = (spec, levels="1,2", segments=None))]
fn holonomy(spec: &str, levels: &str, segments: Option<usize>) -> PyResult<Parts> {
    let s = PathSpec::parse(spec, "<spec>").map_err(err)?;
    let levels: LevelSet = levels.parse().map_err(err)?;
    let segments = segments.or(s.segments).unwrap_or(nonabelian::DEFAULT_SEGMENTS);
    let h = nonabelian::holonomy(&s.path, &levels, segments).map_err(err)?;
    Ok(parts(&h.matrix))
}

/// Hamiltonian in the rotated frame as `(real, imag)`.
#[pyfunction]
fn hamiltonian(e1: f64, e3: f64, alpha: f64, beta: f64, gamma: f64, theta: f64) -> Parts {
    let p = nonabelian::HamiltonianParams::new(e1, e3, [alpha, beta, gamma, theta]);
    parts(&nonabelian::hamiltonian(&p).into())
}

/// Runs a command-line invocation in-process, e.g. `run(["verify", "--suite",
/// "purity"])`. Returns `(exit_code, document)`; usage errors raise.
#[pyfunction]
fn run(args: Vec<String>) -> PyResult<(i32, String)> {
    let cli = Cli::try_parse_from(std::iter::once("su3phase".to_string()).chain(args)).map_err(err)?;
    if cli.out.is_some() {
        return Err(err("--out is not supported from Python; write the returned text instead"));
    }
    let doc = execute(&cli).map_err(err)?;
    let text = match cli.format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv(),
    };
    Ok((doc.status.exit_code(), text))
}

#[pymodule]
fn su3_phase_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SCHEMA_VERSION", su3_phase::report::SCHEMA_VERSION)?;
    m.add_function(wrap_pyfunction!(d_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(n_vector, m)?)?;
    m.add_function(wrap_pyfunction!(pure_state, m)?)?;
    m.add_function(wrap_pyfunction!(density, m)?)?;
    m.add_function(wrap_pyfunction!(is_pure, m)?)?;
    m.add_function(wrap_pyfunction!(geometric_phase, m)?)?;
    m.add_function(wrap_pyfunction!(holonomy, m)?)?;
    m.add_function(wrap_pyfunction!(hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_angles_give_identity() {
        let (re, im) = d_matrix(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(re[i][j], if i == j { 1.0 } else { 0.0 });
                assert_eq!(im[i][j], 0.0);
            }
        }
    }
}
