//! Pure states of a three-level system and their density matrices.
//!
//! A pure state is `rho = psi psi^dagger = (1 + sqrt(3) n.lambda) / 3` with `n`
//! a real unit 8-vector satisfying `n * n = n` under the star product.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gellmann::{compose, gellmann, AlgebraVector8};
use crate::smallcomplex::{ComplexMatrix3, ComplexVector3, C64};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Default tolerance for [`is_pure`].
pub const PURITY_TOL: f64 = 1e-9;

/// Coordinates of a pure state: the coset angles and an overall phase `chi`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PureStateCoords {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub theta: f64,
    pub chi: f64,
}

impl PureStateCoords {
    pub fn new(alpha: f64, beta: f64, gamma: f64, theta: f64) -> Self {
        PureStateCoords { alpha, beta, gamma, theta, chi: 0.0 }
    }

    pub fn with_phase(self, chi: f64) -> Self {
        PureStateCoords { chi, ..self }
    }
}

/// The Gell-Mann coordinates `n = -R_8.` of the pure state reached from
/// `diag(0, 0, 1)` by `D(alpha, beta, gamma, theta, 0, 0, 0, 0)`.
pub fn n_vector(alpha: f64, beta: f64, gamma: f64, theta: f64) -> AlgebraVector8 {
    let h = SQRT3 / 2.0;
    let s2t = theta.sin().powi(2);
    let sin_2t = (2.0 * theta).sin();
    let (sin_2b, cos_2b) = (2.0 * beta).sin_cos();
    AlgebraVector8([
        -h * (2.0 * alpha).cos() * sin_2b * s2t,
        h * (2.0 * alpha).sin() * sin_2b * s2t,
        h * cos_2b * s2t,
        h * (alpha + gamma).cos() * beta.cos() * sin_2t,
        -h * (alpha + gamma).sin() * beta.cos() * sin_2t,
        -h * (alpha - gamma).cos() * beta.sin() * sin_2t,
        -h * (alpha - gamma).sin() * beta.sin() * sin_2t,
        -1.0 + 1.5 * s2t,
    ])
}

/// `psi = e^{i chi} (e^{i(alpha+gamma)} cos(beta) sin(theta),
/// -e^{-i(alpha-gamma)} sin(beta) sin(theta), cos(theta))`, the third column
/// of `D(alpha, beta, gamma, theta, 0, 0, 0, 0)` times `e^{i chi}`.
pub fn pure_state(c: &PureStateCoords) -> ComplexVector3 {
    let (st, ct) = c.theta.sin_cos();
    let (sb, cb) = c.beta.sin_cos();
    let global = C64::from_polar(1.0, c.chi);
    ComplexVector3::new([
        C64::from_polar(cb * st, c.alpha + c.gamma) * global,
        -C64::from_polar(sb * st, -(c.alpha - c.gamma)) * global,
        C64::from(ct) * global,
    ])
}

/// `n_i = (sqrt(3) / 2) psi^dagger lambda_i psi` for a unit vector `psi`.
pub fn n_from_state(psi: &ComplexVector3) -> AlgebraVector8 {
    let mut n = AlgebraVector8::zeros();
    for k in 1..=8 {
        let lam = gellmann(k).expect("index in range");
        n[k] = 0.5 * SQRT3 * psi.inner(&lam.mul_vec(psi)).re;
    }
    n
}

/// A 3x3 density matrix candidate. Construction does not reject matrices
/// that fail positivity; use [`DensityMatrix::check`] to classify.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    pub matrix: ComplexMatrix3,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityCheck {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    /// `max |rho^2 - rho|`; zero exactly for pure states.
    pub idempotency_defect: f64,
}

impl DensityCheck {
    pub fn is_physical(&self, tol: f64) -> bool {
        self.hermiticity_defect <= tol && self.trace_defect <= tol && self.min_eigenvalue >= -tol
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        self.is_physical(tol) && self.idempotency_defect <= tol
    }
}

impl DensityMatrix {
    pub fn from_state(psi: &ComplexVector3) -> Self {
        DensityMatrix { matrix: psi.outer(psi) }
    }

    pub fn check(&self) -> DensityCheck {
        let m = self.matrix;
        let herm = (m + m.adjoint()) * 0.5;
        let min_eigenvalue = herm.eig_hermitian().map(|es| es.values[0]).unwrap_or(f64::NAN);
        DensityCheck {
            hermiticity_defect: m.hermiticity_defect(),
            trace_defect: (m.trace() - C64::from(1.0)).norm(),
            min_eigenvalue,
            idempotency_defect: (m * m - m).max_abs(),
        }
    }
}

/// `rho = (1 + sqrt(3) n.lambda) / 3` for a unit 8-vector `n`.
pub fn density_from_n(n: &AlgebraVector8) -> Result<DensityMatrix> {
    let norm = n.norm();
    if (norm - 1.0).abs() > 1e-10 || !norm.is_finite() {
        return Err(Error::NotUnitNorm { norm });
    }
    Ok(DensityMatrix { matrix: compose(1.0 / 3.0, &n.scale(SQRT3 / 3.0)) })
}

/// `|n.n - 1| <= tol` and `|n * n - n| <= tol`.
pub fn is_pure(n: &AlgebraVector8, tol: f64) -> bool {
    let idem = (n.star(n) - *n).norm();
    (n.dot(n) - 1.0).abs() <= tol && idem <= tol
}

/// Spectrum of a diagonal density matrix parameterized by two angles on the
/// sphere. Named apart from the Euler `theta`, `phi`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SphereSpectrum {
    pub theta_s: f64,
    pub phi_s: f64,
}

impl SphereSpectrum {
    /// `(cos^2 theta_s sin^2 phi_s, sin^2 theta_s sin^2 phi_s, cos^2 phi_s)`.
    pub fn weights(&self) -> [f64; 3] {
        let (st, ct) = self.theta_s.sin_cos();
        let (sp, cp) = self.phi_s.sin_cos();
        [ct * ct * sp * sp, st * st * sp * sp, cp * cp]
    }
}

pub fn diag_density(s: &SphereSpectrum) -> DensityMatrix {
    DensityMatrix { matrix: ComplexMatrix3::from_real_diag(s.weights()) }
}
