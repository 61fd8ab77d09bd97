//! Abelian Berry connection, curvature and loop phase of the pure state
//! `psi(alpha, beta, gamma, theta)`.
//!
//! Sign convention: the connection is `A = -i <psi|d psi>` and the geometric
//! phase of a loop is the real number `oint A`, so that
//! `A = sin^2(theta) [cos(2 beta) d alpha + d gamma]` once the overall phase
//! `chi` is held fixed. Phases are not reduced mod `2 pi`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::{Coord, ParameterPath, Point};
use crate::smallcomplex::ComplexVector3;
use crate::state::{pure_state, PureStateCoords};

/// Default quadrature budget for a closed loop.
pub const DEFAULT_SAMPLES: usize = 1024;
/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-5;
/// Smallest accepted quadrature budget.
pub const MIN_SAMPLES: usize = 16;

/// Pullback `A_mu dx^mu / dt` for velocities `(alpha', beta', gamma', theta')`.
pub fn connection_closed(_alpha: f64, beta: f64, _gamma: f64, theta: f64, velocity: Point) -> f64 {
    let s2 = theta.sin().powi(2);
    s2 * (2.0 * beta).cos() * velocity[0] + s2 * velocity[2]
}

fn state_at(x: Point, chi: f64) -> ComplexVector3 {
    pure_state(&PureStateCoords::new(x[0], x[1], x[2], x[3]).with_phase(chi))
}

/// `Re(-i <psi(x)| d psi/ds>)` by central differences along the straight line
/// through `x` with direction `velocity`.
pub fn connection_fd_at(x: Point, velocity: Point, h: f64, chi: f64) -> f64 {
    let shifted = |s: f64| -> Point { std::array::from_fn(|c| x[c] + s * velocity[c]) };
    let psi = state_at(x, chi);
    let dpsi = (state_at(shifted(h), chi) - state_at(shifted(-h), chi)) * (1.0 / (2.0 * h));
    // -i <psi|dpsi> has real part Im<psi|dpsi>.
    psi.inner(&dpsi).im
}

fn check_stencil(t: f64, h: f64) -> Result<()> {
    if !(h > 0.0) || t - h < 0.0 || t + h > 1.0 {
        return Err(Error::StepOutOfRange { t, h });
    }
    Ok(())
}

/// Finite-difference connection at parameter `t` with `chi = 0`. At a keyframe
/// the stencil follows the segment that starts there.
pub fn connection_numeric(path: &ParameterPath, t: f64, h: f64) -> Result<f64> {
    connection_numeric_with_phase(path, t, h, 0.0)
}

/// As [`connection_numeric`] with the overall phase `chi` held at a fixed value.
pub fn connection_numeric_with_phase(path: &ParameterPath, t: f64, h: f64, chi: f64) -> Result<f64> {
    check_stencil(t, h)?;
    Ok(connection_fd_at(path.point(t), path.velocity(t), h, chi))
}

/// One Richardson level on top of [`connection_numeric`]: `(4 D(h/2) - D(h)) / 3`.
pub fn connection_numeric_richardson(path: &ParameterPath, t: f64, h: f64) -> Result<f64> {
    check_stencil(t, h)?;
    let (x, v) = (path.point(t), path.velocity(t));
    Ok(richardson(x, v, h, 0.0))
}

fn richardson(x: Point, v: Point, h: f64, chi: f64) -> f64 {
    (4.0 * connection_fd_at(x, v, 0.5 * h, chi) - connection_fd_at(x, v, h, chi)) / 3.0
}

/// Antisymmetric curvature coefficients `F_{mu nu}` so that
/// `F = sum_{mu < nu} F_{mu nu} dx^mu ^ dx^nu` on `(alpha, beta, gamma, theta)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoFormValue {
    pub components: [[f64; 4]; 4],
}

impl TwoFormValue {
    pub fn from_pairs(pairs: &[(Coord, Coord, f64)]) -> Self {
        let mut components = [[0.0; 4]; 4];
        for &(u, v, x) in pairs {
            components[u.index()][v.index()] = x;
            components[v.index()][u.index()] = -x;
        }
        TwoFormValue { components }
    }

    pub fn get(&self, u: Coord, v: Coord) -> f64 {
        self.components[u.index()][v.index()]
    }
}

/// `F = dA`: `F_{theta alpha} = sin 2theta cos 2beta`, `F_{theta gamma} = sin 2theta`,
/// `F_{beta alpha} = -2 sin^2 theta sin 2beta`, `F_{beta gamma} = 0`.
pub fn curvature(beta: f64, theta: f64) -> TwoFormValue {
    let sin_2t = (2.0 * theta).sin();
    let (sin_2b, cos_2b) = (2.0 * beta).sin_cos();
    TwoFormValue::from_pairs(&[
        (Coord::Theta, Coord::Alpha, sin_2t * cos_2b),
        (Coord::Theta, Coord::Gamma, sin_2t),
        (Coord::Beta, Coord::Alpha, -2.0 * theta.sin().powi(2) * sin_2b),
        (Coord::Beta, Coord::Gamma, 0.0),
    ])
}

/// `int [sin^2 theta cos 2beta d alpha + sin^2 theta d gamma]` along `path`.
/// For a closed path this is the adiabatic geometric phase.
pub fn geometric_phase(path: &ParameterPath, samples: usize) -> Result<f64> {
    if samples < MIN_SAMPLES {
        return Err(Error::PathTooShort { samples, min: MIN_SAMPLES });
    }
    Ok(path.integrate(samples, |x, v| connection_closed(x[0], x[1], x[2], x[3], v)).0)
}

/// Line integral of the finite-difference connection (Richardson-improved),
/// the numerical counterpart of [`geometric_phase`].
pub fn geometric_phase_numeric(path: &ParameterPath, samples: usize, h: f64, chi: f64) -> Result<f64> {
    if samples < MIN_SAMPLES {
        return Err(Error::PathTooShort { samples, min: MIN_SAMPLES });
    }
    Ok(path.integrate(samples, |x, v| richardson(x, v, h, chi)).0)
}

/// Line integral of `A` around the rectangle `[u0, u0 + side] x [v0, v0 + side]`
/// (counterclockwise in the `(u, v)` plane) against the Simpson surface
/// integral of `F_{uv}` over it. `samples` is the per-side resolution.
pub fn stokes_check(corner: Point, u: Coord, v: Coord, side: f64, samples: usize) -> Result<(f64, f64)> {
    if u == v {
        return Err(Error::UnsupportedPlane(u.to_string(), v.to_string()));
    }
    if !(side >= 0.0) {
        return Err(Error::InvalidPath(format!("rectangle side must be nonnegative, got {side}")));
    }
    let samples = samples.max(MIN_SAMPLES);
    let n = samples + samples % 2;
    let boundary = ParameterPath::rectangle(corner, u, v, side)?;
    let line = geometric_phase(&boundary, 4 * n)?;

    let h = side / n as f64;
    let weight = |j: usize| {
        if j == 0 || j == n {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let mut surface = 0.0;
    for i in 0..=n {
        for j in 0..=n {
            let mut x = corner;
            x[u.index()] += i as f64 * h;
            x[v.index()] += j as f64 * h;
            surface += weight(i) * weight(j) * curvature(x[1], x[3]).get(u, v);
        }
    }
    surface *= h * h / 9.0;
    Ok((line, surface))
}
