//! Schroedinger evolution `i d psi/ds = H(x(s/T)) psi` along slowly traversed
//! parameter loops, and extraction of the geometric part of the evolution.
//!
//! Integration is classic RK4 with per-step renormalization. The Hamiltonian
//! is shifted by a constant energy before integrating (the energy of the
//! initial state, or of the eigenspace in [`extract_geometric`]) and the
//! corresponding phase `e^{-i E T}` is restored exactly afterwards. For the
//! tracked eigenspace the shifted Hamiltonian vanishes on it, so the stepper
//! only has to resolve the slow geometric rotation and the small transitions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonabelian::{frame_vectors, hamiltonian, holonomy, HamiltonianParams, LevelSet, DEFAULT_SEGMENTS};
use crate::path::{ParameterPath, Point};
use crate::smallcomplex::{dispatch_dim, ComplexMatrix3, ComplexVector3, DynMatrix, C64};

/// Steps per unit of physical time used by [`Sweep::new`].
pub const STEPS_PER_TIME: f64 = 200.0;
pub const MIN_STEPS: usize = 100;
/// Accumulated norm drift that triggers [`Error::StepCountTooLow`].
pub const MAX_NORM_DRIFT: f64 = 1e-6;
/// Polar residual above which a run counts as non-adiabatic.
pub const RESIDUAL_LIMIT: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub path: ParameterPath,
    pub e1: f64,
    pub e3: f64,
    pub t_total: f64,
    pub steps: usize,
}

impl Sweep {
    /// Sweep with the default step count `max(100, ceil(200 T))`.
    pub fn new(path: ParameterPath, e1: f64, e3: f64, t_total: f64) -> Result<Self> {
        let steps = default_steps(t_total);
        Self::with_steps(path, e1, e3, t_total, steps)
    }

    pub fn with_steps(path: ParameterPath, e1: f64, e3: f64, t_total: f64, steps: usize) -> Result<Self> {
        if !(t_total > 0.0 && t_total.is_finite()) {
            return Err(Error::InvalidSweep(format!("total time must be positive, got {t_total}")));
        }
        if steps < MIN_STEPS {
            return Err(Error::InvalidSweep(format!("{steps} steps requested, at least {MIN_STEPS} required")));
        }
        if !(e1.is_finite() && e3.is_finite()) {
            return Err(Error::InvalidSweep("energies must be finite".into()));
        }
        Ok(Sweep { path, e1, e3, t_total, steps })
    }

    /// Same path, energies and steps-per-time at a different total time.
    pub fn retimed(&self, t_total: f64) -> Result<Self> {
        let rate = self.steps as f64 / self.t_total;
        let steps = ((rate * t_total).ceil() as usize).max(MIN_STEPS);
        Self::with_steps(self.path.clone(), self.e1, self.e3, t_total, steps)
    }

    fn params(&self, x: Point) -> HamiltonianParams {
        HamiltonianParams::new(self.e1, self.e3, x)
    }
}

pub fn default_steps(t_total: f64) -> usize {
    if t_total.is_finite() && t_total > 0.0 {
        ((STEPS_PER_TIME * t_total).ceil() as usize).max(MIN_STEPS)
    } else {
        MIN_STEPS
    }
}

/// Result of one propagation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Propagation {
    pub state: ComplexVector3,
    /// Sum over steps of `| |psi| - 1 |` before renormalization.
    pub norm_drift: f64,
}

/// `-i (H - shift) psi`.
fn rhs(h: &ComplexMatrix3, shift: f64, psi: &ComplexVector3) -> ComplexVector3 {
    let hpsi = h.mul_vec(psi) - *psi * shift;
    hpsi.scale(C64::new(0.0, -1.0))
}

/// Evolves `initial` with `H - shift`, then restores `e^{-i shift T}`.
fn propagate_shifted(sweep: &Sweep, initial: &ComplexVector3, shift: f64) -> Result<Propagation> {
    let mut psi = *initial;
    let mut drift = 0.0;
    let keyframes = sweep.path.keyframes();
    for (seg, n) in sweep.path.step_counts(sweep.steps).into_iter().enumerate() {
        let (k0, k1) = (keyframes[seg], keyframes[seg + 1]);
        let at = |s: f64| -> ComplexMatrix3 {
            let x: Point = std::array::from_fn(|c| k0.point[c] + s * (k1.point[c] - k0.point[c]));
            hamiltonian(&sweep.params(x))
        };
        // Physical step: the segment covers (k1.t - k0.t) T of time.
        let dt = (k1.t - k0.t) * sweep.t_total / n as f64;
        let mut h_start = at(0.0);
        for k in 0..n {
            let s0 = k as f64 / n as f64;
            let s1 = (k + 1) as f64 / n as f64;
            let h_mid = at(0.5 * (s0 + s1));
            let h_end = at(s1);
            let k1v = rhs(&h_start, shift, &psi);
            let k2v = rhs(&h_mid, shift, &(psi + k1v * (0.5 * dt)));
            let k3v = rhs(&h_mid, shift, &(psi + k2v * (0.5 * dt)));
            let k4v = rhs(&h_end, shift, &(psi + k3v * dt));
            psi = psi + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (dt / 6.0);
            let norm = psi.norm();
            drift += (norm - 1.0).abs();
            psi = psi * (1.0 / norm);
            h_start = h_end;
        }
    }
    if drift > MAX_NORM_DRIFT {
        return Err(Error::StepCountTooLow { drift });
    }
    let phase = C64::from_polar(1.0, -shift * sweep.t_total);
    Ok(Propagation { state: psi.scale(phase), norm_drift: drift })
}

/// `psi(T)` from `psi(0) = initial`, which must have unit norm.
pub fn propagate(sweep: &Sweep, initial: &ComplexVector3) -> Result<ComplexVector3> {
    propagate_with_drift(sweep, initial).map(|p| p.state)
}

/// [`propagate`] that also reports the accumulated norm drift.
pub fn propagate_with_drift(sweep: &Sweep, initial: &ComplexVector3) -> Result<Propagation> {
    let norm = initial.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnitNorm { norm });
    }
    let h0 = hamiltonian(&sweep.params(sweep.path.start()));
    let shift = initial.inner(&h0.mul_vec(initial)).re;
    propagate_shifted(sweep, initial, shift)
}

/// `-E T`: energies are constant along every sweep of the family.
pub fn dynamical_phase(energy: f64, t_total: f64) -> f64 {
    -energy * t_total
}

/// Phases extracted from a sweep on one eigenspace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseReport {
    pub levels: LevelSet,
    pub energy: f64,
    /// Overlap `W_ab = <v_a(0)|psi_b(T)>`, dynamical factor included.
    pub total: DynMatrix,
    pub dynamical_phase: f64,
    /// Nearest unitary to `W e^{i E T}`.
    pub geometric_part: DynMatrix,
    pub t_total: f64,
    pub steps: usize,
    /// `max |1 - sigma|` over the singular values of `W e^{i E T}`.
    pub residual: f64,
    pub norm_drift: f64,
}

impl PhaseReport {
    /// `arg` of the geometric factor for a single level.
    pub fn scalar_phase(&self) -> Option<f64> {
        (self.geometric_part.dim == 1).then(|| self.geometric_part.get(0, 0).arg())
    }

    pub fn is_adiabatic(&self) -> bool {
        self.residual <= RESIDUAL_LIMIT
    }
}

fn polar<const N: usize>(m: &DynMatrix) -> Result<(DynMatrix, f64)> {
    let (u, r) = m.to_fixed::<N>().polar_unitary()?;
    Ok((u.into(), r))
}

/// Evolves every frame vector of `levels`, forms the overlap matrix, removes
/// the dynamical factor and projects to the nearest unitary.
///
/// `levels` must be a whole eigenspace: `{1, 2}` (energy E1) or `{3}` (E3).
pub fn extract_geometric(sweep: &Sweep, levels: &LevelSet) -> Result<PhaseReport> {
    if !sweep.path.is_closed() {
        return Err(Error::PathNotClosed);
    }
    if sweep.e1 == sweep.e3 {
        return Err(Error::DegenerateSplit);
    }
    let start = sweep.path.start();
    let energy = levels.eigenspace_energy(&sweep.params(start))?;
    let frame = frame_vectors(start);
    let lv = levels.levels();
    let mut evolved = Vec::with_capacity(lv.len());
    let mut drift: f64 = 0.0;
    for &b in lv {
        let p = propagate_shifted(sweep, &frame[b - 1], energy)?;
        drift = drift.max(p.norm_drift);
        evolved.push(p.state);
    }
    let n = lv.len();
    let mut total = DynMatrix::zeros(n);
    let mut geometric = DynMatrix::zeros(n);
    let restore = C64::from_polar(1.0, energy * sweep.t_total);
    for (i, &a) in lv.iter().enumerate() {
        for (j, psi) in evolved.iter().enumerate() {
            let w = frame[a - 1].inner(psi);
            total.set(i, j, w);
            geometric.set(i, j, w * restore);
        }
    }
    let (geometric_part, residual) = dispatch_dim!(n, N => polar::<N>(&geometric)?);
    Ok(PhaseReport {
        levels: levels.clone(),
        energy,
        total,
        dynamical_phase: dynamical_phase(energy, sweep.t_total),
        geometric_part,
        t_total: sweep.t_total,
        steps: sweep.steps,
        residual,
        norm_drift: drift,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub t_total: f64,
    pub steps: usize,
    /// Operator-norm distance to the holonomy prediction.
    pub deviation: f64,
    pub residual: f64,
    pub report: PhaseReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub prediction: DynMatrix,
    pub prediction_segments: usize,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceStudy {
    /// Deviations never increase along the ladder.
    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].deviation <= w[0].deviation)
    }
}

/// Runs `template` retimed at each `T` of an ascending ladder and compares
/// each geometric part with the holonomy of the same loop. With `parallel`
/// the ladder entries run concurrently; row order is unchanged.
pub fn convergence_study(
    template: &Sweep,
    ladder: &[f64],
    levels: &LevelSet,
    parallel: bool,
) -> Result<ConvergenceStudy> {
    convergence_study_with(template, ladder, levels, DEFAULT_SEGMENTS, parallel)
}

/// [`convergence_study`] with an explicit step count for the holonomy prediction.
pub fn convergence_study_with(
    template: &Sweep,
    ladder: &[f64],
    levels: &LevelSet,
    segments: usize,
    parallel: bool,
) -> Result<ConvergenceStudy> {
    if ladder.is_empty() {
        return Err(Error::InvalidSweep("empty T ladder".into()));
    }
    if ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSweep("T ladder must be strictly ascending".into()));
    }
    let prediction = holonomy(&template.path, levels, segments)?;
    let run = |&t: &f64| -> Result<ConvergenceRow> {
        let sweep = template.retimed(t)?;
        let report = extract_geometric(&sweep, levels)?;
        Ok(ConvergenceRow {
            t_total: t,
            steps: sweep.steps,
            deviation: report.geometric_part.op_distance(&prediction.matrix),
            residual: report.residual,
            report,
        })
    };
    let rows: Result<Vec<_>> = if parallel {
        ladder.par_iter().map(run).collect()
    } else {
        ladder.iter().map(run).collect()
    };
    Ok(ConvergenceStudy { prediction: prediction.matrix, prediction_segments: prediction.segments, rows: rows? })
}
