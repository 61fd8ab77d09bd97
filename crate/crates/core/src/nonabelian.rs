//! Doubly degenerate three-level Hamiltonians, their closed-form eigenframe,
//! the matrix-valued connection `A^{ab} = i <v_a| d v_b>` and path-ordered
//! holonomies `P exp(i oint A)`.
//!
//! The family is `H = U diag(E1, E1, E3) U^dagger` with
//! `U = D(-alpha, beta, -gamma, theta, 0, 0, 0, 0)`, the complex conjugate of
//! the coset representative. Its columns are the frame vectors
//!
//! ```text
//! v1 = ( e^{-i(a+g)} cos b cos t, -e^{i(a-g)} sin b cos t, -sin t )
//! v2 = ( e^{-i(a-g)} sin b,        e^{i(a+g)} cos b,        0     )
//! v3 = ( e^{-i(a+g)} cos b sin t, -e^{i(a-g)} sin b sin t,  cos t )
//! ```
//!
//! with `H v1 = E1 v1`, `H v2 = E1 v2`, `H v3 = E3 v3`.
//!
//! Level pairing: the closed form [`connection_a1`] is the connection of
//! `{v1}` alone and [`connection_a2`] is the 2x2 block on `{v2, v3}`, which
//! straddles the two eigenvalues. The block on the physically degenerate pair
//! `{v1, v2}` has different off-diagonal entries (a `cos theta` where `A2` has
//! `sin theta`, and an extra `e^{2i alpha}` structure); it is available through
//! [`frame_connection`] and [`connection_pullback`] with levels `{1, 2}`.
//!
//! Path ordering: later parameter values multiply on the left, and each step
//! uses the connection at the step midpoint, `exp(i A(t_mid) dt)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::{ParameterPath, Point};
use crate::smallcomplex::{dispatch_dim, CMatrix, ComplexMatrix2, ComplexMatrix3, ComplexVector3, DynMatrix, C64, I};

/// Smallest accepted number of holonomy steps.
pub const MIN_SEGMENTS: usize = 64;
/// Default number of holonomy steps.
pub const DEFAULT_SEGMENTS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianParams {
    pub e1: f64,
    pub e3: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub theta: f64,
}

impl HamiltonianParams {
    pub fn new(e1: f64, e3: f64, x: Point) -> Self {
        HamiltonianParams { e1, e3, alpha: x[0], beta: x[1], gamma: x[2], theta: x[3] }
    }

    pub fn point(&self) -> Point {
        [self.alpha, self.beta, self.gamma, self.theta]
    }

    /// Eigenvalue carried by frame vector `level` (1-based).
    pub fn level_energy(&self, level: usize) -> f64 {
        if level == 3 {
            self.e3
        } else {
            self.e1
        }
    }
}

fn e(phase: f64) -> C64 {
    C64::from_polar(1.0, phase)
}

/// `H(alpha, beta, gamma, theta)` entry by entry.
pub fn hamiltonian(p: &HamiltonianParams) -> ComplexMatrix3 {
    let (e1, e3) = (p.e1, p.e3);
    let (sb, cb) = p.beta.sin_cos();
    let (st, ct) = p.theta.sin_cos();
    let plus = p.alpha + p.gamma;
    let minus = p.alpha - p.gamma;
    let r = C64::from;

    let h11 = r(e1 * (cb * cb * ct * ct + sb * sb) + e3 * cb * cb * st * st);
    let h12 = e(-2.0 * p.alpha) * ((e1 - e3) * cb * sb * st * st);
    let h13 = e(-plus) * ((e3 - e1) * cb * st * ct);
    let h21 = e(2.0 * p.alpha) * ((e1 - e3) * cb * sb * st * st);
    let h22 = r(e1 * (sb * sb * ct * ct + cb * cb) + e3 * sb * sb * st * st);
    let h23 = e(minus) * ((e1 - e3) * sb * st * ct);
    let h31 = e(plus) * ((e3 - e1) * cb * st * ct);
    let h32 = e(-minus) * ((e1 - e3) * sb * st * ct);
    let h33 = r(e1 * st * st + e3 * ct * ct);
    ComplexMatrix3::from_rows([[h11, h12, h13], [h21, h22, h23], [h31, h32, h33]])
}

/// The three frame vectors at `(alpha, beta, gamma, theta)`.
pub fn frame_vectors(x: Point) -> [ComplexVector3; 3] {
    let [alpha, beta, gamma, theta] = x;
    let (sb, cb) = beta.sin_cos();
    let (st, ct) = theta.sin_cos();
    let plus = alpha + gamma;
    let minus = alpha - gamma;
    [
        ComplexVector3::new([e(-plus) * (cb * ct), -e(minus) * (sb * ct), C64::from(-st)]),
        ComplexVector3::new([e(-minus) * sb, e(plus) * cb, C64::from(0.0)]),
        ComplexVector3::new([e(-plus) * (cb * st), -e(minus) * (sb * st), C64::from(ct)]),
    ]
}

/// `d v_k / d x^mu`, indexed `[mu][k]` with `mu` over `(alpha, beta, gamma, theta)`.
pub fn frame_derivatives(x: Point) -> [[ComplexVector3; 3]; 4] {
    let [alpha, beta, gamma, theta] = x;
    let (sb, cb) = beta.sin_cos();
    let (st, ct) = theta.sin_cos();
    let ep = e(-(alpha + gamma));
    let em = e(alpha - gamma);
    let emm = e(-(alpha - gamma));
    let epp = e(alpha + gamma);
    let z = C64::from(0.0);
    let v = ComplexVector3::new;
    [
        [
            v([-I * ep * (cb * ct), -I * em * (sb * ct), z]),
            v([-I * emm * sb, I * epp * cb, z]),
            v([-I * ep * (cb * st), -I * em * (sb * st), z]),
        ],
        [
            v([-ep * (sb * ct), -em * (cb * ct), z]),
            v([emm * cb, -epp * sb, z]),
            v([-ep * (sb * st), -em * (cb * st), z]),
        ],
        [
            v([-I * ep * (cb * ct), I * em * (sb * ct), z]),
            v([I * emm * sb, I * epp * cb, z]),
            v([-I * ep * (cb * st), I * em * (sb * st), z]),
        ],
        [
            v([-ep * (cb * st), em * (sb * st), C64::from(-ct)]),
            v([z, z, z]),
            v([ep * (cb * ct), -em * (sb * ct), C64::from(-st)]),
        ],
    ]
}

/// The closed-form eigenframe of [`hamiltonian`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenFrame {
    pub vectors: [ComplexVector3; 3],
}

impl EigenFrame {
    /// Frame vectors as columns.
    pub fn matrix(&self) -> ComplexMatrix3 {
        ComplexMatrix3::from_columns(self.vectors)
    }

    /// Gram matrix `<v_j|v_k>`.
    pub fn gram(&self) -> ComplexMatrix3 {
        let m = self.matrix();
        m.adjoint() * m
    }
}

pub fn eigenframe(p: &HamiltonianParams) -> Result<EigenFrame> {
    if p.e1 == p.e3 {
        return Err(Error::DegenerateSplit);
    }
    Ok(EigenFrame { vectors: frame_vectors(p.point()) })
}

/// Subset of the frame labels `{1, 2, 3}`, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelSet(Vec<usize>);

impl LevelSet {
    pub fn new(levels: &[usize]) -> Result<Self> {
        let mut v = levels.to_vec();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return Err(Error::InvalidLevels("empty level set".into()));
        }
        if v.iter().any(|&l| !(1..=3).contains(&l)) {
            return Err(Error::InvalidLevels(format!("levels must lie in 1..=3, got {levels:?}")));
        }
        Ok(LevelSet(v))
    }

    pub fn levels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The common eigenvalue of the levels, which must form a complete
    /// eigenspace: `{1, 2}` (energy E1) or `{3}` (energy E3).
    pub fn eigenspace_energy(&self, p: &HamiltonianParams) -> Result<f64> {
        let energies: Vec<f64> = self.0.iter().map(|&l| p.level_energy(l)).collect();
        if energies.iter().any(|&en| en != energies[0]) {
            return Err(Error::MixedLevels(self.0.clone()));
        }
        let full = if self.0.contains(&3) { vec![3] } else { vec![1, 2] };
        if self.0 != full {
            return Err(Error::PartialEigenspace(self.0.clone()));
        }
        Ok(energies[0])
    }
}

impl fmt::Display for LevelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for LevelSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('{').trim_end_matches('}');
        let levels = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::InvalidLevels(format!("bad level `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        LevelSet::new(&levels)
    }
}

/// `A1 = cos 2beta cos^2 theta d alpha + cos^2 theta d gamma`, contracted with
/// `(alpha', gamma')`.
pub fn connection_a1(beta: f64, theta: f64, velocity: (f64, f64)) -> f64 {
    let c2 = theta.cos().powi(2);
    (2.0 * beta).cos() * c2 * velocity.0 + c2 * velocity.1
}

/// The 2x2 matrix `A2` contracted with `(alpha', beta', gamma')`.
pub fn connection_a2(_alpha: f64, beta: f64, gamma: f64, theta: f64, velocity: (f64, f64, f64)) -> ComplexMatrix2 {
    let (da, db, dg) = velocity;
    let st = theta.sin();
    let (sin_2b, cos_2b) = (2.0 * beta).sin_cos();
    let a11 = C64::from(-cos_2b * da - dg);
    let a12 = e(-2.0 * gamma) * (C64::from(sin_2b * st * da) - I * (st * db));
    let a21 = e(2.0 * gamma) * (C64::from(sin_2b * st * da) + I * (st * db));
    let a22 = C64::from(cos_2b * st * st * da + st * st * dg);
    ComplexMatrix2::from_rows([[a11, a12], [a21, a22]])
}

/// Full 3x3 frame connection `i V^dagger dV/dt` at `x` moving with `velocity`.
pub fn frame_connection(x: Point, velocity: Point) -> ComplexMatrix3 {
    let v = ComplexMatrix3::from_columns(frame_vectors(x));
    let d = frame_derivatives(x);
    let mut dv = ComplexMatrix3::zeros();
    for (mu, rate) in velocity.iter().enumerate() {
        if *rate != 0.0 {
            dv += ComplexMatrix3::from_columns(d[mu]) * *rate;
        }
    }
    (v.adjoint() * dv).scale(I)
}

fn block<const N: usize>(m: &ComplexMatrix3, levels: &[usize]) -> CMatrix<N> {
    let mut out = CMatrix::<N>::zeros();
    for (i, &a) in levels.iter().enumerate() {
        for (j, &b) in levels.iter().enumerate() {
            out.0[i][j] = m.0[a - 1][b - 1];
        }
    }
    out
}

fn pullback_fixed<const N: usize>(levels: &[usize], x: Point, v: Point) -> CMatrix<N> {
    match levels {
        [1] => {
            let mut m = CMatrix::<N>::zeros();
            m.0[0][0] = C64::from(connection_a1(x[1], x[3], (v[0], v[2])));
            m
        }
        [2, 3] => {
            let a2 = connection_a2(x[0], x[1], x[2], x[3], (v[0], v[1], v[2]));
            let mut m = CMatrix::<N>::zeros();
            for i in 0..2 {
                for j in 0..2 {
                    m.0[i][j] = a2.0[i][j];
                }
            }
            m
        }
        _ => block::<N>(&frame_connection(x, v), levels),
    }
}

/// Closed-form connection on `levels` at `x` moving with `velocity`: `A1` for
/// `{1}`, `A2` for `{2, 3}`, and the analytic frame block otherwise.
pub fn connection_pullback(levels: &LevelSet, x: Point, velocity: Point) -> DynMatrix {
    dispatch_dim!(levels.len(), N => pullback_fixed::<N>(levels.levels(), x, velocity).into())
}

/// `i <v_a(t)| (v_b(t+h) - v_b(t-h)) / 2h>` on `levels`, with the stencil
/// following the segment that contains `t`.
pub fn connection_numeric_frame(path: &ParameterPath, levels: &LevelSet, t: f64, h: f64) -> Result<DynMatrix> {
    if !(h > 0.0) || t - h < 0.0 || t + h > 1.0 {
        return Err(Error::StepOutOfRange { t, h });
    }
    let (x, v) = (path.point(t), path.velocity(t));
    let at = |s: f64| frame_vectors(std::array::from_fn(|c| x[c] + s * v[c]));
    let (f0, fp, fm) = (frame_vectors(x), at(h), at(-h));
    let n = levels.len();
    let mut out = DynMatrix::zeros(n);
    for (i, &a) in levels.levels().iter().enumerate() {
        for (j, &b) in levels.levels().iter().enumerate() {
            let db = (fp[b - 1] - fm[b - 1]) * (1.0 / (2.0 * h));
            out.set(i, j, I * f0[a - 1].inner(&db));
        }
    }
    Ok(out)
}

fn hermitize<const N: usize>(m: &CMatrix<N>) -> CMatrix<N> {
    (*m + m.adjoint()) * 0.5
}

/// `prod exp(i A(t_mid) dt)` over `steps` midpoint steps, later steps on the
/// left. Steps are distributed over keyframe segments in proportion to their
/// length so no step straddles a keyframe. `connection(t)` returns the
/// Hermitian pullback `A_mu dx^mu/dt` at parameter `t`.
pub fn path_ordered_exp<const N: usize>(
    path: &ParameterPath,
    steps: usize,
    connection: impl Fn(f64) -> CMatrix<N>,
) -> (CMatrix<N>, usize) {
    let mut w = CMatrix::<N>::identity();
    let mut used = 0;
    for ((t0, t1), n) in path.segments().zip(path.step_counts(steps)) {
        let dt = (t1 - t0) / n as f64;
        for k in 0..n {
            let t_mid = t0 + (k as f64 + 0.5) * dt;
            let gen = hermitize(&connection(t_mid)).scale(I * dt);
            let step = gen.expm_skew_hermitian().expect("i * Hermitian * dt is skew-Hermitian");
            w = step * w;
        }
        used += n;
    }
    (w, used)
}

/// Loop holonomy on a level set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Holonomy {
    pub matrix: DynMatrix,
    pub levels: LevelSet,
    pub path: ParameterPath,
    pub segments: usize,
}

impl Holonomy {
    pub fn unitarity_residual(&self) -> f64 {
        self.matrix.unitarity_defect()
    }
}

/// `P exp(i oint A)` around a closed path using the closed-form connection.
pub fn holonomy(path: &ParameterPath, levels: &LevelSet, segments: usize) -> Result<Holonomy> {
    if !path.is_closed() {
        return Err(Error::PathNotClosed);
    }
    if segments < MIN_SEGMENTS {
        return Err(Error::TooFewSegments { segments, min: MIN_SEGMENTS });
    }
    let (matrix, used) = transport(path, levels, segments);
    Ok(Holonomy { matrix, levels: levels.clone(), path: path.clone(), segments: used })
}

/// Ordered transport along any path, open or closed, with no step minimum.
/// Returns the matrix and the number of steps actually composed.
pub fn transport(path: &ParameterPath, levels: &LevelSet, steps: usize) -> (DynMatrix, usize) {
    let lv = levels.levels();
    dispatch_dim!(levels.len(), N => {
        let (w, used) = path_ordered_exp::<N>(path, steps, |t| {
            pullback_fixed::<N>(lv, path.point(t), path.velocity(t))
        });
        (w.into(), used)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{d_matrix, EulerAngles};
    use crate::path::Coord;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI, TAU};

    fn random_point(rng: &mut ChaCha8Rng) -> Point {
        [
            rng.gen_range(0.0..PI),
            rng.gen_range(0.0..FRAC_PI_2),
            rng.gen_range(0.0..PI),
            rng.gen_range(0.0..FRAC_PI_2),
        ]
    }

    /// `U H_D U^dagger` with `U = D(-alpha, beta, -gamma, theta)`.
    fn conjugation_oracle(p: &HamiltonianParams) -> ComplexMatrix3 {
        let u = d_matrix(&EulerAngles::coset(-p.alpha, p.beta, -p.gamma, p.theta));
        u * ComplexMatrix3::from_real_diag([p.e1, p.e1, p.e3]) * u.adjoint()
    }

    #[test]
    fn hamiltonian_matches_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let p = HamiltonianParams::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), random_point(&mut rng));
            let h = hamiltonian(&p);
            assert!((h - conjugation_oracle(&p)).max_abs() <= 1e-12);
            assert!(h.is_hermitian(1e-14));
            let mut want = [p.e1, p.e1, p.e3];
            want.sort_by(f64::total_cmp);
            let es = h.eig_hermitian().unwrap();
            for k in 0..3 {
                assert!((es.values[k] - want[k]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn hamiltonian_special_cases() {
        let p = HamiltonianParams::new(0.5, 2.0, [0.3, 1.1, 0.8, 0.0]);
        let fixture = conjugation_oracle(&p);
        assert!((fixture - ComplexMatrix3::from_real_diag([0.5, 0.5, 2.0])).max_abs() < 1e-15);
        assert!((hamiltonian(&p) - fixture).max_abs() < 1e-15);
        let p = HamiltonianParams::new(1.7, 1.7, [0.3, 1.1, 0.8, 0.4]);
        assert!((hamiltonian(&p) - ComplexMatrix3::identity() * 1.7).max_abs() < 1e-15);
    }

    #[test]
    fn printed_h33_is_not_isospectral() {
        // With H33 = E1 cos^2 + E3 sin^2 the trace is off by (E3 - E1) cos 2theta.
        let p = HamiltonianParams::new(0.0, 1.0, [0.2, 0.5, 0.9, 0.4]);
        let mut h = hamiltonian(&p);
        h.0[2][2] = C64::from(p.e1 * p.theta.cos().powi(2) + p.e3 * p.theta.sin().powi(2));
        let expected = p.e1 * 2.0 + p.e3;
        assert!((h.trace().re - expected).abs() > 0.5);
    }

    #[test]
    fn frame_is_conjugate_coset_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..50 {
            let x = random_point(&mut rng);
            let u = d_matrix(&EulerAngles::coset(x[0], x[1], x[2], x[3])).conj();
            let v = ComplexMatrix3::from_columns(frame_vectors(x));
            assert!((u - v).max_abs() < 1e-15);
        }
    }

    #[test]
    fn eigenframe_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..100 {
            let p = HamiltonianParams::new(rng.gen_range(-2.0..0.0), rng.gen_range(0.5..3.0), random_point(&mut rng));
            let frame = eigenframe(&p).unwrap();
            assert!((frame.gram() - ComplexMatrix3::identity()).max_abs() <= 1e-13);
            let h = hamiltonian(&p);
            for k in 0..3 {
                let r = h.mul_vec(&frame.vectors[k]) - frame.vectors[k] * p.level_energy(k + 1);
                assert!(r.norm() <= 1e-12);
            }
            // Span equivalence with the numerical eigensolver, via projectors.
            let es = h.eig_hermitian().unwrap();
            let numeric_e1 = es.vectors[0].outer(&es.vectors[0]) + es.vectors[1].outer(&es.vectors[1]);
            let closed_e1 = frame.vectors[0].outer(&frame.vectors[0]) + frame.vectors[1].outer(&frame.vectors[1]);
            assert!((numeric_e1 - closed_e1).max_abs() <= 1e-10);
        }
        let p = HamiltonianParams::new(1.0, 1.0, [0.0; 4]);
        assert_eq!(eigenframe(&p), Err(Error::DegenerateSplit));
    }

    #[test]
    fn eigenframe_at_theta_zero() {
        let (a, b, g) = (0.4, 0.7, 1.9);
        let f = frame_vectors([a, b, g, 0.0]);
        let z = C64::from(0.0);
        let v1 = ComplexVector3::new([e(-(a + g)) * b.cos(), -e(a - g) * b.sin(), z]);
        let v2 = ComplexVector3::new([e(-(a - g)) * b.sin(), e(a + g) * b.cos(), z]);
        assert!((f[0] - v1).max_abs() < 1e-16);
        assert!((f[1] - v2).max_abs() < 1e-16);
        assert!((f[2] - ComplexVector3::basis(2)).max_abs() < 1e-16);
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        let x = [0.3, 0.8, 1.4, 0.6];
        let d = frame_derivatives(x);
        let h = 1e-6;
        for mu in 0..4 {
            let (mut xp, mut xm) = (x, x);
            xp[mu] += h;
            xm[mu] -= h;
            let (fp, fm) = (frame_vectors(xp), frame_vectors(xm));
            for k in 0..3 {
                let fd = (fp[k] - fm[k]) * (1.0 / (2.0 * h));
                assert!((fd - d[mu][k]).max_abs() < 1e-9, "mu={mu} k={k}");
            }
        }
    }

    #[test]
    fn a1_examples() {
        assert_eq!(connection_a1(0.0, 0.0, (1.0, 0.0)), 1.0);
        assert!(connection_a1(std::f64::consts::FRAC_PI_4, 0.3, (1.0, 0.0)).abs() < 1e-16);
        assert!(connection_a1(0.3, FRAC_PI_2, (0.7, 1.3)).abs() < 1e-16);
    }

    #[test]
    fn a2_examples() {
        let m = connection_a2(0.2, 0.0, 0.5, 0.0, (1.0, 0.0, 0.0));
        assert!((m - ComplexMatrix2::from_real_diag([-1.0, 0.0])).max_abs() < 1e-16);
        let th = 0.8;
        let m = connection_a2(0.2, 0.6, 0.5, th, (0.0, 0.0, 1.0));
        assert!((m - ComplexMatrix2::from_real_diag([-1.0, th.sin().powi(2)])).max_abs() < 1e-16);
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..100 {
            let x = random_point(&mut rng);
            let v = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let m = connection_a2(x[0], x[1], x[2], x[3], v);
            assert!((m.0[1][0] - m.0[0][1].conj()).norm() < 1e-15);
            assert!(m.is_hermitian(1e-12));
        }
    }

    #[test]
    fn closed_forms_are_frame_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..100 {
            let x = random_point(&mut rng);
            let v: Point = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
            let full = frame_connection(x, v);
            assert!(full.is_hermitian(1e-12));
            let a1 = connection_a1(x[1], x[3], (v[0], v[2]));
            assert!((full.0[0][0] - C64::from(a1)).norm() < 1e-14);
            let a2 = connection_a2(x[0], x[1], x[2], x[3], (v[0], v[1], v[2]));
            assert!((block::<2>(&full, &[2, 3]) - a2).max_abs() < 1e-14);
        }
    }

    #[test]
    fn numeric_frame_connection() {
        let path = ParameterPath::from_points(&[[0.1, 0.4, 0.2, 0.3], [1.3, 0.9, -0.6, 1.1]], false).unwrap();
        let v = path.velocity(0.5);
        let x = path.point(0.4);
        let l1 = LevelSet::new(&[1]).unwrap();
        let n1 = connection_numeric_frame(&path, &l1, 0.4, 1e-5).unwrap();
        assert!((n1.get(0, 0) - C64::from(connection_a1(x[1], x[3], (v[0], v[2])))).norm() < 1e-8);
        let l23 = LevelSet::new(&[2, 3]).unwrap();
        let n23 = connection_numeric_frame(&path, &l23, 0.4, 1e-5).unwrap();
        let a2: DynMatrix = connection_a2(x[0], x[1], x[2], x[3], (v[0], v[1], v[2])).into();
        assert!(n23.sub(&a2).max_abs() < 1e-8);
        let still = ParameterPath::constant([0.3, 0.2, 0.1, 0.9]);
        let z = connection_numeric_frame(&still, &l23, 0.5, 1e-5).unwrap();
        assert_eq!(z.max_abs(), 0.0);
        assert!(connection_numeric_frame(&path, &l1, 1.0, 1e-5).is_err());
    }

    #[test]
    fn level_sets() {
        let l: LevelSet = "{2, 3}".parse().unwrap();
        assert_eq!(l.levels(), &[2, 3]);
        assert_eq!(l.to_string(), "{2,3}");
        assert_eq!("3,1".parse::<LevelSet>().unwrap().levels(), &[1, 3]);
        assert!("".parse::<LevelSet>().is_err());
        assert!("4".parse::<LevelSet>().is_err());
        let p = HamiltonianParams::new(0.0, 5.0, [0.0; 4]);
        assert_eq!(LevelSet::new(&[1, 2]).unwrap().eigenspace_energy(&p), Ok(0.0));
        assert_eq!(LevelSet::new(&[3]).unwrap().eigenspace_energy(&p), Ok(5.0));
        assert!(matches!(LevelSet::new(&[2, 3]).unwrap().eigenspace_energy(&p), Err(Error::MixedLevels(_))));
        assert!(matches!(LevelSet::new(&[1]).unwrap().eigenspace_energy(&p), Err(Error::PartialEigenspace(_))));
    }

    #[test]
    fn holonomy_examples() {
        let l1 = LevelSet::new(&[1]).unwrap();
        let circle = ParameterPath::coordinate_circle(Coord::Alpha, [0.0, FRAC_PI_6, 0.0, 0.0], 1).unwrap();
        let w = holonomy(&circle, &l1, DEFAULT_SEGMENTS).unwrap();
        assert!((w.matrix.get(0, 0) - C64::from(-1.0)).norm() < 1e-12);

        let l23 = LevelSet::new(&[2, 3]).unwrap();
        let circle = ParameterPath::coordinate_circle(Coord::Alpha, [0.0, 0.0, 0.0, 0.0], 1).unwrap();
        let w = holonomy(&circle, &l23, DEFAULT_SEGMENTS).unwrap();
        assert!(w.matrix.sub(&DynMatrix::identity(2)).max_abs() < 1e-12);

        let (b, g, t) = (0.5, 0.9, FRAC_PI_3);
        let circle = ParameterPath::coordinate_circle(Coord::Alpha, [0.0, b, g, t], 1).unwrap();
        let w = holonomy(&circle, &l23, DEFAULT_SEGMENTS).unwrap();
        let m = connection_a2(0.0, b, g, t, (TAU, 0.0, 0.0));
        let exact: DynMatrix = m.scale(I).expm_skew_hermitian().unwrap().into();
        assert!(w.matrix.sub(&exact).max_abs() < 1e-9);
        assert!(w.unitarity_residual() < 1e-12);

        let open = ParameterPath::from_points(&[[0.0; 4], [1.0, 0.0, 0.0, 0.0]], false).unwrap();
        assert_eq!(holonomy(&open, &l1, 128), Err(Error::PathNotClosed));
        assert!(matches!(holonomy(&circle, &l1, 32), Err(Error::TooFewSegments { .. })));
    }
}
