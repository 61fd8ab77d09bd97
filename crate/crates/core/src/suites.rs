//! Seeded invariant suites behind `su3phase verify` and the acceptance tests.
//!
//! Each suite draws its random inputs from a ChaCha8 stream seeded by the
//! user seed and the suite name, so results do not depend on which other
//! suites run or in which order.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::{geometric_phase, geometric_phase_numeric, stokes_check, DEFAULT_STEP};
use crate::adiabatic::{convergence_study, Sweep, RESIDUAL_LIMIT};
use crate::error::{Error, Result};
use crate::euler::{adjoint_rep, coset_project, d_matrix, EulerAngles};
use crate::gellmann::{d_tensor, gellmann, AlgebraVector8};
use crate::nonabelian::{
    connection_a2, connection_numeric_frame, connection_pullback, frame_vectors, holonomy, path_ordered_exp,
    LevelSet, DEFAULT_SEGMENTS,
};
use crate::path::{Coord, ParameterPath, Point};
use crate::report::{Check, Value};
use crate::smallcomplex::{CMatrix, ComplexMatrix2, ComplexMatrix3, ComplexVector3, DynMatrix, C64, I};
use crate::state::{density_from_n, n_from_state, n_vector, pure_state, DensityMatrix, PureStateCoords};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Algebra,
    Purity,
    Adjoint,
    Abelian,
    Stokes,
    Frame,
    Holonomy,
    Gauge,
    Adiabatic,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Algebra,
        Suite::Purity,
        Suite::Adjoint,
        Suite::Abelian,
        Suite::Stokes,
        Suite::Frame,
        Suite::Holonomy,
        Suite::Gauge,
        Suite::Adiabatic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Purity => "purity",
            Suite::Adjoint => "adjoint",
            Suite::Abelian => "abelian",
            Suite::Stokes => "stokes",
            Suite::Frame => "frame",
            Suite::Holonomy => "holonomy",
            Suite::Gauge => "gauge",
            Suite::Adiabatic => "adiabatic",
        }
    }

    /// Parses a selector: one suite name or `all`.
    pub fn parse_selector(s: &str) -> std::result::Result<Vec<Suite>, String> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        s.parse().map(|suite| vec![suite])
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
            format!("unknown suite `{s}`; expected all, {}", names.join(", "))
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Replaces every upper-bound tolerance when set.
    pub tol: Option<f64>,
    /// Run ladder entries concurrently (output unchanged).
    pub parallel: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: DEFAULT_SEED, tol: None, parallel: false }
    }
}

impl SuiteConfig {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn rng(&self, suite: Suite) -> ChaCha8Rng {
        let salt = suite.name().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        ChaCha8Rng::seed_from_u64(self.seed ^ salt)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub outputs: BTreeMap<String, Value>,
}

impl SuiteResult {
    fn new(suite: Suite) -> Self {
        SuiteResult { suite, checks: Vec::new(), outputs: BTreeMap::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn out(&mut self, key: &str, v: impl Into<Value>) {
        self.outputs.insert(key.to_string(), v.into());
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteResult> {
    match suite {
        Suite::Algebra => algebra(cfg),
        Suite::Purity => purity(cfg),
        Suite::Adjoint => adjoint(cfg),
        Suite::Abelian => abelian(cfg),
        Suite::Stokes => stokes(cfg),
        Suite::Frame => frame(cfg),
        Suite::Holonomy => holonomy_suite(cfg),
        Suite::Gauge => gauge(cfg),
        Suite::Adiabatic => adiabatic(cfg),
    }
}

fn random_coset(rng: &mut ChaCha8Rng) -> Point {
    [rng.gen_range(0.0..TAU), rng.gen_range(0.0..PI), rng.gen_range(0.0..TAU), rng.gen_range(0.0..PI)]
}

fn random_chart(rng: &mut ChaCha8Rng) -> Point {
    [rng.gen_range(0.0..PI), rng.gen_range(0.0..FRAC_PI_2), rng.gen_range(0.0..PI), rng.gen_range(0.0..FRAC_PI_2)]
}

/// Anticommutator identity over 64 pairs and the 512-triple trace oracle.
fn algebra(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let mut r = SuiteResult::new(Suite::Algebra);
    let lam: Vec<ComplexMatrix3> = (1..=8).map(|k| gellmann(k).unwrap()).collect();
    let mut anti = 0.0f64;
    for i in 0..8 {
        for j in 0..8 {
            let lhs = lam[i].anticommutator(&lam[j]);
            let mut rhs = if i == j { ComplexMatrix3::identity() * (4.0 / 3.0) } else { ComplexMatrix3::zeros() };
            for k in 0..8 {
                rhs += lam[k] * (2.0 * d_tensor(i + 1, j + 1, k + 1)?);
            }
            anti = anti.max((lhs - rhs).max_abs());
        }
    }
    let mut trace = 0.0f64;
    for i in 0..8 {
        for j in 0..8 {
            let anti_ij = lam[i].anticommutator(&lam[j]);
            for k in 0..8 {
                let oracle = 0.25 * (anti_ij * lam[k]).trace();
                trace = trace.max((oracle - C64::from(d_tensor(i + 1, j + 1, k + 1)?)).norm());
            }
        }
    }
    r.checks.push(Check::at_most("anticommutator identity, 64 pairs", anti, cfg.tol(1e-14)));
    r.checks.push(Check::at_most("d-tensor trace oracle, 512 triples", trace, cfg.tol(1e-14)));
    r.out("pairs", 64usize);
    r.out("triples", 512usize);
    Ok(r)
}

/// Pure-state n-vector identities and agreement of three density routes.
fn purity(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let mut r = SuiteResult::new(Suite::Purity);
    let mut rng = cfg.rng(Suite::Purity);
    let (mut imag, mut norm, mut star, mut routes) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let lam: Vec<ComplexMatrix3> = (1..=8).map(|k| gellmann(k).unwrap()).collect();
    for _ in 0..1000 {
        let [a, b, g, t] = random_coset(&mut rng);
        let chi = rng.gen_range(0.0..TAU);
        let psi = pure_state(&PureStateCoords::new(a, b, g, t).with_phase(chi));
        let n = n_vector(a, b, g, t);
        for l in &lam {
            imag = imag.max(psi.inner(&l.mul_vec(&psi)).im.abs());
        }
        norm = norm.max((n.dot(&n) - 1.0).abs());
        star = star.max((n.star(&n) - n).max_abs());

        let outer = DensityMatrix::from_state(&psi).matrix;
        let stab = EulerAngles { alpha: a, beta: b, gamma: g, theta: t, ..random_stabilizer(&mut rng) };
        let coset = coset_project(&d_matrix(&stab))?;
        let algebra = density_from_n(&n)?.matrix;
        let from_state = density_from_n(&n_from_state(&psi))?.matrix;
        routes = routes
            .max((outer - coset).max_abs())
            .max((outer - algebra).max_abs())
            .max((outer - from_state).max_abs());
    }
    r.checks.push(Check::at_most("n real (max |Im psi^dagger lambda psi|)", imag, cfg.tol(1e-9)));
    r.checks.push(Check::at_most("n . n = 1", norm, cfg.tol(1e-9)));
    r.checks.push(Check::at_most("n star n = n", star, cfg.tol(1e-9)));
    r.checks.push(Check::at_most("density routes agree (outer, coset, algebra)", routes, cfg.tol(1e-12)));
    r.out("samples", 1000usize);
    Ok(r)
}

fn random_stabilizer(rng: &mut ChaCha8Rng) -> EulerAngles {
    EulerAngles::stabilizer(rng.gen_range(0.0..TAU), rng.gen_range(0.0..PI), rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU))
}

/// `R_8j = -n_j` for full Euler angle sets.
fn adjoint(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let mut r = SuiteResult::new(Suite::Adjoint);
    let mut rng = cfg.rng(Suite::Adjoint);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let [a, b, g, t] = random_coset(&mut rng);
        let angles = EulerAngles { alpha: a, beta: b, gamma: g, theta: t, ..random_stabilizer(&mut rng) };
        let adj = adjoint_rep(&d_matrix(&angles))?;
        let row: AlgebraVector8 = adj.row(8);
        worst = worst.max((row + n_vector(a, b, g, t)).max_abs());
    }
    r.checks.push(Check::at_most("R_8j = -n_j, 200 angle sets", worst, cfg.tol(1e-12)));
    Ok(r)
}

/// Closed-form loop phases by quadrature and by finite differences.
fn abelian(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let mut r = SuiteResult::new(Suite::Abelian);
    let samples = 1024;
    let cases = [
        ("alpha circle, beta = pi/6, theta = pi/2", Coord::Alpha, [0.0, FRAC_PI_6, 0.0, FRAC_PI_2]),
        ("gamma circle, theta = pi/4", Coord::Gamma, [0.0, 0.0, 0.0, FRAC_PI_4]),
    ];
    for (label, coord, center) in cases {
        let path = ParameterPath::coordinate_circle(coord, center, 1)?;
        let quad = geometric_phase(&path, samples)?;
        let fd = geometric_phase_numeric(&path, samples, DEFAULT_STEP, 0.0)?;
        r.checks.push(Check::at_most(format!("{label}: quadrature - pi"), (quad - PI).abs(), cfg.tol(1e-9)));
        r.checks.push(Check::at_most(format!("{label}: finite differences - pi"), (fd - PI).abs(), cfg.tol(1e-9)));
        r.out(&format!("{} phase", coord.name()), quad);
    }
    r.out("samples", samples);
    Ok(r)
}

/// Line integral vs curvature flux on small rectangles in every plane.
fn stokes(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let mut r = SuiteResult::new(Suite::Stokes);
    let mut rng = cfg.rng(Suite::Stokes);
    let side = 0.05;
    let mut overall = 0.0f64;
    for (i, &u) in Coord::ALL.iter().enumerate() {
        for &v in &Coord::ALL[i + 1..] {
            let mut worst = 0.0f64;
            for _ in 0..50 {
                let corner = random_chart(&mut rng);
                let (line, surface) = stokes_check(corner, u, v, side, 64)?;
                worst = worst.max((line - surface).abs());
            }
            overall = overall.max(worst);
            r.checks.push(Check::at_most(format!("|line - surface|, ({u}, {v}) plane, 50 rectangles"), worst, cfg.tol(1e-6)));
        }
    }
    r.out("max |line - surface|", overall);
    r.out("side", side);
    Ok(r)
}

/// Finite-difference frame connection against `A1`, `A2`, and the pairing check.
fn frame(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let mut r = SuiteResult::new(Suite::Frame);
    let mut rng = cfg.rng(Suite::Frame);
    let h = 1e-5;
    let l1 = LevelSet::new(&[1])?;
    let l23 = LevelSet::new(&[2, 3])?;
    let l12 = LevelSet::new(&[1, 2])?;
    let (mut e1, mut e23) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let path = ParameterPath::from_points(&[random_chart(&mut rng), random_chart(&mut rng)], false)?;
        for _ in 0..5 {
            let t = rng.gen_range(0.05..0.95);
            let (x, v) = (path.point(t), path.velocity(t));
            e1 = e1.max(connection_numeric_frame(&path, &l1, t, h)?.sub(&connection_pullback(&l1, x, v)).max_abs());
            e23 = e23.max(connection_numeric_frame(&path, &l23, t, h)?.sub(&connection_pullback(&l23, x, v)).max_abs());
        }
    }
    r.checks.push(Check::at_most("FD connection vs A1 on {1}, 20 paths", e1, cfg.tol(1e-8)));
    r.checks.push(Check::at_most("FD connection vs A2 on {2,3}, 20 paths", e23, cfg.tol(1e-8)));

    // Generic point: the physically degenerate pair does not reproduce A2.
    let x0 = [0.4, 0.7, 1.1, 0.5];
    let x1 = [0.9, 1.0, 0.6, 0.8];
    let path = ParameterPath::from_points(&[x0, x1], false)?;
    let (x, v) = (path.point(0.5), path.velocity(0.5));
    let numeric = connection_numeric_frame(&path, &l12, 0.5, h)?;
    let a2 = connection_a2(x[0], x[1], x[2], x[3], (v[0], v[1], v[2]));
    let mismatch = (numeric.get(0, 1) - a2.0[0][1]).norm();
    r.checks.push(Check::exceeds("{1,2} off-diagonal differs from A2", mismatch, 1e-3));
    r.out("{1,2} numeric off-diagonal", Value::complex(numeric.get(0, 1)));
    r.out("A2 off-diagonal", Value::complex(a2.0[0][1]));
    r.out("step", h);
    Ok(r)
}

fn random_loop(rng: &mut ChaCha8Rng, vertices: usize) -> Result<ParameterPath> {
    let mut pts: Vec<Point> = (0..vertices).map(|_| random_chart(rng)).collect();
    pts.push(pts[0]);
    ParameterPath::from_points(&pts, true)
}

fn distance(a: &DynMatrix, b: &DynMatrix) -> f64 {
    a.op_distance(b)
}

/// Unitarity, constant-connection loops and second-order refinement.
fn holonomy_suite(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let mut r = SuiteResult::new(Suite::Holonomy);
    let mut rng = cfg.rng(Suite::Holonomy);
    let sets: Vec<LevelSet> = [&[1][..], &[3], &[1, 2], &[2, 3], &[1, 2, 3]].iter().map(|l| LevelSet::new(l)).collect::<Result<_>>()?;
    let mut unitarity = 0.0f64;
    for _ in 0..5 {
        let path = random_loop(&mut rng, 4)?;
        for levels in &sets {
            unitarity = unitarity.max(holonomy(&path, levels, DEFAULT_SEGMENTS)?.unitarity_residual());
        }
    }
    r.checks.push(Check::at_most("unitarity at 4096 segments, random loops", unitarity, cfg.tol(1e-10)));

    let l23 = &sets[3];
    let mut constant = 0.0f64;
    for _ in 0..10 {
        let [_, b, g, t] = random_chart(&mut rng);
        for (coord, vel) in [(Coord::Alpha, (TAU, 0.0, 0.0)), (Coord::Gamma, (0.0, 0.0, TAU))] {
            let path = ParameterPath::coordinate_circle(coord, [0.0, b, g, t], 1)?;
            let w = holonomy(&path, l23, DEFAULT_SEGMENTS)?;
            let m: ComplexMatrix2 = connection_a2(0.0, b, g, t, vel);
            let exact: DynMatrix = m.scale(I).expm_skew_hermitian()?.into();
            constant = constant.max(distance(&w.matrix, &exact));
        }
    }
    r.checks.push(Check::at_most("constant-connection loops vs exp(2 pi i M)", constant, cfg.tol(1e-9)));

    let path = random_loop(&mut rng, 4)?;
    let l12 = &sets[2];
    let ns = [64usize, 128, 256, 512, 1024];
    let ws: Vec<DynMatrix> = ns.iter().map(|&n| holonomy(&path, l12, n).map(|w| w.matrix)).collect::<Result<_>>()?;
    let deltas: Vec<f64> = ws.windows(2).map(|w| distance(&w[1], &w[0])).collect();
    let mut rows = Vec::new();
    for (k, pair) in deltas.windows(2).enumerate() {
        let ratio = pair[0] / pair[1];
        r.checks.push(Check::within(format!("refinement ratio {} -> {} segments", ns[k + 1], ns[k + 2]), ratio, 2.5, 6.0));
        rows.push(vec![ns[k + 1] as f64, pair[0], ratio]);
    }
    r.out("refinement", Value::Table { columns: vec!["segments".into(), "delta".into(), "ratio".into()], rows });
    Ok(r)
}

fn exp_i_hermitian(m: &ComplexMatrix2) -> ComplexMatrix2 {
    m.scale(I).expm_skew_hermitian().expect("Hermitian generator")
}

/// Holonomy of the rotated degenerate frame `V g(t)` against `g(0)^dagger W g(0)`.
fn gauge(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let mut r = SuiteResult::new(Suite::Gauge);
    let mut rng = cfg.rng(Suite::Gauge);
    let levels = LevelSet::new(&[1, 2])?;
    let path = random_loop(&mut rng, 4)?;
    let mut sigma = ComplexMatrix2::zeros();
    for i in 0..2 {
        sigma.0[i][i] = C64::from(rng.gen_range(-1.0..1.0));
    }
    sigma.0[0][1] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    sigma.0[1][0] = sigma.0[0][1].conj();
    let offset = 0.7;
    let g = |t: f64| exp_i_hermitian(&(sigma * (offset + (TAU * t).sin())));
    let h = 1e-6;

    let rotated = |t: f64| -> [ComplexVector3; 2] {
        let f = frame_vectors(path.point(t));
        let gt = g(t);
        std::array::from_fn(|b| f[0] * gt.0[0][b] + f[1] * gt.0[1][b])
    };
    let rotated_connection = |t: f64| -> CMatrix<2> {
        // Stencil along the current segment's line so keyframes do not matter.
        let (x, v) = (path.point(t), path.velocity(t));
        let at = |s: f64| -> [ComplexVector3; 2] {
            let f = frame_vectors(std::array::from_fn(|c| x[c] + s * v[c]));
            let gt = g(t + s);
            std::array::from_fn(|b| f[0] * gt.0[0][b] + f[1] * gt.0[1][b])
        };
        let (f0, fp, fm) = (rotated(t), at(h), at(-h));
        let mut a = CMatrix::<2>::zeros();
        for i in 0..2 {
            for j in 0..2 {
                a.0[i][j] = I * f0[i].inner(&((fp[j] - fm[j]) * (1.0 / (2.0 * h))));
            }
        }
        a
    };
    let closed_form = |t: f64| connection_pullback(&levels, path.point(t), path.velocity(t)).to_fixed::<2>();

    // Midpoint composition is symmetric, so one Richardson step removes the dt^2 term.
    let extrapolate = |conn: &dyn Fn(f64) -> CMatrix<2>| {
        let coarse = path_ordered_exp::<2>(&path, DEFAULT_SEGMENTS, conn).0;
        let fine = path_ordered_exp::<2>(&path, 2 * DEFAULT_SEGMENTS, conn).0;
        (fine * 4.0 - coarse) * (1.0 / 3.0)
    };
    let w = extrapolate(&closed_form);
    let w_rot = extrapolate(&rotated_connection);
    let g0 = g(0.0);
    let expected = g0.adjoint() * w * g0;
    let err = (w_rot - expected).op_norm();
    let other = (w_rot - g0 * w * g0.adjoint()).op_norm();
    r.checks.push(Check::at_most("rotated-frame holonomy vs g(0)^dagger W g(0)", err, cfg.tol(1e-8)));
    r.out("distance to g(0) W g(0)^dagger", other);
    r.out("levels", levels.to_string());
    Ok(r)
}

/// Schroedinger sweeps along an alpha circle against the holonomy prediction.
fn adiabatic(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let mut r = SuiteResult::new(Suite::Adiabatic);
    let ladder = [50.0, 100.0, 200.0, 400.0];
    let circle = ParameterPath::coordinate_circle(Coord::Alpha, [0.0, FRAC_PI_6, 0.0, FRAC_PI_6], 1)?;
    let template = Sweep::new(circle, 0.0, 5.0, ladder[0])?;
    for levels in [LevelSet::new(&[1, 2])?, LevelSet::new(&[3])?] {
        let study = convergence_study(&template, &ladder, &levels, cfg.parallel)?;
        let last = study.rows.last().ok_or(Error::InvalidSweep("empty ladder".into()))?;
        r.checks.push(Check::at_most(format!("{levels}: deviation at T = 400"), last.deviation, cfg.tol(1e-2)));
        r.checks.push(Check::holds(format!("{levels}: deviations nonincreasing in T"), study.is_monotone()));
        let worst_residual = study.rows.iter().map(|x| x.residual).fold(0.0, f64::max);
        r.checks.push(Check::at_most(format!("{levels}: polar residual"), worst_residual, RESIDUAL_LIMIT));
        let rows = study.rows.iter().map(|x| vec![x.t_total, x.deviation, x.residual, x.steps as f64]).collect();
        r.out(
            &format!("{levels} ladder"),
            Value::Table { columns: vec!["T".into(), "deviation".into(), "residual".into(), "steps".into()], rows },
        );
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selectors() {
        assert_eq!(Suite::parse_selector("all").unwrap().len(), 9);
        assert_eq!(Suite::parse_selector("stokes").unwrap(), vec![Suite::Stokes]);
        assert!(Suite::parse_selector("none").is_err());
    }

    #[test]
    fn seeds_are_per_suite() {
        let cfg = SuiteConfig::default();
        let a: f64 = cfg.rng(Suite::Purity).gen();
        let b: f64 = cfg.rng(Suite::Purity).gen();
        let c: f64 = cfg.rng(Suite::Stokes).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn tolerance_override_applies() {
        let cfg = SuiteConfig { tol: Some(0.0), ..SuiteConfig::default() };
        let r = run_suite(Suite::Algebra, &cfg).unwrap();
        assert!(r.checks.iter().all(|c| c.upper == Some(0.0)));
    }
}
