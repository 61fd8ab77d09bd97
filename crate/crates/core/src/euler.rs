//! SU(3) Euler angles, the adjoint representation and the projection onto
//! pure-state density matrices.

use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gellmann::{gellmann, AlgebraVector8};
use crate::smallcomplex::{ComplexMatrix3, C64, EIGEN_TOL};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// The eight angles of `D(alpha, beta, gamma, theta, a, b, c, phi)`.
///
/// No range is enforced. For random sampling the usual cover is
/// `alpha, gamma, a, c in [0, pi)`, `beta, b, theta in [0, pi/2]` and
/// `phi in [0, sqrt(3) pi)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub theta: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub phi: f64,
}

impl EulerAngles {
    /// Angles of the coset representative: the U(2) part set to zero.
    pub fn coset(alpha: f64, beta: f64, gamma: f64, theta: f64) -> Self {
        EulerAngles { alpha, beta, gamma, theta, ..Default::default() }
    }

    /// Angles of the right U(2) factor `e^{i l3 a} e^{i l2 b} e^{i l3 c} e^{i l8 phi}`.
    pub fn stabilizer(a: f64, b: f64, c: f64, phi: f64) -> Self {
        EulerAngles { a, b, c, phi, ..Default::default() }
    }

    /// `(generator, angle)` for each factor of `D`, left to right.
    pub fn factors(&self) -> [(usize, f64); 8] {
        [
            (3, self.alpha),
            (2, self.beta),
            (3, self.gamma),
            (5, self.theta),
            (3, self.a),
            (2, self.b),
            (3, self.c),
            (8, self.phi),
        ]
    }
}

/// Closed-form `exp(i lambda_k angle)` for the generators appearing in `D`.
pub fn factor_exp(k: usize, angle: f64) -> Result<ComplexMatrix3> {
    let (c, s) = (angle.cos(), angle.sin());
    let m = match k {
        2 => ComplexMatrix3::from_real_rows([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]]),
        3 => ComplexMatrix3::from_diag([
            C64::from_polar(1.0, angle),
            C64::from_polar(1.0, -angle),
            C64::from(1.0),
        ]),
        5 => ComplexMatrix3::from_real_rows([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]]),
        8 => {
            let x = angle / SQRT3;
            ComplexMatrix3::from_diag([
                C64::from_polar(1.0, x),
                C64::from_polar(1.0, x),
                C64::from_polar(1.0, -2.0 * x),
            ])
        }
        _ => return Err(Error::UnsupportedGenerator(k)),
    };
    Ok(m)
}

/// The ordered eight-factor product `D`.
pub fn d_matrix(angles: &EulerAngles) -> ComplexMatrix3 {
    angles
        .factors()
        .iter()
        .fold(ComplexMatrix3::identity(), |acc, &(k, x)| {
            acc * factor_exp(k, x).expect("generators of D have closed forms")
        })
}

fn check_special_unitary(d: &ComplexMatrix3) -> Result<()> {
    let unitarity = d.unitarity_defect();
    let det = (d.det() - C64::from(1.0)).norm();
    if unitarity > EIGEN_TOL || det > EIGEN_TOL {
        return Err(Error::NotSpecialUnitary { unitarity, det });
    }
    Ok(())
}

/// Real 8x8 matrix `R` with `D lambda_i D^dagger = R_ij lambda_j`.
/// Rows and columns are 1-based through [`AdjointMatrix8::get`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdjointMatrix8(pub [[f64; 8]; 8]);

impl AdjointMatrix8 {
    pub fn identity() -> Self {
        let mut m = [[0.0; 8]; 8];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        AdjointMatrix8(m)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i - 1][j - 1]
    }

    pub fn row(&self, i: usize) -> AlgebraVector8 {
        AlgebraVector8(self.0[i - 1])
    }

    pub fn transpose(&self) -> Self {
        let mut m = [[0.0; 8]; 8];
        for (i, row) in self.0.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                m[j][i] = *x;
            }
        }
        AdjointMatrix8(m)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `max |R R^T - 1|`.
    pub fn orthogonality_defect(&self) -> f64 {
        (*self * self.transpose()).max_abs_diff(&Self::identity())
    }

    pub fn det(&self) -> f64 {
        let mut a = self.0;
        let mut det = 1.0;
        for k in 0..8 {
            let pivot = (k..8).max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs())).unwrap();
            if a[pivot][k] == 0.0 {
                return 0.0;
            }
            if pivot != k {
                a.swap(pivot, k);
                det = -det;
            }
            det *= a[k][k];
            for i in (k + 1)..8 {
                let f = a[i][k] / a[k][k];
                for j in k..8 {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
        det
    }
}

impl Mul for AdjointMatrix8 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = [[0.0; 8]; 8];
        for i in 0..8 {
            for k in 0..8 {
                for j in 0..8 {
                    m[i][j] += self.0[i][k] * rhs.0[k][j];
                }
            }
        }
        AdjointMatrix8(m)
    }
}

/// `R_ij = Tr(D lambda_i D^dagger lambda_j) / 2`.
pub fn adjoint_rep(d: &ComplexMatrix3) -> Result<AdjointMatrix8> {
    check_special_unitary(d)?;
    let lambdas: [ComplexMatrix3; 8] = std::array::from_fn(|k| gellmann(k + 1).unwrap());
    let dagger = d.adjoint();
    let mut r = [[0.0; 8]; 8];
    for i in 0..8 {
        let rotated = *d * lambdas[i] * dagger;
        for j in 0..8 {
            r[i][j] = 0.5 * (rotated * lambdas[j]).trace().re;
        }
    }
    Ok(AdjointMatrix8(r))
}

/// Fiducial pure state `(1 - sqrt(3) lambda_8) / 3 = diag(0, 0, 1)`.
pub fn fiducial_projector() -> ComplexMatrix3 {
    (ComplexMatrix3::identity() - gellmann(8).unwrap() * SQRT3) * (1.0 / 3.0)
}

/// `x = D [(1 - sqrt(3) lambda_8) / 3] D^{-1}`, a point of SU(3)/U(2).
pub fn coset_project(d: &ComplexMatrix3) -> Result<ComplexMatrix3> {
    check_special_unitary(d)?;
    Ok(*d * fiducial_projector() * d.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallcomplex::I;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    pub(crate) fn random_angles(rng: &mut ChaCha8Rng) -> EulerAngles {
        EulerAngles {
            alpha: rng.gen_range(0.0..PI),
            beta: rng.gen_range(0.0..PI / 2.0),
            gamma: rng.gen_range(0.0..PI),
            theta: rng.gen_range(0.0..PI / 2.0),
            a: rng.gen_range(0.0..PI),
            b: rng.gen_range(0.0..PI / 2.0),
            c: rng.gen_range(0.0..PI),
            phi: rng.gen_range(0.0..3f64.sqrt() * PI),
        }
    }

    #[test]
    fn factor_exp_matches_generic_expm() {
        for k in [2, 3, 5, 8] {
            for &x in &[0.0, 0.37, -1.2, 2.9] {
                let closed = factor_exp(k, x).unwrap();
                let generic = gellmann(k).unwrap().scale(I * x).expm_skew_hermitian().unwrap();
                assert!((closed - generic).max_abs() <= 1e-13, "k={k} x={x}");
            }
        }
        assert!(matches!(factor_exp(1, 0.1), Err(Error::UnsupportedGenerator(1))));
    }

    #[test]
    fn factor_exp_examples() {
        let a = 0.8;
        let f3 = factor_exp(3, a).unwrap();
        assert_eq!(f3.0[0][0], C64::from_polar(1.0, a));
        assert_eq!(f3.0[1][1], C64::from_polar(1.0, -a));
        let f8 = factor_exp(8, a).unwrap();
        assert!((f8.0[2][2] - C64::from_polar(1.0, -2.0 * a / 3f64.sqrt())).norm() < 1e-15);
        assert_eq!(factor_exp(2, 0.0).unwrap(), ComplexMatrix3::identity());
    }

    #[test]
    fn d_matrix_examples() {
        assert_eq!(d_matrix(&EulerAngles::default()), ComplexMatrix3::identity());
        let t = 0.6;
        let only_theta = d_matrix(&EulerAngles::coset(0.0, 0.0, 0.0, t));
        assert!((only_theta - factor_exp(5, t).unwrap()).max_abs() < 1e-16);
    }

    #[test]
    fn d_matrix_third_column() {
        let (al, be, ga, th) = (0.4, 1.1, 2.3, 0.7);
        let col = d_matrix(&EulerAngles::coset(al, be, ga, th)).column(2);
        let expected = [
            C64::from_polar(be.cos() * th.sin(), al + ga),
            // D's own column carries a minus sign on the middle entry.
            -C64::from_polar(be.sin() * th.sin(), -(al - ga)),
            C64::from(th.cos()),
        ];
        for i in 0..3 {
            assert!((col[i] - expected[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn d_matrix_is_special_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let d = d_matrix(&random_angles(&mut rng));
            assert!(d.is_unitary(1e-12));
            assert!((d.det() - C64::from(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn adjoint_rep_identity_and_rotation() {
        let r = adjoint_rep(&ComplexMatrix3::identity()).unwrap();
        assert!(r.max_abs_diff(&AdjointMatrix8::identity()) < 1e-15);

        let t = 0.45;
        let r = adjoint_rep(&factor_exp(3, t).unwrap()).unwrap();
        // Conjugation by e^{i l3 t} rotates (lambda_1, lambda_2) by 2t.
        let (c, s) = ((2.0 * t).cos(), (2.0 * t).sin());
        assert!((r.get(1, 1) - c).abs() < 1e-15);
        assert!((r.get(2, 2) - c).abs() < 1e-15);
        assert!((r.get(1, 2).abs() - s).abs() < 1e-15);
        assert!((r.get(1, 2) + r.get(2, 1)).abs() < 1e-15);
        // Oracle: D l1 D^dagger = R_11 l1 + R_12 l2 directly.
        let d = factor_exp(3, t).unwrap();
        let lhs = d * gellmann(1).unwrap() * d.adjoint();
        let rhs = gellmann(1).unwrap() * r.get(1, 1) + gellmann(2).unwrap() * r.get(1, 2);
        assert!((lhs - rhs).max_abs() < 1e-15);
    }

    #[test]
    fn adjoint_rep_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let d1 = d_matrix(&random_angles(&mut rng));
            let d2 = d_matrix(&random_angles(&mut rng));
            let r1 = adjoint_rep(&d1).unwrap();
            let r2 = adjoint_rep(&d2).unwrap();
            assert!(r1.orthogonality_defect() <= 1e-12);
            assert!((r1.det() - 1.0).abs() <= 1e-10);
            // Row convention reverses the order: R(D1 D2) = R(D2) R(D1).
            let r12 = adjoint_rep(&(d1 * d2)).unwrap();
            assert!(r12.max_abs_diff(&(r2 * r1)) <= 1e-11);
            for i in 1..=8 {
                let lhs = d1 * gellmann(i).unwrap() * d1.adjoint();
                let mut rhs = ComplexMatrix3::zeros();
                for j in 1..=8 {
                    rhs += gellmann(j).unwrap() * r1.get(i, j);
                }
                assert!((lhs - rhs).max_abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn rejects_non_special_unitary() {
        let m = ComplexMatrix3::identity() * C64::from_polar(1.0, 0.3);
        assert!(matches!(adjoint_rep(&m), Err(Error::NotSpecialUnitary { .. })));
        assert!(matches!(coset_project(&(m * 2.0)), Err(Error::NotSpecialUnitary { .. })));
    }

    #[test]
    fn coset_projection_basics() {
        let x = coset_project(&ComplexMatrix3::identity()).unwrap();
        assert!((x - ComplexMatrix3::from_real_diag([0.0, 0.0, 1.0])).max_abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let g = random_angles(&mut rng);
            let d = d_matrix(&EulerAngles::coset(g.alpha, g.beta, g.gamma, g.theta));
            let u = d_matrix(&EulerAngles::stabilizer(g.a, g.b, g.c, g.phi));
            let x = coset_project(&d).unwrap();
            let xu = coset_project(&(d * u)).unwrap();
            assert!((x - xu).max_abs() <= 1e-12);
            assert!(x.is_hermitian(1e-12));
            assert!((x.trace() - C64::from(1.0)).norm() <= 1e-12);
            assert!((x * x - x).max_abs() <= 1e-12);
        }
    }
}
