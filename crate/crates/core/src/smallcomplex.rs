//! Fixed-size dense complex vectors and matrices.
//!
//! Everything in this crate lives in dimension three or smaller, so the
//! matrices are plain `Copy` arrays indexed `(row, col)` from zero. The
//! Hermitian eigensolver is a cyclic complex Jacobi iteration, which is
//! accurate to a few ulps at this size and handles exact degeneracies
//! without special casing.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Default tolerance for algebraic identities.
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Default tolerance for eigen-residuals and Hermiticity preconditions.
pub const EIGEN_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CVector<const N: usize>(pub [C64; N]);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMatrix<const N: usize>(pub [[C64; N]; N]);

pub type ComplexVector3 = CVector<3>;
pub type ComplexMatrix3 = CMatrix<3>;
pub type ComplexMatrix2 = CMatrix<2>;

impl<const N: usize> CVector<N> {
    pub fn zeros() -> Self {
        CVector([ZERO; N])
    }

    pub fn new(components: [C64; N]) -> Self {
        CVector(components)
    }

    pub fn basis(k: usize) -> Self {
        let mut v = Self::zeros();
        v.0[k] = ONE;
        v
    }

    /// Inner product `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Self {
        self.scale(C64::from(1.0 / self.norm()))
    }

    pub fn scale(&self, s: C64) -> Self {
        CVector(self.0.map(|z| z * s))
    }

    pub fn conj(&self) -> Self {
        CVector(self.0.map(|z| z.conj()))
    }

    /// Outer product `|self><other|`.
    pub fn outer(&self, other: &Self) -> CMatrix<N> {
        let mut m = CMatrix::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[i] * other.0[j].conj();
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.is_finite())
    }
}

impl<const N: usize> Index<usize> for CVector<N> {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl<const N: usize> IndexMut<usize> for CVector<N> {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.0[i]
    }
}

impl<const N: usize> Add for CVector<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..N {
            out.0[i] += rhs.0[i];
        }
        out
    }
}

impl<const N: usize> Sub for CVector<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..N {
            out.0[i] -= rhs.0[i];
        }
        out
    }
}

impl<const N: usize> Neg for CVector<N> {
    type Output = Self;
    fn neg(self) -> Self {
        CVector(self.0.map(|z| -z))
    }
}

impl<const N: usize> Mul<C64> for CVector<N> {
    type Output = Self;
    fn mul(self, s: C64) -> Self {
        self.scale(s)
    }
}

impl<const N: usize> Mul<f64> for CVector<N> {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(C64::from(s))
    }
}

impl<const N: usize> CMatrix<N> {
    pub fn zeros() -> Self {
        CMatrix([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_rows(rows: [[C64; N]; N]) -> Self {
        CMatrix(rows)
    }

    pub fn from_real_rows(rows: [[f64; N]; N]) -> Self {
        CMatrix(rows.map(|r| r.map(C64::from)))
    }

    pub fn from_diag(diag: [C64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = diag[i];
        }
        m
    }

    pub fn from_real_diag(diag: [f64; N]) -> Self {
        Self::from_diag(diag.map(C64::from))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: [CVector<N>; N]) -> Self {
        let mut m = Self::zeros();
        for (j, c) in cols.iter().enumerate() {
            for i in 0..N {
                m.0[i][j] = c.0[i];
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> CVector<N> {
        let mut v = CVector::zeros();
        for i in 0..N {
            v.0[i] = self.0[i][j];
        }
        v
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[j][i] = self.0[i][j].conj();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        CMatrix(self.0.map(|r| r.map(|z| z.conj())))
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[j][i] = self.0[i][j];
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix(self.0.map(|r| r.map(|z| z * s)))
    }

    pub fn mul_vec(&self, v: &CVector<N>) -> CVector<N> {
        let mut out = CVector::zeros();
        for i in 0..N {
            let mut acc = ZERO;
            for j in 0..N {
                acc += self.0[i][j] * v.0[j];
            }
            out.0[i] = acc;
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flat_map(|r| r.iter()).all(|z| z.is_finite())
    }

    /// `max |M - M^dagger|` over entries.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.adjoint()).max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `max |M M^dagger - I|` over entries.
    pub fn unitarity_defect(&self) -> f64 {
        (*self * self.adjoint() - Self::identity()).max_abs()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> C64 {
        let mut a = self.0;
        let mut det = ONE;
        for k in 0..N {
            let pivot = (k..N)
                .max_by(|&x, &y| a[x][k].norm().total_cmp(&a[y][k].norm()))
                .unwrap_or(k);
            if a[pivot][k].norm() == 0.0 {
                return ZERO;
            }
            if pivot != k {
                a.swap(pivot, k);
                det = -det;
            }
            det *= a[k][k];
            for i in (k + 1)..N {
                let f = a[i][k] / a[k][k];
                for j in k..N {
                    let sub = f * a[k][j];
                    a[i][j] -= sub;
                }
            }
        }
        det
    }

    /// Eigendecomposition of a Hermitian matrix.
    pub fn eig_hermitian(&self) -> Result<EigenSystem<N>> {
        let deviation = self.hermiticity_defect();
        if deviation > EIGEN_TOL || !self.is_finite() {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(jacobi_eigen(self))
    }

    /// Spectral norm, the largest singular value.
    pub fn op_norm(&self) -> f64 {
        let gram = self.adjoint() * *self;
        let sym = (gram + gram.adjoint()).scale(C64::from(0.5));
        let es = jacobi_eigen(&sym);
        es.values[N - 1].max(0.0).sqrt()
    }

    /// `exp(M)` for skew-Hermitian `M`, through the spectrum of `-iM`.
    pub fn expm_skew_hermitian(&self) -> Result<Self> {
        let deviation = (*self + self.adjoint()).max_abs();
        if deviation > ALGEBRA_TOL * self.max_abs().max(1.0) || !self.is_finite() {
            return Err(Error::NotSkewHermitian { deviation });
        }
        let h = self.scale(-I);
        let h = (h + h.adjoint()).scale(C64::from(0.5));
        let es = jacobi_eigen(&h);
        Ok(es.map_spectrum(|lam| C64::from_polar(1.0, lam)))
    }

    /// `exp(M)` by scaling and squaring a truncated Taylor series. Works for
    /// any matrix; used as the independent route for the skew-Hermitian case.
    pub fn expm_series(&self) -> Self {
        let norm = self.frobenius_norm();
        let mut squarings = 0u32;
        if norm > 0.5 {
            squarings = (norm / 0.5).log2().ceil() as u32;
        }
        let scaled = self.scale(C64::from(0.5f64.powi(squarings as i32)));
        let mut term = Self::identity();
        let mut sum = Self::identity();
        for k in 1..=20 {
            term = (term * scaled).scale(C64::from(1.0 / k as f64));
            sum += term;
            if term.max_abs() < 1e-18 {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }

    /// Unitary polar factor `W (W^dagger W)^{-1/2}` and the residual
    /// `max_i |1 - sigma_i|` over the singular values of `W`.
    pub fn polar_unitary(&self) -> Result<(Self, f64)> {
        let gram = self.adjoint() * *self;
        let gram = (gram + gram.adjoint()).scale(C64::from(0.5));
        let es = jacobi_eigen(&gram);
        if es.values[0] <= 1e-24 {
            return Err(Error::SingularOverlap);
        }
        let inv_sqrt = es.map_spectrum(|lam| C64::from(1.0 / lam.sqrt()));
        let residual = es
            .values
            .iter()
            .map(|lam| (1.0 - lam.sqrt()).abs())
            .fold(0.0, f64::max);
        Ok((*self * inv_sqrt, residual))
    }
}

impl<const N: usize> Index<(usize, usize)> for CMatrix<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMatrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for CMatrix<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        out += rhs;
        out
    }
}

impl<const N: usize> AddAssign for CMatrix<N> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl<const N: usize> Sub for CMatrix<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..N {
            for j in 0..N {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }
}

impl<const N: usize> Neg for CMatrix<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl<const N: usize> Mul for CMatrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                for j in 0..N {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

impl<const N: usize> Mul<CVector<N>> for CMatrix<N> {
    type Output = CVector<N>;
    fn mul(self, rhs: CVector<N>) -> CVector<N> {
        self.mul_vec(&rhs)
    }
}

impl<const N: usize> Mul<C64> for CMatrix<N> {
    type Output = Self;
    fn mul(self, s: C64) -> Self {
        self.scale(s)
    }
}

impl<const N: usize> Mul<f64> for CMatrix<N> {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(C64::from(s))
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvectors in matching
/// order. Each eigenvector's phase is fixed so that its largest-modulus
/// component is real and nonnegative.
#[derive(Clone, Copy, Debug)]
pub struct EigenSystem<const N: usize> {
    pub values: [f64; N],
    pub vectors: [CVector<N>; N],
}

pub type EigenSystem3 = EigenSystem<3>;

impl<const N: usize> EigenSystem<N> {
    /// `sum_k f(e_k) |v_k><v_k|`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> CMatrix<N> {
        let mut out = CMatrix::zeros();
        for k in 0..N {
            out += self.vectors[k].outer(&self.vectors[k]).scale(f(self.values[k]));
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix<N> {
        self.map_spectrum(C64::from)
    }
}

fn off_diagonal_norm<const N: usize>(a: &CMatrix<N>) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        for j in 0..N {
            if i != j {
                s += a.0[i][j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi_eigen<const N: usize>(m: &CMatrix<N>) -> EigenSystem<N> {
    let mut a = *m;
    let mut v = CMatrix::<N>::identity();
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..64 {
        if off_diagonal_norm(&a) <= 1e-17 * scale {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a.0[p][q];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                // Phase rotation makes a_pq real, then a real Jacobi rotation
                // annihilates it.
                let phase = apq / mag;
                let app = a.0[p][p].re;
                let aqq = a.0[q][q].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let mut d = CMatrix::<N>::identity();
                d.0[p][p] = phase;
                let mut rot = CMatrix::<N>::identity();
                rot.0[p][p] = C64::from(c);
                rot.0[p][q] = C64::from(s);
                rot.0[q][p] = C64::from(-s);
                rot.0[q][q] = C64::from(c);
                let gmat = d * rot;
                a = gmat.adjoint() * a * gmat;
                a.0[p][q] = ZERO;
                a.0[q][p] = ZERO;
                v = v * gmat;
            }
        }
    }

    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&x, &y| a.0[x][x].re.total_cmp(&a.0[y][y].re));

    let mut values = [0.0; N];
    let mut vectors = [CVector::<N>::zeros(); N];
    for (slot, &k) in order.iter().enumerate() {
        values[slot] = a.0[k][k].re;
        let mut col = v.column(k);
        let mut best = 0;
        for i in 1..N {
            if col.0[i].norm() > col.0[best].norm() + 1e-14 {
                best = i;
            }
        }
        let z = col.0[best];
        if z.norm() > 0.0 {
            col = col.scale(z.conj() / z.norm());
            col.0[best] = C64::from(col.0[best].re.abs());
        }
        vectors[slot] = col;
    }
    EigenSystem { values, vectors }
}

/// Small square complex matrix of runtime dimension (at most 3), used where
/// the size depends on a chosen level set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynMatrix {
    pub dim: usize,
    /// Row-major entries.
    pub entries: Vec<C64>,
}

macro_rules! dispatch_dim {
    ($dim:expr, $n:ident => $body:expr) => {
        match $dim {
            1 => {
                const $n: usize = 1;
                $body
            }
            2 => {
                const $n: usize = 2;
                $body
            }
            3 => {
                const $n: usize = 3;
                $body
            }
            d => panic!("unsupported dimension {d}"),
        }
    };
}
pub(crate) use dispatch_dim;

impl DynMatrix {
    pub fn zeros(dim: usize) -> Self {
        DynMatrix { dim, entries: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.entries[i * self.dim + j] = z;
    }

    pub fn to_fixed<const N: usize>(&self) -> CMatrix<N> {
        assert_eq!(self.dim, N, "dimension mismatch");
        let mut m = CMatrix::<N>::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.get(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn real_parts(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(|r| r.iter().map(|z| z.re).collect()).collect()
    }

    pub fn imag_parts(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(|r| r.iter().map(|z| z.im).collect()).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(j, i, self.get(i, j).conj());
            }
        }
        m
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += self.get(i, k) * other.get(k, j);
                }
                m.set(i, j, acc);
            }
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        DynMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.sub(&self.adjoint()).max_abs()
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.matmul(&self.adjoint()).sub(&Self::identity(self.dim)).max_abs()
    }

    pub fn op_norm(&self) -> f64 {
        dispatch_dim!(self.dim, N => self.to_fixed::<N>().op_norm())
    }

    /// Spectral-norm distance `||self - other||_2`.
    pub fn op_distance(&self, other: &Self) -> f64 {
        self.sub(other).op_norm()
    }
}

impl<const N: usize> From<CMatrix<N>> for DynMatrix {
    fn from(m: CMatrix<N>) -> Self {
        DynMatrix { dim: N, entries: m.0.iter().flat_map(|r| r.iter().copied()).collect() }
    }
}
