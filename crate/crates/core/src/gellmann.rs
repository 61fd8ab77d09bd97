//! The su(3) algebra in the Gell-Mann basis.
//!
//! `gellmann(0)` is the 3x3 identity so that a Hermitian matrix expands as
//! `c0 * 1 + sum_i R_i lambda_i`. Algebra vectors only ever use indices 1..=8.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::smallcomplex::{ComplexMatrix3, EIGEN_TOL, I, ONE, ZERO};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Real coordinates on the Gell-Mann basis, indexed 1..=8.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct AlgebraVector8(pub [f64; 8]);

impl AlgebraVector8 {
    pub fn zeros() -> Self {
        AlgebraVector8([0.0; 8])
    }

    /// Unit vector e_k, `k` in 1..=8.
    pub fn unit(k: usize) -> Self {
        assert!((1..=8).contains(&k), "algebra index {k} out of range");
        let mut v = Self::zeros();
        v.0[k - 1] = 1.0;
        v
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        AlgebraVector8(self.0.map(|x| x * s))
    }

    /// `sqrt(3) * d_ijk a_j b_k`.
    pub fn star(&self, other: &Self) -> Self {
        star(self, other)
    }
}

/// 1-based component access.
impl Index<usize> for AlgebraVector8 {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.0[k - 1]
    }
}

impl IndexMut<usize> for AlgebraVector8 {
    fn index_mut(&mut self, k: usize) -> &mut f64 {
        &mut self.0[k - 1]
    }
}

impl Add for AlgebraVector8 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (a, b) in out.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        out
    }
}

impl Sub for AlgebraVector8 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for (a, b) in out.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
        out
    }
}

impl Mul<f64> for AlgebraVector8 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

/// Gell-Mann matrix `lambda_k`; `k = 0` is the identity.
pub fn gellmann(k: usize) -> Result<ComplexMatrix3> {
    let o = ZERO;
    let l = ONE;
    let m = match k {
        0 => ComplexMatrix3::identity(),
        1 => ComplexMatrix3::from_rows([[o, l, o], [l, o, o], [o, o, o]]),
        2 => ComplexMatrix3::from_rows([[o, -I, o], [I, o, o], [o, o, o]]),
        3 => ComplexMatrix3::from_rows([[l, o, o], [o, -l, o], [o, o, o]]),
        4 => ComplexMatrix3::from_rows([[o, o, l], [o, o, o], [l, o, o]]),
        5 => ComplexMatrix3::from_rows([[o, o, -I], [o, o, o], [I, o, o]]),
        6 => ComplexMatrix3::from_rows([[o, o, o], [o, o, l], [o, l, o]]),
        7 => ComplexMatrix3::from_rows([[o, o, o], [o, o, -I], [o, I, o]]),
        8 => ComplexMatrix3::from_real_diag([1.0 / SQRT3, 1.0 / SQRT3, -2.0 / SQRT3]),
        _ => return Err(Error::IndexOutOfRange { index: k, min: 0, max: 8 }),
    };
    Ok(m)
}

/// All nine basis matrices, index 0 being the identity.
pub fn basis() -> [ComplexMatrix3; 9] {
    std::array::from_fn(|k| gellmann(k).expect("index in range"))
}

// Nonzero d_ijk with i <= j <= k; the rest follows by permutation symmetry.
const D_ENTRIES: [((usize, usize, usize), f64); 16] = [
    ((1, 1, 8), 1.0 / SQRT3),
    ((2, 2, 8), 1.0 / SQRT3),
    ((3, 3, 8), 1.0 / SQRT3),
    ((8, 8, 8), -1.0 / SQRT3),
    ((4, 4, 8), -0.5 / SQRT3),
    ((5, 5, 8), -0.5 / SQRT3),
    ((6, 6, 8), -0.5 / SQRT3),
    ((7, 7, 8), -0.5 / SQRT3),
    ((1, 4, 6), 0.5),
    ((1, 5, 7), 0.5),
    ((2, 4, 7), -0.5),
    ((2, 5, 6), 0.5),
    ((3, 4, 4), 0.5),
    ((3, 5, 5), 0.5),
    ((3, 6, 6), -0.5),
    ((3, 7, 7), -0.5),
];

/// The fully symmetric tensor in `{lambda_i, lambda_j} = 4/3 delta_ij + 2 d_ijk lambda_k`.
#[derive(Clone, Debug)]
pub struct DTensor {
    table: [[[f64; 8]; 8]; 8],
}

impl DTensor {
    pub fn new() -> Self {
        let mut table = [[[0.0; 8]; 8]; 8];
        for &((i, j, k), v) in &D_ENTRIES {
            let (i, j, k) = (i - 1, j - 1, k - 1);
            for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                table[a][b][c] = v;
            }
        }
        DTensor { table }
    }

    /// `d_ijk` with 1-based indices.
    pub fn get(&self, i: usize, j: usize, k: usize) -> Result<f64> {
        for idx in [i, j, k] {
            if !(1..=8).contains(&idx) {
                return Err(Error::IndexOutOfRange { index: idx, min: 1, max: 8 });
            }
        }
        Ok(self.table[i - 1][j - 1][k - 1])
    }

    fn raw(&self, i: usize, j: usize, k: usize) -> f64 {
        self.table[i][j][k]
    }
}

impl Default for DTensor {
    fn default() -> Self {
        Self::new()
    }
}

fn d_table() -> &'static DTensor {
    static TABLE: std::sync::OnceLock<DTensor> = std::sync::OnceLock::new();
    TABLE.get_or_init(DTensor::new)
}

pub fn d_tensor(i: usize, j: usize, k: usize) -> Result<f64> {
    d_table().get(i, j, k)
}

pub fn star(a: &AlgebraVector8, b: &AlgebraVector8) -> AlgebraVector8 {
    let d = d_table();
    let mut out = AlgebraVector8::zeros();
    for i in 0..8 {
        let mut acc = 0.0;
        for j in 0..8 {
            if a.0[j] == 0.0 {
                continue;
            }
            for k in 0..8 {
                acc += d.raw(i, j, k) * a.0[j] * b.0[k];
            }
        }
        out.0[i] = SQRT3 * acc;
    }
    out
}

/// Split a Hermitian matrix into `(Tr M / 3, R)` with `R_i = Tr(M lambda_i) / 2`.
pub fn decompose(m: &ComplexMatrix3) -> Result<(f64, AlgebraVector8)> {
    let deviation = m.hermiticity_defect();
    if deviation > EIGEN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let c0 = m.trace().re / 3.0;
    let mut r = AlgebraVector8::zeros();
    for k in 1..=8 {
        r[k] = 0.5 * (*m * gellmann(k)?).trace().re;
    }
    Ok((c0, r))
}

/// `c0 * 1 + sum_i R_i lambda_i`.
pub fn compose(c0: f64, r: &AlgebraVector8) -> ComplexMatrix3 {
    let mut m = ComplexMatrix3::identity() * c0;
    for k in 1..=8 {
        if r[k] != 0.0 {
            m += gellmann(k).expect("index in range") * r[k];
        }
    }
    m
}

/// `sum_i n_i lambda_i`.
pub fn dot_lambda(n: &AlgebraVector8) -> ComplexMatrix3 {
    compose(0.0, n)
}
