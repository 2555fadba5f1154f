//! Small complex-vector helpers used throughout the pipeline.
//!
//! Everything here operates on `Vec<Complex64>` / slices; matrices are stored
//! as a list of columns, which is all the rank-1 structure of this problem
//! needs.

use num_complex::Complex64;

pub type CVec = Vec<Complex64>;

/// Hermitian inner product `a^H b`.
pub fn cdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Plain (unconjugated) inner product `a^T b`.
pub fn tdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Squared Euclidean norm.
pub fn norm_sq(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    norm_sq(a).sqrt()
}

pub fn scale(a: &[Complex64], s: Complex64) -> CVec {
    a.iter().map(|x| x * s).collect()
}

/// `a + s * b`.
pub fn axpy(a: &[Complex64], s: Complex64, b: &[Complex64]) -> CVec {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn zeros(n: usize) -> CVec {
    vec![Complex64::new(0.0, 0.0); n]
}

/// Matrix stored as columns; `h_mul` applies the conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct ColMat {
    pub cols: Vec<CVec>,
}

impl ColMat {
    pub fn from_cols(cols: Vec<CVec>) -> Self {
        Self { cols }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nrows(&self) -> usize {
        self.cols.first().map_or(0, |c| c.len())
    }

    /// `A^H v`: one Hermitian dot per column.
    pub fn h_mul(&self, v: &[Complex64]) -> CVec {
        self.cols.iter().map(|c| cdot(c, v)).collect()
    }

    /// `A c`: linear combination of columns.
    pub fn mul(&self, coef: &[Complex64]) -> CVec {
        debug_assert_eq!(coef.len(), self.ncols());
        let mut out = zeros(self.nrows());
        for (c, w) in self.cols.iter().zip(coef) {
            for (o, x) in out.iter_mut().zip(c) {
                *o += w * x;
            }
        }
        out
    }

    /// Max deviation of `A^H A` from the identity.
    pub fn orthonormality_residual(&self) -> f64 {
        let k = self.ncols();
        let mut worst = 0.0f64;
        for i in 0..k {
            for j in 0..k {
                let g = cdot(&self.cols[i], &self.cols[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }
}
