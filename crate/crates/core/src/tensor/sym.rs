use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;

use super::PointFrame;
use crate::error::{require_same, Error, Result};
use crate::tolerances::DEFAULT as TOL;

/// Covariant symmetric 2-tensor. The stored matrix is exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor2 {
    a: DMatrix<f64>,
}

impl SymTensor2 {
    /// Accepts a matrix symmetric up to relative roundoff and stores its
    /// symmetric part.
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                got: a.ncols(),
            });
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let asym = (&a - a.transpose()).amax();
        if asym > TOL.symmetry * a.amax().max(f64::MIN_POSITIVE) {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self::symmetrized(a))
    }

    pub fn from_row_major(n: usize, entries: &[f64]) -> Result<Self> {
        require_same(n * n, entries.len())?;
        Self::new(DMatrix::from_row_slice(n, n, entries))
    }

    /// Symmetric part `(a + aᵀ)/2`, without validation.
    pub(crate) fn symmetrized(mut a: DMatrix<f64>) -> Self {
        let n = a.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (a[(i, j)] + a[(j, i)]);
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        Self { a }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            a: DMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            a: DMatrix::identity(n, n),
        }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Self {
            a: DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d)),
        }
    }

    /// The metric itself viewed as a symmetric 2-tensor.
    pub fn metric(frame: &PointFrame) -> Self {
        Self {
            a: frame.metric().clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.a
    }

    pub fn to_row_major(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.a[(i, j)]);
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.a.iter().all(|x| x.is_finite())
    }
}

impl Add for &SymTensor2 {
    type Output = SymTensor2;
    fn add(self, rhs: &SymTensor2) -> SymTensor2 {
        SymTensor2 {
            a: &self.a + &rhs.a,
        }
    }
}

impl Sub for &SymTensor2 {
    type Output = SymTensor2;
    fn sub(self, rhs: &SymTensor2) -> SymTensor2 {
        SymTensor2 {
            a: &self.a - &rhs.a,
        }
    }
}

impl Mul<f64> for &SymTensor2 {
    type Output = SymTensor2;
    fn mul(self, rhs: f64) -> SymTensor2 {
        SymTensor2 { a: &self.a * rhs }
    }
}

/// Components of `h` in the `g`-orthonormal frame, so the metric becomes `δ`.
pub fn orthonormalize(frame: &PointFrame, h: &SymTensor2) -> Result<SymTensor2> {
    require_same(frame.dim(), h.dim())?;
    Ok(SymTensor2::symmetrized(frame.to_orthonormal(&h.a)))
}

/// `H = g^{ij} h_ij`.
pub fn trace(frame: &PointFrame, h: &SymTensor2) -> Result<f64> {
    require_same(frame.dim(), h.dim())?;
    Ok(frame.inverse().component_mul(&h.a).sum())
}

/// `g^{ik} g^{jl} a_ij b_kl`.
pub fn inner(frame: &PointFrame, a: &SymTensor2, b: &SymTensor2) -> Result<f64> {
    require_same(frame.dim(), a.dim())?;
    require_same(frame.dim(), b.dim())?;
    Ok(frame.raise(&a.a).component_mul(&b.a).sum())
}

/// `|a|²`, evaluated in the orthonormal frame so the result is a plain sum of squares.
pub fn norm2(frame: &PointFrame, a: &SymTensor2) -> Result<f64> {
    Ok(orthonormalize(frame, a)?.a.norm_squared())
}
