use nalgebra::DMatrix;

use crate::error::{require_dim, Error, Result};
use crate::tolerances::DEFAULT as TOL;

/// The metric at a point together with its Cholesky factor `g = L Lᵀ`.
///
/// Components of a covariant tensor in the `g`-orthonormal frame `e = L⁻ᵀ ∂`
/// are obtained by conjugating with `L⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFrame {
    g: DMatrix<f64>,
    l: DMatrix<f64>,
    l_inv: DMatrix<f64>,
    g_inv: DMatrix<f64>,
}

impl PointFrame {
    pub fn new(g: DMatrix<f64>) -> Result<Self> {
        let n = g.nrows();
        if g.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: g.ncols(),
            });
        }
        require_dim(n)?;
        if g.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = g.amax();
        let asym = (&g - g.transpose()).amax();
        if asym > TOL.symmetry * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NotSymmetric(asym));
        }
        let g = (&g + g.transpose()) * 0.5;

        let chol = nalgebra::Cholesky::new(g.clone()).ok_or(Error::NotPositiveDefinite)?;
        let l = chol.l();
        if l.diagonal().iter().any(|&d| !(d > 0.0)) {
            return Err(Error::NotPositiveDefinite);
        }
        let resid = (&l * l.transpose() - &g).amax();
        if resid > TOL.cholesky * scale {
            return Err(Error::NotPositiveDefinite);
        }
        let l_inv = l
            .clone()
            .solve_lower_triangular(&DMatrix::identity(n, n))
            .ok_or(Error::NotPositiveDefinite)?;
        let g_inv = l_inv.transpose() * &l_inv;
        let g_inv = (&g_inv + g_inv.transpose()) * 0.5;
        Ok(Self { g, l, l_inv, g_inv })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(DMatrix::identity(n, n))
    }

    pub fn from_row_major(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(n, n, entries))
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn metric(&self) -> &DMatrix<f64> {
        &self.g
    }

    /// Lower-triangular factor `L` with `g = L Lᵀ`.
    pub fn factor(&self) -> &DMatrix<f64> {
        &self.l
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.g_inv
    }

    /// `L⁻¹ a L⁻ᵀ`: covariant components in the orthonormal frame.
    pub(crate) fn to_orthonormal(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        &self.l_inv * a * self.l_inv.transpose()
    }

    pub(crate) fn l_inv(&self) -> &DMatrix<f64> {
        &self.l_inv
    }

    /// `g⁻¹ a g⁻¹`: both indices raised.
    pub(crate) fn raise(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        &self.g_inv * a * &self.g_inv
    }
}
