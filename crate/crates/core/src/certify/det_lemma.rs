use nalgebra::{DMatrix, DVector, Matrix2};

use crate::error::{require_same, Error, Result};
use crate::tolerances::DEFAULT as TOL;

/// Both sides of the rank-2 determinant lemma
///
/// `det(Λ + ξ₁η₁ᵀ + ξ₂η₂ᵀ) = det(Λ) · det(I₂ + (η₁,η₂)ᵀ Λ⁻¹ (ξ₁,ξ₂))`,
///
/// each computed by its own route: an LU determinant of the updated matrix
/// on the left, linear solves against `Λ` and a 2×2 determinant on the right.
pub fn det_lemma_check(
    lambda: &DMatrix<f64>,
    xi1: &[f64],
    eta1: &[f64],
    xi2: &[f64],
    eta2: &[f64],
) -> Result<(f64, f64)> {
    let n = lambda.nrows();
    require_same(n, lambda.ncols())?;
    for v in [xi1, eta1, xi2, eta2] {
        require_same(n, v.len())?;
    }
    let (x1, y1) = (
        DVector::from_column_slice(xi1),
        DVector::from_column_slice(eta1),
    );
    let (x2, y2) = (
        DVector::from_column_slice(xi2),
        DVector::from_column_slice(eta2),
    );

    let lu = lambda.clone().lu();
    let det = lu.determinant();
    let hadamard: f64 = lambda.column_iter().map(|c| c.norm()).product();
    let floor = TOL.singular_floor * hadamard;
    if !(det.abs() > floor) {
        return Err(Error::Singular {
            det: det.abs(),
            floor,
        });
    }

    let updated = lambda + &x1 * y1.transpose() + &x2 * y2.transpose();
    let lhs = updated.lu().determinant();

    let solve = |v: &DVector<f64>| {
        lu.solve(v).ok_or(Error::Singular {
            det: det.abs(),
            floor,
        })
    };
    let (z1, z2) = (solve(&x1)?, solve(&x2)?);
    let small = Matrix2::new(
        1.0 + y1.dot(&z1),
        y1.dot(&z2),
        y2.dot(&z1),
        1.0 + y2.dot(&z2),
    );
    let rhs = det * small.determinant();
    Ok((lhs, rhs))
}
