use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tolerances::DEFAULT as TOL;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
///
/// Sweeps continue until the off-diagonal Frobenius norm drops below
/// `1e-13 · ‖M‖_F`.
pub fn jacobi_eigen(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.ncols(),
        });
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let asym = (m - m.transpose()).amax();
    if asym > TOL.symmetry * m.amax().max(f64::MIN_POSITIVE) {
        return Err(Error::NotSymmetric(asym));
    }

    let mut a = (m + m.transpose()) * 0.5;
    let target = TOL.jacobi_offdiag * a.norm();
    let off = |a: &DMatrix<f64>| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)] * a[(i, j)];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > target {
        if sweeps == TOL.jacobi_max_sweeps {
            return Err(Error::NoConvergence(sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_sym, trial_rng};

    #[test]
    fn diagonal_inputs() {
        assert_eq!(
            jacobi_eigen(&DMatrix::identity(4, 4)).unwrap(),
            vec![1.0; 4]
        );
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3., 1., 4., 1.]));
        assert_eq!(jacobi_eigen(&d).unwrap(), vec![1., 1., 3., 4.]);
        assert_eq!(jacobi_eigen(&DMatrix::zeros(3, 3)).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn all_minus_ones_pattern() {
        let b = DMatrix::from_fn(4, 4, |i, j| if i == j { 3.0 } else { -1.0 });
        let e = jacobi_eigen(&b).unwrap();
        for (got, want) in e.iter().zip([0., 4., 4., 4.]) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn matches_trace_and_frobenius() {
        let mut rng = trial_rng(41, 0, 0);
        for n in 2..11 {
            let m = random_sym(&mut rng, n);
            let e = jacobi_eigen(&m).unwrap();
            assert!((e.iter().sum::<f64>() - m.trace()).abs() < 1e-12 * m.norm());
            let fro: f64 = e.iter().map(|x| x * x).sum();
            assert!((fro - m.norm_squared()).abs() < 1e-12 * m.norm_squared());
            let reference = m.clone().symmetric_eigenvalues();
            let mut r: Vec<f64> = reference.iter().copied().collect();
            r.sort_by(f64::total_cmp);
            for (a, b) in e.iter().zip(&r) {
                assert!((a - b).abs() < 1e-12 * m.norm());
            }
        }
    }

    #[test]
    fn rejects_nonsymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[1., 2., 0., 1.]);
        assert!(matches!(jacobi_eigen(&m), Err(Error::NotSymmetric(_))));
    }
}
