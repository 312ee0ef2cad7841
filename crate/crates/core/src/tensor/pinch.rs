use super::{orthonormalize, PointFrame, SymTensor2};
use crate::error::{require_dim, Error, Result};

/// Orthonormal-frame invariants shared by `P` and its scale.
struct Invariants {
    n: f64,
    h2: f64,
    rc2: f64,
    scalar: f64,
    trace_h: f64,
    rc_dot_h: f64,
    rc_h_h: f64,
}

fn invariants(frame: &PointFrame, rc: &SymTensor2, h: &SymTensor2) -> Result<Invariants> {
    require_dim(frame.dim())?;
    let r = orthonormalize(frame, rc)?.into_matrix();
    let h = orthonormalize(frame, h)?.into_matrix();
    let hh = &h * &h;
    Ok(Invariants {
        n: frame.dim() as f64,
        h2: h.norm_squared(),
        rc2: r.norm_squared(),
        scalar: r.trace(),
        trace_h: h.trace(),
        rc_dot_h: r.component_mul(&h).sum(),
        rc_h_h: r.component_mul(&hh).sum(),
    })
}

/// The pinching quantity
///
/// `P = |h|²|Rc|² − (2R/(n−2))(H⟨Rc,h⟩ − R_jk h_ji h_ik) + R²(H² − |h|²)/((n−1)(n−2))`.
///
/// Defined for any `rc`, `h`; not clamped.
pub fn pinch_p(frame: &PointFrame, rc: &SymTensor2, h: &SymTensor2) -> Result<f64> {
    let v = invariants(frame, rc, h)?;
    let n = v.n;
    Ok(
        v.h2 * v.rc2 - 2.0 * v.scalar / (n - 2.0) * (v.trace_h * v.rc_dot_h - v.rc_h_h)
            + v.scalar * v.scalar * (v.trace_h * v.trace_h - v.h2) / ((n - 1.0) * (n - 2.0)),
    )
}

/// `|h|²|Rc|² + R²H² + R²|h|²`, the magnitude against which roundoff in `P`
/// is judged.
pub fn pinch_p_scale(frame: &PointFrame, rc: &SymTensor2, h: &SymTensor2) -> Result<f64> {
    let v = invariants(frame, rc, h)?;
    let r2 = v.scalar * v.scalar;
    Ok(v.h2 * v.rc2 + r2 * v.trace_h * v.trace_h + r2 * v.h2)
}

/// `|h|² / R²`; requires `R > 0`.
pub fn pinch_ratio(frame: &PointFrame, h: &SymTensor2, scalar: f64) -> Result<f64> {
    if !(scalar > 0.0) {
        return Err(Error::NonPositiveScalar(scalar));
    }
    Ok(super::norm2(frame, h)? / (scalar * scalar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_spd, random_sym, trial_rng};
    use crate::tensor::{lcf_curvature_from_ricci, norm2, riemann_quadratic, scalar_of};

    #[test]
    fn golden_values_on_unit_sphere() {
        let f = PointFrame::identity(4).unwrap();
        let rc = &SymTensor2::identity(4) * 3.0;
        // 144 − 432 + 288
        assert_eq!(pinch_p(&f, &rc, &SymTensor2::identity(4)).unwrap(), 0.0);
        let h = SymTensor2::diagonal(&[1.0, 0.0, 0.0, 0.0]);
        assert!((pinch_p(&f, &rc, &h).unwrap() - 36.0).abs() < 1e-12);
    }

    #[test]
    fn metric_direction_reduces_to_ricci_variance() {
        let mut rng = trial_rng(31, 0, 0);
        for n in 3..9 {
            let f = PointFrame::new(random_spd(&mut rng, n)).unwrap();
            let rc = SymTensor2::new(random_sym(&mut rng, n)).unwrap();
            let g = SymTensor2::metric(&f);
            let r = scalar_of(&f, &rc).unwrap();
            let want = n as f64 * norm2(&f, &rc).unwrap() - r * r;
            let got = pinch_p(&f, &rc, &g).unwrap();
            assert!((got - want).abs() < 1e-10 * want.abs().max(1.0));
        }
    }

    #[test]
    fn agrees_with_curvature_quadratic_form_when_weyl_vanishes() {
        // P = |h|²|Rc|² − R·R_ikjl h^{ij} h^{kl} for conformally flat curvature
        let mut rng = trial_rng(37, 0, 0);
        for n in 3..8 {
            let f = PointFrame::new(random_spd(&mut rng, n)).unwrap();
            let rc = SymTensor2::new(random_sym(&mut rng, n)).unwrap();
            let h = SymTensor2::new(random_sym(&mut rng, n)).unwrap();
            let rm = lcf_curvature_from_ricci(&f, &rc).unwrap();
            let r = scalar_of(&f, &rc).unwrap();
            let want = norm2(&f, &h).unwrap() * norm2(&f, &rc).unwrap()
                - r * riemann_quadratic(&f, &rm, &h).unwrap();
            let got = pinch_p(&f, &rc, &h).unwrap();
            let scale = pinch_p_scale(&f, &rc, &h).unwrap();
            assert!((got - want).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn ratio_requires_positive_scalar() {
        let f = PointFrame::identity(4).unwrap();
        let rc = &SymTensor2::identity(4) * 3.0;
        assert_eq!(pinch_ratio(&f, &rc, 12.0).unwrap(), 0.25);
        assert_eq!(pinch_ratio(&f, &SymTensor2::zeros(4), 12.0).unwrap(), 0.0);
        let g = SymTensor2::identity(4);
        let kappa = 0.5;
        let r = 12.0 * kappa;
        assert!((pinch_ratio(&f, &g, r).unwrap() - 4.0 / (r * r)).abs() < 1e-15);
        assert!(matches!(
            pinch_ratio(&f, &g, 0.0),
            Err(Error::NonPositiveScalar(_))
        ));
        assert!(pinch_ratio(&f, &g, -1.0).is_err());
    }
}
