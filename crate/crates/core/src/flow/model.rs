use crate::error::{require_same, Error, Result};
use crate::tensor::{
    const_curvature, lcf_curvature_from_ricci, ricci_of, AlgCurvature, PointFrame, SymTensor2,
};
use crate::tolerances::DEFAULT as TOL;

/// Background curvature carried along the flow.
#[derive(Debug, Clone, PartialEq)]
pub enum CurvatureModel {
    /// Space form with sectional curvature `kappa`.
    ConstantCurvature { kappa: f64 },
    /// Vanishing Weyl tensor; the full curvature is rebuilt from `ricci`
    /// whenever it is queried.
    ConformallyFlat { ricci: SymTensor2 },
    /// Curvature held fixed in a comoving orthonormal frame, so the metric
    /// is fixed too. Not a Ricci flow solution; it isolates the `h` equation.
    Frozen { rm: AlgCurvature, rc: SymTensor2 },
}

impl CurvatureModel {
    /// Frozen model with `rc` checked against the contraction of `rm`.
    pub fn frozen(frame: &PointFrame, rm: AlgCurvature, rc: Option<SymTensor2>) -> Result<Self> {
        require_same(frame.dim(), rm.dim())?;
        let contracted = ricci_of(frame, &rm)?;
        let rc = match rc {
            Some(rc) => {
                let resid = (rc.matrix() - contracted.matrix()).amax();
                if resid > TOL.identity * contracted.matrix().amax().max(1.0) {
                    return Err(Error::Invalid(format!(
                        "frozen ricci disagrees with the contraction of riemann by {resid:e}"
                    )));
                }
                rc
            }
            None => contracted,
        };
        Ok(CurvatureModel::Frozen { rm, rc })
    }

    pub fn name(&self) -> &'static str {
        match self {
            CurvatureModel::ConstantCurvature { .. } => "sphere",
            CurvatureModel::ConformallyFlat { .. } => "lcf",
            CurvatureModel::Frozen { .. } => "frozen",
        }
    }

    /// Whether the Weyl tensor vanishes identically, so the pinching ratio
    /// is monotone along the reaction flow.
    pub fn is_weyl_flat(&self) -> bool {
        !matches!(self, CurvatureModel::Frozen { .. })
    }

    pub fn ricci(&self, frame: &PointFrame) -> SymTensor2 {
        match self {
            CurvatureModel::ConstantCurvature { kappa } => {
                &SymTensor2::metric(frame) * (kappa * (frame.dim() as f64 - 1.0))
            }
            CurvatureModel::ConformallyFlat { ricci } => ricci.clone(),
            CurvatureModel::Frozen { rc, .. } => rc.clone(),
        }
    }

    /// Full curvature and Ricci tensor in the current frame.
    pub fn materialize(&self, frame: &PointFrame) -> Result<(AlgCurvature, SymTensor2)> {
        Ok(match self {
            CurvatureModel::ConstantCurvature { kappa } => {
                (const_curvature(frame, *kappa), self.ricci(frame))
            }
            CurvatureModel::ConformallyFlat { ricci } => {
                (lcf_curvature_from_ricci(frame, ricci)?, ricci.clone())
            }
            CurvatureModel::Frozen { rm, rc } => (rm.clone(), rc.clone()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_curvature, random_spd, random_sym, trial_rng};
    use crate::tensor::weyl_of;

    #[test]
    fn conformally_flat_materializes_weyl_free() {
        let mut rng = trial_rng(51, 0, 0);
        for n in 4..8 {
            let f = PointFrame::new(random_spd(&mut rng, n)).unwrap();
            let ricci = SymTensor2::new(random_sym(&mut rng, n)).unwrap();
            let m = CurvatureModel::ConformallyFlat { ricci };
            let (rm, _) = m.materialize(&f).unwrap();
            assert!(weyl_of(&f, &rm).unwrap().weyl_norm < 1e-10);
        }
    }

    #[test]
    fn frozen_checks_ricci() {
        let mut rng = trial_rng(53, 0, 0);
        let f = PointFrame::new(random_spd(&mut rng, 4)).unwrap();
        let rm = random_curvature(&mut rng, 4);
        let rc = ricci_of(&f, &rm).unwrap();
        assert!(CurvatureModel::frozen(&f, rm.clone(), Some(rc.clone())).is_ok());
        let wrong = &rc + &SymTensor2::identity(4);
        assert!(CurvatureModel::frozen(&f, rm, Some(wrong)).is_err());
    }
}
