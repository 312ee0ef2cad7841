use nalgebra::DMatrix;

use super::CurvatureModel;
use crate::error::{require_same, Error, Result};
use crate::tensor::{
    lichnerowicz_reaction, norm2, pinch_p, pinch_ratio, riemann_norm, scalar_of, PointFrame,
    SymTensor2,
};

/// Time, metric, background curvature and perturbation `h` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub frame: PointFrame,
    pub model: CurvatureModel,
    pub h: SymTensor2,
    /// `|Rm|` at `t = 0`.
    pub k0: f64,
}

impl FlowState {
    pub fn new(frame: PointFrame, model: CurvatureModel, h: SymTensor2) -> Result<Self> {
        require_same(frame.dim(), h.dim())?;
        if let CurvatureModel::ConformallyFlat { ricci } = &model {
            require_same(frame.dim(), ricci.dim())?;
        }
        let (rm, _) = model.materialize(&frame)?;
        let k0 = riemann_norm(&frame, &rm)?;
        Ok(Self {
            t: 0.0,
            frame,
            model,
            h,
            k0,
        })
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn ricci(&self) -> SymTensor2 {
        self.model.ricci(&self.frame)
    }

    pub fn scalar(&self) -> f64 {
        scalar_of(&self.frame, &self.ricci()).expect("dimensions agree")
    }

    /// `|h|² / R²`.
    pub fn ratio(&self) -> Result<f64> {
        pinch_ratio(&self.frame, &self.h, self.scalar())
    }

    /// `T′ = 1/(8K₀)`, after which the curvature bound is vacuous.
    pub fn horizon(&self) -> f64 {
        if self.k0 > 0.0 {
            1.0 / (8.0 * self.k0)
        } else {
            f64::INFINITY
        }
    }

    fn is_finite(&self) -> bool {
        let model_ok = match &self.model {
            CurvatureModel::ConstantCurvature { kappa } => kappa.is_finite(),
            CurvatureModel::ConformallyFlat { ricci } => ricci.is_finite(),
            CurvatureModel::Frozen { .. } => true,
        };
        self.t.is_finite() && self.h.is_finite() && model_ok
    }
}

/// Time derivative of the background curvature parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelRate {
    Kappa(f64),
    Ricci(SymTensor2),
    Frozen,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Derivative {
    pub dg: SymTensor2,
    pub dh: SymTensor2,
    pub dmodel: ModelRate,
}

impl Derivative {
    fn combine(terms: &[(f64, &Derivative)]) -> Derivative {
        let n = terms[0].1.dg.dim();
        let mut dg = DMatrix::zeros(n, n);
        let mut dh = DMatrix::zeros(n, n);
        let mut dk = 0.0;
        let mut dr = DMatrix::zeros(n, n);
        for (w, d) in terms {
            dg += d.dg.matrix() * *w;
            dh += d.dh.matrix() * *w;
            match &d.dmodel {
                ModelRate::Kappa(k) => dk += w * k,
                ModelRate::Ricci(r) => dr += r.matrix() * *w,
                ModelRate::Frozen => {}
            }
        }
        let dmodel = match &terms[0].1.dmodel {
            ModelRate::Kappa(_) => ModelRate::Kappa(dk),
            ModelRate::Ricci(_) => ModelRate::Ricci(SymTensor2::symmetrized(dr)),
            ModelRate::Frozen => ModelRate::Frozen,
        };
        Derivative {
            dg: SymTensor2::symmetrized(dg),
            dh: SymTensor2::symmetrized(dh),
            dmodel,
        }
    }
}

/// Right-hand side of the reaction system.
///
/// `dg = −2Rc` and `dh` is the Lichnerowicz reaction of `h`. Space forms
/// evolve by `dκ = 2(n−1)κ²`; conformally flat backgrounds evolve their
/// Ricci tensor by the same reaction applied to `Rc`.
///
/// Frozen backgrounds are written in an orthonormal frame that moves with
/// the flow, where the Ricci terms of the reaction cancel against the
/// shrinking metric: `g` stays fixed and `dh = 2 Rm(h)`, so
/// `d|h|²/dt = 4 Rm(h, h)` as on a genuine solution.
pub fn reaction_rhs(state: &FlowState) -> Result<Derivative> {
    let frame = &state.frame;
    let (rm, rc) = state.model.materialize(frame)?;
    let n = state.dim() as f64;
    if let CurvatureModel::Frozen { .. } = state.model {
        let none = SymTensor2::zeros(state.dim());
        return Ok(Derivative {
            dg: none.clone(),
            dh: lichnerowicz_reaction(frame, &rm, &none, &state.h)?,
            dmodel: ModelRate::Frozen,
        });
    }
    let dh = lichnerowicz_reaction(frame, &rm, &rc, &state.h)?;
    let (dg, dmodel) = match &state.model {
        CurvatureModel::ConstantCurvature { kappa } => (
            &rc * -2.0,
            ModelRate::Kappa(2.0 * (n - 1.0) * kappa * kappa),
        ),
        CurvatureModel::ConformallyFlat { .. } => {
            let dricci = lichnerowicz_reaction(frame, &rm, &rc, &rc)?;
            (&rc * -2.0, ModelRate::Ricci(dricci))
        }
        CurvatureModel::Frozen { .. } => unreachable!(),
    };
    Ok(Derivative { dg, dh, dmodel })
}

fn advance(state: &FlowState, d: &Derivative, dt: f64) -> Result<FlowState> {
    let g = state.frame.metric() + d.dg.matrix() * dt;
    let frame = PointFrame::new(g)?;
    let h = SymTensor2::symmetrized(state.h.matrix() + d.dh.matrix() * dt);
    let model = match (&state.model, &d.dmodel) {
        (CurvatureModel::ConstantCurvature { kappa }, ModelRate::Kappa(dk)) => {
            CurvatureModel::ConstantCurvature {
                kappa: kappa + dt * dk,
            }
        }
        (CurvatureModel::ConformallyFlat { ricci }, ModelRate::Ricci(dr)) => {
            CurvatureModel::ConformallyFlat {
                ricci: SymTensor2::symmetrized(ricci.matrix() + dr.matrix() * dt),
            }
        }
        (m @ CurvatureModel::Frozen { .. }, ModelRate::Frozen) => m.clone(),
        _ => return Err(Error::Invalid("derivative does not match model".into())),
    };
    let next = FlowState {
        t: state.t + dt,
        frame,
        model,
        h,
        k0: state.k0,
    };
    if !next.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(next)
}

fn fault(state: &FlowState, err: Error) -> Error {
    match err {
        e @ Error::IntegrationFault { .. } => e,
        other => Error::IntegrationFault {
            reason: other.to_string(),
            last_good: Box::new(state.clone()),
        },
    }
}

/// One classical RK4 step with a precomputed first stage.
pub(crate) fn step_rk4_from(state: &FlowState, k1: &Derivative, dt: f64) -> Result<FlowState> {
    if !(dt > 0.0) {
        return Err(Error::Invalid(format!(
            "step size must be positive, got {dt}"
        )));
    }
    let stages = || -> Result<FlowState> {
        let k2 = reaction_rhs(&advance(state, k1, 0.5 * dt)?)?;
        let k3 = reaction_rhs(&advance(state, &k2, 0.5 * dt)?)?;
        let k4 = reaction_rhs(&advance(state, &k3, dt)?)?;
        let w = dt / 6.0;
        let d = Derivative::combine(&[(1.0, k1), (2.0, &k2), (2.0, &k3), (1.0, &k4)]);
        advance(state, &d, w).map(|mut s| {
            s.t = state.t + dt;
            s
        })
    };
    stages().map_err(|e| fault(state, e))
}

/// One classical four-stage Runge–Kutta step of the coupled system.
pub fn step_rk4(state: &FlowState, dt: f64) -> Result<FlowState> {
    let k1 = reaction_rhs(state).map_err(|e| fault(state, e))?;
    step_rk4_from(state, &k1, dt)
}

/// Closed-form shrinking sphere: `g(t) = (1 − 2(n−1)κ₀t) δ`,
/// `κ(t) = κ₀ / (1 − 2(n−1)κ₀t)`, with `h ≡ δ`, which the reaction leaves fixed.
pub fn sphere_exact(n: usize, kappa0: f64, t: f64) -> Result<FlowState> {
    if !(kappa0 > 0.0) {
        return Err(Error::Invalid(format!(
            "kappa0 must be positive, got {kappa0}"
        )));
    }
    let extinction = 1.0 / (2.0 * (n as f64 - 1.0) * kappa0);
    if !(t >= 0.0 && t < extinction) {
        return Err(Error::Horizon {
            t,
            horizon: extinction,
        });
    }
    let s = 1.0 - t / extinction;
    let h = SymTensor2::identity(n);
    let mut state = FlowState::new(
        PointFrame::identity(n)?,
        CurvatureModel::ConstantCurvature { kappa: kappa0 },
        h,
    )?;
    state.frame = PointFrame::new(DMatrix::identity(n, n) * s)?;
    state.model = CurvatureModel::ConstantCurvature { kappa: kappa0 / s };
    state.t = t;
    Ok(state)
}

/// Frobenius norm `|Rm|` of the current curvature.
pub fn riem_norm(state: &FlowState) -> Result<f64> {
    let (rm, _) = state.model.materialize(&state.frame)?;
    riemann_norm(&state.frame, &rm)
}

/// `K₀ / (1 − 8K₀t)` for `t < 1/(8K₀)`.
pub fn lemma31_bound(k0: f64, t: f64) -> Result<f64> {
    let x = 8.0 * k0 * t;
    if !(x < 1.0) {
        return Err(Error::Horizon {
            t,
            horizon: 1.0 / (8.0 * k0),
        });
    }
    Ok(k0 / (1.0 - x))
}

/// `d(|h|²/R²)/dt = −4P/R³` at a spatially homogeneous state with
/// vanishing Weyl tensor.
pub fn pinch_reaction_derivative(state: &FlowState) -> Result<f64> {
    if !state.model.is_weyl_flat() {
        return Err(Error::Invalid(
            "the pinching derivative needs a Weyl-flat background".into(),
        ));
    }
    let rc = state.ricci();
    let r = scalar_of(&state.frame, &rc)?;
    if !(r > 0.0) {
        return Err(Error::NonPositiveScalar(r));
    }
    Ok(-4.0 * pinch_p(&state.frame, &rc, &state.h)? / (r * r * r))
}

/// `dR/dt` along `d`, by the chain rule through `R = g^{ij}R_ij`.
pub fn scalar_rate(state: &FlowState, d: &Derivative) -> f64 {
    let frame = &state.frame;
    let n = state.dim() as f64;
    let rc = state.ricci();
    let d_ricci = match (&state.model, &d.dmodel) {
        (CurvatureModel::ConstantCurvature { kappa }, ModelRate::Kappa(dk)) => {
            (frame.metric() * *dk + d.dg.matrix() * *kappa) * (n - 1.0)
        }
        (_, ModelRate::Ricci(dr)) => dr.matrix().clone(),
        _ => DMatrix::zeros(state.dim(), state.dim()),
    };
    let from_metric = -frame.raise(d.dg.matrix()).component_mul(rc.matrix()).sum();
    from_metric + frame.inverse().component_mul(&d_ricci).sum()
}

pub(crate) fn ricci_norm2(state: &FlowState) -> f64 {
    norm2(&state.frame, &state.ricci()).expect("dimensions agree")
}
