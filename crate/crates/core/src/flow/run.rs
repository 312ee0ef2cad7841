use std::io::Write;

use serde::{Deserialize, Serialize};

use super::state::{ricci_norm2, step_rk4_from};
use super::{lemma31_bound, reaction_rhs, riem_norm, scalar_rate, CurvatureModel, FlowState};
use crate::error::{require_dim, Error, Result};
use crate::tensor::{norm2, pinch_p, AlgCurvature, PointFrame, SymTensor2};
use crate::tolerances::DEFAULT as TOL;

pub const CSV_HEADER: [&str; 9] = [
    "t", "R", "ric2", "rm", "h2", "ratio", "bound15", "bound31", "P",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Sphere,
    Lcf,
    Frozen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedH {
    /// `h₀ = g₀`
    Metric,
    /// `h₀ = Rc(0)`
    Ricci,
}

/// Initial perturbation: row-major components or a named tensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialH {
    Named(NamedH),
    Components(Vec<f64>),
}

fn default_stride() -> usize {
    1
}
fn default_c() -> f64 {
    0.5
}
fn default_tol() -> f64 {
    1e-6
}

/// Flow run configuration, also the JSON run-config schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelKind,
    pub n: usize,
    /// Initial metric, row-major; identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ricci: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub riemann: Option<Vec<f64>>,
    pub h0: InitialH,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default = "default_c")]
    pub c_exponent: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Builds and validates the initial state.
    pub fn initial_state(&self) -> Result<FlowState> {
        let n = self.n;
        require_dim(n)?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Invalid("dt must be positive".into()));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::Invalid("t_end must be positive".into()));
        }
        if self.stride == 0 {
            return Err(Error::Invalid("stride must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Invalid("tol must be positive".into()));
        }
        if !self.c_exponent.is_finite() {
            return Err(Error::NonFinite);
        }
        let frame = match &self.g {
            Some(g) => PointFrame::from_row_major(n, g)?,
            None => PointFrame::identity(n)?,
        };
        let unexpected = |field: &str| {
            Err(Error::Invalid(format!(
                "`{field}` is not used by the {:?} model",
                self.model
            )))
        };
        let model = match self.model {
            ModelKind::Sphere => {
                if self.ricci.is_some() {
                    return unexpected("ricci");
                }
                if self.riemann.is_some() {
                    return unexpected("riemann");
                }
                let kappa = self
                    .kappa0
                    .ok_or_else(|| Error::Invalid("sphere model needs `kappa0`".into()))?;
                CurvatureModel::ConstantCurvature { kappa }
            }
            ModelKind::Lcf => {
                if self.kappa0.is_some() {
                    return unexpected("kappa0");
                }
                if self.riemann.is_some() {
                    return unexpected("riemann");
                }
                let ricci = self
                    .ricci
                    .as_ref()
                    .ok_or_else(|| Error::Invalid("lcf model needs `ricci`".into()))?;
                CurvatureModel::ConformallyFlat {
                    ricci: SymTensor2::from_row_major(n, ricci)?,
                }
            }
            ModelKind::Frozen => {
                if self.kappa0.is_some() {
                    return unexpected("kappa0");
                }
                let riemann = self
                    .riemann
                    .as_ref()
                    .ok_or_else(|| Error::Invalid("frozen model needs `riemann`".into()))?;
                let rm = AlgCurvature::from_components(n, riemann.clone())?;
                let rc = match &self.ricci {
                    Some(r) => Some(SymTensor2::from_row_major(n, r)?),
                    None => None,
                };
                CurvatureModel::frozen(&frame, rm, rc)?
            }
        };
        let h = match &self.h0 {
            InitialH::Named(NamedH::Metric) => SymTensor2::metric(&frame),
            InitialH::Named(NamedH::Ricci) => model.ricci(&frame),
            InitialH::Components(c) => SymTensor2::from_row_major(n, c)?,
        };
        let state = FlowState::new(frame, model, h)?;
        let r = state.scalar();
        if !(r > 0.0) {
            return Err(Error::NonPositiveScalar(r));
        }
        Ok(state)
    }
}

/// One telemetry sample. The bound columns are `None` once `t >= 1/(8K₀)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TelemetryRow {
    pub t: f64,
    #[serde(rename = "R")]
    pub scalar: f64,
    pub ric2: f64,
    pub rm: f64,
    pub h2: f64,
    pub ratio: f64,
    pub bound15: Option<f64>,
    pub bound31: Option<f64>,
    #[serde(rename = "P")]
    pub p: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Telemetry {
    pub rows: Vec<TelemetryRow>,
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

impl Telemetry {
    /// RFC-4180 CSV with 17 significant digits; empty cells for vacuous bounds.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            let opt = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
            w.write_record([
                fmt17(r.t),
                fmt17(r.scalar),
                fmt17(r.ric2),
                fmt17(r.rm),
                fmt17(r.h2),
                fmt17(r.ratio),
                opt(r.bound15),
                opt(r.bound31),
                fmt17(r.p),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is ascii"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitorOutcome {
    pub name: String,
    /// Whether the monitor applies to this model.
    pub checked: bool,
    pub passed: bool,
    /// Largest observed violation measure; `<= tolerance` passes.
    /// `None` when the monitor never fired.
    pub worst: Option<f64>,
    pub tolerance: f64,
    pub first_violation: Option<TelemetryRow>,
}

impl MonitorOutcome {
    fn new(name: &str, checked: bool, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            checked,
            passed: true,
            worst: None,
            tolerance,
            first_violation: None,
        }
    }

    fn observe(&mut self, value: f64, row: impl FnOnce() -> TelemetryRow) {
        if !self.checked {
            return;
        }
        self.worst = match self.worst {
            Some(w) if !(value > w) && !value.is_nan() => Some(w),
            _ => Some(value),
        };
        if !(value <= self.tolerance) && self.first_violation.is_none() {
            self.passed = false;
            self.first_violation = Some(row());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub model: ModelKind,
    pub n: usize,
    pub steps: usize,
    pub t_final: f64,
    pub k0: f64,
    pub horizon: f64,
    pub ratio0: f64,
    pub c_exponent: f64,
    pub monitors: Vec<MonitorOutcome>,
    pub fault: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub telemetry: Telemetry,
    pub summary: RunSummary,
    pub final_state: FlowState,
}

fn sample(state: &FlowState, ratio0: f64, c: f64) -> Result<TelemetryRow> {
    let rc = state.ricci();
    let scalar = state.scalar();
    let h2 = norm2(&state.frame, &state.h)?;
    let (bound15, bound31) = match lemma31_bound(state.k0, state.t) {
        Ok(b) => (
            Some(ratio0 * (1.0 - 8.0 * state.k0 * state.t).powf(-c)),
            Some(b),
        ),
        Err(_) => (None, None),
    };
    Ok(TelemetryRow {
        t: state.t,
        scalar,
        ric2: ricci_norm2(state),
        rm: riem_norm(state)?,
        h2,
        ratio: h2 / (scalar * scalar),
        bound15,
        bound31,
        p: pinch_p(&state.frame, &rc, &state.h)?,
    })
}

/// Integrates the reaction system with fixed step `dt` up to `t_end`.
///
/// Monitors, evaluated at every step:
/// * `monotone`: the ratio `|h|²/R²` never increases (Weyl-flat models);
/// * `blowup_bound`: `ratio ≤ ratio(0)(1 − 8K₀t)^(−c)` while `t < 1/(8K₀)`;
/// * `scalar_identity`: `|dR/dt − 2|Rc|²| ≤ tol·|Rc|²` (evolving backgrounds);
/// * `curvature_bound`: `|Rm| ≤ K₀/(1 − 8K₀t)` (space forms).
///
/// Invalid configurations are errors. A step that breaks the state (metric
/// no longer positive definite, `R ≤ 0`, non-finite values) ends the run
/// early with `fault` set.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    let mut state = cfg.initial_state()?;
    let n = state.dim();
    let ratio0 = state.ratio()?;
    let c = cfg.c_exponent;
    let k0 = state.k0;
    let horizon = state.horizon();
    let weyl_flat = state.model.is_weyl_flat();
    let evolving = !matches!(state.model, CurvatureModel::Frozen { .. });
    let space_form = matches!(state.model, CurvatureModel::ConstantCurvature { .. });

    let mut monotone = MonitorOutcome::new("monotone", weyl_flat, TOL.monotone_slack);
    let mut blowup = MonitorOutcome::new("blowup_bound", true, cfg.tol);
    let mut scalar_id = MonitorOutcome::new("scalar_identity", evolving, cfg.tol);
    let mut curvature = MonitorOutcome::new("curvature_bound", space_form, 0.0);

    let mut telemetry = Telemetry::default();
    telemetry.rows.push(sample(&state, ratio0, c)?);

    let steps_total = (cfg.t_end / cfg.dt - 1e-9).ceil().max(1.0) as usize;
    let mut deriv = reaction_rhs(&state)?;
    let mut ratio_prev = ratio0;
    let mut fault = None;
    let mut steps = 0;

    let check = |state: &FlowState,
                 deriv: &super::Derivative,
                 ratio: f64,
                 ratio_prev: f64,
                 monotone: &mut MonitorOutcome,
                 blowup: &mut MonitorOutcome,
                 scalar_id: &mut MonitorOutcome|
     -> Result<()> {
        let row = || sample(state, ratio0, c).expect("state already validated");
        if state.t > 0.0 {
            monotone.observe(
                (ratio - ratio_prev) / ratio_prev.max(f64::MIN_POSITIVE),
                row,
            );
        }
        if state.t < horizon {
            let bound = ratio0 * (1.0 - 8.0 * k0 * state.t).powf(-c);
            blowup.observe(ratio / bound - 1.0, row);
        }
        let ric2 = ricci_norm2(state);
        let rate = scalar_rate(state, deriv);
        scalar_id.observe((rate - 2.0 * ric2).abs() / ric2.max(f64::MIN_POSITIVE), row);
        Ok(())
    };
    check(
        &state,
        &deriv,
        ratio0,
        ratio0,
        &mut monotone,
        &mut blowup,
        &mut scalar_id,
    )?;

    for i in 1..=steps_total {
        let t_target = if i == steps_total {
            cfg.t_end
        } else {
            i as f64 * cfg.dt
        };
        let next = step_rk4_from(&state, &deriv, t_target - state.t).and_then(|mut s| {
            s.t = t_target;
            let r = s.scalar();
            if !(r > 0.0) {
                return Err(Error::IntegrationFault {
                    reason: format!("scalar curvature dropped to {r}"),
                    last_good: Box::new(state.clone()),
                });
            }
            let d = reaction_rhs(&s)?;
            Ok((s, d))
        });
        let (next, next_deriv) = match next {
            Ok(v) => v,
            Err(e) => {
                fault = Some(e.to_string());
                break;
            }
        };
        state = next;
        deriv = next_deriv;
        steps = i;

        let ratio = state.ratio()?;
        check(
            &state,
            &deriv,
            ratio,
            ratio_prev,
            &mut monotone,
            &mut blowup,
            &mut scalar_id,
        )?;
        ratio_prev = ratio;

        if i % cfg.stride == 0 || i == steps_total {
            let row = sample(&state, ratio0, c)?;
            if space_form {
                if let Some(b) = row.bound31 {
                    let r = row.clone();
                    curvature.observe(row.rm - b * (1.0 + f64::EPSILON * 8.0), || r);
                }
            }
            telemetry.rows.push(row);
        }
    }

    let monitors = vec![monotone, blowup, scalar_id, curvature];
    let passed = fault.is_none() && monitors.iter().all(|m| m.passed);
    Ok(RunOutcome {
        summary: RunSummary {
            model: cfg.model,
            n,
            steps,
            t_final: state.t,
            k0,
            horizon,
            ratio0,
            c_exponent: c,
            monitors,
            fault,
            passed,
        },
        telemetry,
        final_state: state,
    })
}
