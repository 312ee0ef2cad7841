//! Randomized certification sweep over a list of dimensions.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    build_b, evaluate_f, evaluate_f_expanded, evaluate_q, jacobi_eigen, lemma42_proof_form,
    power_sums, spectral_certificate, timofte_certify, SpectrumH, TimofteSlice,
};
use crate::error::{require_dim, Error, Result};
use crate::sampling::{
    conjugate, normal_vec, random_orthogonal, random_spd, random_sym, trial_rng, SpectrumFamily,
};
use crate::tensor::{pinch_p, pinch_p_scale, PointFrame, SymTensor2};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyConfig {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Relative nonnegativity slack for `Q`, `min eig(B)` and `P`.
    pub tol: f64,
}

impl CertifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::Invalid("no dimensions given".into()));
        }
        for &n in &self.dims {
            require_dim(n)?;
        }
        if self.trials == 0 {
            return Err(Error::Invalid("trials must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Invalid("tol must be positive".into()));
        }
        Ok(())
    }
}

/// Worst-case margins over all trials for one dimension. Margins are
/// values divided by their scale, so the pass criterion is `margin >= −tol`
/// and `mismatch <= tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub n: usize,
    pub tol: f64,
    /// Worst scaled `(s₂ + α₀ᵀβ, (s₂ + α₀ᵀβ)² − nβᵀβ)`.
    pub lemma42: [f64; 2],
    pub spectrum: SpectrumSummary,
    pub q: QSummary,
    pub p_min_margin: f64,
    pub quartic_path_mismatch: f64,
    pub lemma_proof_mismatch: f64,
    pub slices: Vec<TimofteSlice>,
    pub timofte_verdict: bool,
    pub verdict: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub min_eig_margin: f64,
    pub oracle_mismatch: f64,
    pub vieta_sum_residual: f64,
    pub vieta_product_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QSummary {
    pub min_margin: f64,
    pub bilinear_mismatch: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub n: usize,
    pub trial: u64,
    pub check: String,
    pub value: f64,
    pub h: Vec<f64>,
    pub r: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
    pub results: Vec<DimensionReport>,
    pub verdict: bool,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Certified = 0,
    Counterexample = 1,
    InvalidInput = 2,
}

impl CertifyReport {
    pub fn exit_status(&self) -> ExitStatus {
        if self.verdict {
            ExitStatus::Certified
        } else {
            ExitStatus::Counterexample
        }
    }
}

struct TrialOutcome {
    q_margin: f64,
    bilinear: f64,
    min_eig_margin: f64,
    oracle: f64,
    vieta_sum: f64,
    vieta_product: f64,
    lemma_dot: f64,
    lemma_q: f64,
    lemma_proof: f64,
    quartic_paths: f64,
    p_margin: f64,
    h: Vec<f64>,
    r: Vec<f64>,
}

impl TrialOutcome {
    /// First failing check, in a fixed order.
    fn violation(&self, tol: &Tolerances, nonneg: f64) -> Option<(&'static str, f64)> {
        let checks = [
            ("q_nonnegative", -self.q_margin, nonneg),
            ("bilinear_form", self.bilinear, tol.identity),
            ("min_eigenvalue", -self.min_eig_margin, nonneg),
            ("spectrum_oracle", self.oracle, tol.spectrum_match),
            ("vieta_sum", self.vieta_sum, tol.identity),
            ("vieta_product", self.vieta_product, tol.identity),
            ("lemma_dot", -self.lemma_dot, tol.lemma),
            ("lemma_q", -self.lemma_q, tol.lemma),
            ("lemma_proof_form", self.lemma_proof, tol.identity),
            ("quartic_paths", self.quartic_paths, tol.identity),
            ("p_nonnegative", -self.p_margin, nonneg),
        ];
        checks
            .into_iter()
            .find(|(_, v, limit)| !(*v <= *limit))
            .map(|(name, v, _)| (name, v))
    }
}

fn run_trial(n: usize, seed: u64, index: u64) -> Result<TrialOutcome> {
    let mut rng = trial_rng(seed, n as u64, index);
    let family = SpectrumFamily::for_trial(index);
    let hv = family.sample(&mut rng, n);
    let r = normal_vec(&mut rng, n);
    let h = SpectrumH::new(hv.clone())?;
    let ps = power_sums(&h);
    let s2 = ps.s2;
    let tiny = f64::MIN_POSITIVE;

    let b = build_b(&h);
    let b_norm = b.norm();
    let rv = nalgebra::DVector::from_column_slice(&r);
    let q_lit = evaluate_q(&r, &h)?;
    let q_form = (rv.transpose() * &b * &rv)[(0, 0)];
    let q_scale = (rv.norm_squared() * b_norm).max(tiny);

    let cert = spectral_certificate(&h, 0.0);
    let oracle = jacobi_eigen(&b)?;
    let oracle_mismatch = cert
        .spectrum()
        .iter()
        .zip(&oracle)
        .map(|(a, o)| (a - o).abs())
        .fold(0.0, f64::max)
        / b_norm.max(tiny);
    let vieta_p_scale = cert.p.abs().max(tiny);
    let q_scale_vieta = (cert.eig_hi.abs() * cert.eig_lo.abs())
        .max(cert.q.abs())
        .max(cert.dot * cert.dot)
        .max(tiny);

    let (dot, lemma_q) = (cert.dot, cert.q);
    let lemma_scale = s2.max(tiny);
    let f_direct = evaluate_f(&h);
    let f_expanded = evaluate_f_expanded(&ps);

    // full-tensor P with h = diag(hv) rotated into a random coordinate frame
    let frame = PointFrame::new(random_spd(&mut rng, n))?;
    let o = random_orthogonal(&mut rng, n);
    let h_ortho = conjugate(&o, &DMatrix::from_diagonal(&rv_from(&hv)));
    let h_coord = SymTensor2::new(frame_lift(&frame, &h_ortho))?;
    let rc = SymTensor2::new(random_sym(&mut rng, n))?;
    let p = pinch_p(&frame, &rc, &h_coord)?;
    let p_scale = pinch_p_scale(&frame, &rc, &h_coord)?.max(tiny);
    let p_margin = p / p_scale;

    Ok(TrialOutcome {
        q_margin: q_lit / q_scale,
        bilinear: (q_lit - q_form).abs() / q_scale,
        min_eig_margin: cert.min_eig / s2.max(1.0),
        oracle: oracle_mismatch,
        vieta_sum: (cert.eig_lo + cert.eig_hi - cert.p).abs() / vieta_p_scale,
        vieta_product: (cert.eig_lo * cert.eig_hi - cert.q).abs() / q_scale_vieta,
        lemma_dot: dot / lemma_scale,
        lemma_q: lemma_q / (lemma_scale * lemma_scale),
        lemma_proof: (lemma42_proof_form(&h) - dot).abs() / lemma_scale,
        quartic_paths: (f_direct - f_expanded).abs() / (s2 * s2).max(tiny),
        p_margin,
        h: hv,
        r,
    })
}

fn rv_from(v: &[f64]) -> nalgebra::DVector<f64> {
    nalgebra::DVector::from_column_slice(v)
}

/// Coordinate components `L a Lᵀ` of orthonormal-frame components `a`.
fn frame_lift(frame: &PointFrame, a: &DMatrix<f64>) -> DMatrix<f64> {
    let l = frame.factor();
    let m = l * a * l.transpose();
    (&m + m.transpose()) * 0.5
}

fn certify_dimension(
    n: usize,
    cfg: &CertifyConfig,
    tol: &Tolerances,
) -> Result<(DimensionReport, Option<Counterexample>)> {
    let outcomes = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| run_trial(n, cfg.seed, i))
        .collect::<Result<Vec<_>>>()?;

    let mut counterexample = None;
    let mut worst = TrialOutcome {
        q_margin: f64::INFINITY,
        bilinear: 0.0,
        min_eig_margin: f64::INFINITY,
        oracle: 0.0,
        vieta_sum: 0.0,
        vieta_product: 0.0,
        lemma_dot: f64::INFINITY,
        lemma_q: f64::INFINITY,
        lemma_proof: 0.0,
        quartic_paths: 0.0,
        p_margin: f64::INFINITY,
        h: Vec::new(),
        r: Vec::new(),
    };
    for (i, o) in outcomes.iter().enumerate() {
        if counterexample.is_none() {
            if let Some((check, value)) = o.violation(tol, cfg.tol) {
                counterexample = Some(Counterexample {
                    n,
                    trial: i as u64,
                    check: check.to_string(),
                    value,
                    h: o.h.clone(),
                    r: o.r.clone(),
                });
            }
        }
        worst.q_margin = worst.q_margin.min(o.q_margin);
        worst.bilinear = worst.bilinear.max(o.bilinear);
        worst.min_eig_margin = worst.min_eig_margin.min(o.min_eig_margin);
        worst.oracle = worst.oracle.max(o.oracle);
        worst.vieta_sum = worst.vieta_sum.max(o.vieta_sum);
        worst.vieta_product = worst.vieta_product.max(o.vieta_product);
        worst.lemma_dot = worst.lemma_dot.min(o.lemma_dot);
        worst.lemma_q = worst.lemma_q.min(o.lemma_q);
        worst.lemma_proof = worst.lemma_proof.max(o.lemma_proof);
        worst.quartic_paths = worst.quartic_paths.max(o.quartic_paths);
        worst.p_margin = worst.p_margin.min(o.p_margin);
    }

    let timofte = timofte_certify(n)?;
    let verdict = timofte.verdict && counterexample.is_none();
    let report = DimensionReport {
        n,
        tol: cfg.tol,
        lemma42: [worst.lemma_dot, worst.lemma_q],
        spectrum: SpectrumSummary {
            min_eig_margin: worst.min_eig_margin,
            oracle_mismatch: worst.oracle,
            vieta_sum_residual: worst.vieta_sum,
            vieta_product_residual: worst.vieta_product,
        },
        q: QSummary {
            min_margin: worst.q_margin,
            bilinear_mismatch: worst.bilinear,
        },
        p_min_margin: worst.p_margin,
        quartic_path_mismatch: worst.quartic_paths,
        lemma_proof_mismatch: worst.lemma_proof,
        slices: timofte.slices,
        timofte_verdict: timofte.verdict,
        verdict,
    };
    Ok((report, counterexample))
}

/// Runs the sweep for every dimension in `cfg.dims`.
pub fn certify_dims(cfg: &CertifyConfig) -> Result<CertifyReport> {
    cfg.validate()?;
    let tol = Tolerances::default();
    let mut results = Vec::with_capacity(cfg.dims.len());
    let mut counterexample = None;
    for &n in &cfg.dims {
        let (report, cx) = certify_dimension(n, cfg, &tol)?;
        if counterexample.is_none() {
            counterexample = cx;
        }
        results.push(report);
    }
    let verdict = results.iter().all(|r| r.verdict);
    Ok(CertifyReport {
        seed: cfg.seed,
        trials: cfg.trials,
        tol: cfg.tol,
        results,
        verdict,
        counterexample,
    })
}
