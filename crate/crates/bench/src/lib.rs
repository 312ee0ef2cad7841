//! Fixed inputs for the kernel benchmarks, so every run measures the same data.

use pinch_core::certify::SpectrumH;
use pinch_core::flow::{CurvatureModel, FlowState};
use pinch_core::sampling::{normal_vec, random_spd, random_sym, trial_rng};
use pinch_core::tensor::{lcf_curvature_from_ricci, PointFrame, SymTensor2};
use pinch_core::AlgCurvature;

const SEED: u64 = 0xbe7c;

pub fn spectrum(n: usize) -> SpectrumH {
    let mut rng = trial_rng(SEED, n as u64, 0);
    SpectrumH::new(normal_vec(&mut rng, n)).expect("n >= 3")
}

pub struct PointData {
    pub frame: PointFrame,
    pub rm: AlgCurvature,
    pub rc: SymTensor2,
    pub h: SymTensor2,
}

/// A Weyl-flat curvature tensor with random metric, Ricci and `h`.
pub fn point(n: usize) -> PointData {
    let mut rng = trial_rng(SEED, n as u64, 1);
    let frame = PointFrame::new(random_spd(&mut rng, n)).expect("spd");
    let rc = SymTensor2::new(random_spd(&mut rng, n)).expect("symmetric");
    let h = SymTensor2::new(random_sym(&mut rng, n)).expect("symmetric");
    let rm = lcf_curvature_from_ricci(&frame, &rc).expect("dimensions agree");
    PointData { frame, rm, rc, h }
}

pub fn lcf_state(n: usize) -> FlowState {
    let p = point(n);
    FlowState::new(p.frame, CurvatureModel::ConformallyFlat { ricci: p.rc }, p.h)
        .expect("valid state")
}
