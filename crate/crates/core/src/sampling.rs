//! Seeded random inputs for oracles and sweeps.
//!
//! A single user seed expands into independent ChaCha streams indexed by
//! `(domain, trial)`, so trial `i` sees the same numbers regardless of how
//! many trials run or on which thread.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::tensor::{kulkarni_nomizu, AlgCurvature};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent generator for trial `index` of sweep `domain` under `seed`.
pub fn trial_rng(seed: u64, domain: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut state = splitmix64(seed) ^ splitmix64(domain.wrapping_add(0x5851_f42d_4c95_7f2d));
    for chunk in key.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn normal_vec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| normal(rng)).collect()
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v = normal_vec(rng, n);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Symmetric matrix with standard normal upper triangle.
pub fn random_sym<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = normal(rng);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Well-conditioned positive definite matrix `A Aᵀ/n + I/2`.
pub fn random_spd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| normal(rng));
    let m = &a * a.transpose() / n as f64 + DMatrix::identity(n, n) * 0.5;
    (&m + m.transpose()) * 0.5
}

/// Haar-ish orthogonal matrix from the QR factor of a Gaussian matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| normal(rng));
    a.qr().q()
}

/// Generic algebraic curvature tensor: a sum of `n` Kulkarni–Nomizu
/// products of Gaussian symmetric matrices.
pub fn random_curvature<R: Rng + ?Sized>(rng: &mut R, n: usize) -> AlgCurvature {
    let mut out = AlgCurvature::zeros(n);
    for _ in 0..n {
        let a = random_sym(rng, n);
        let b = random_sym(rng, n);
        out = &out + &kulkarni_nomizu(&a, &b);
    }
    &out * (1.0 / n as f64)
}

/// Families of eigenvalue vectors for `h`. Two-valued vectors are the
/// extremal configurations of the quartic certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumFamily {
    Gaussian,
    RankOne,
    TwoValued,
    ZeroSum,
}

impl SpectrumFamily {
    pub const ALL: [SpectrumFamily; 4] = [
        SpectrumFamily::Gaussian,
        SpectrumFamily::RankOne,
        SpectrumFamily::TwoValued,
        SpectrumFamily::ZeroSum,
    ];

    pub fn for_trial(index: u64) -> Self {
        Self::ALL[(index % 4) as usize]
    }

    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R, n: usize) -> Vec<f64> {
        match self {
            SpectrumFamily::Gaussian => normal_vec(rng, n),
            SpectrumFamily::RankOne => {
                let mut h = vec![0.0; n];
                h[rng.random_range(0..n)] = normal(rng);
                h
            }
            SpectrumFamily::TwoValued => {
                let k = rng.random_range(1..n);
                let (t, u) = (normal(rng), normal(rng));
                let mut h: Vec<f64> = (0..n).map(|i| if i < k { t } else { u }).collect();
                // shuffle so the slice is not always a prefix
                for i in (1..n).rev() {
                    h.swap(i, rng.random_range(0..=i));
                }
                h
            }
            SpectrumFamily::ZeroSum => {
                let mut h = normal_vec(rng, n);
                let mean = h.iter().sum::<f64>() / n as f64;
                h.iter_mut().for_each(|x| *x -= mean);
                h
            }
        }
    }
}

/// `O a Oᵀ`.
pub fn conjugate(o: &DMatrix<f64>, a: &DMatrix<f64>) -> DMatrix<f64> {
    let m = o * a * o.transpose();
    (&m + m.transpose()) * 0.5
}

pub fn to_dvector(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}
