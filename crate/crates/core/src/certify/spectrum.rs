use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{require_dim, require_same, Error, Result};

/// Eigenvalues `h₁, …, hₙ` of a diagonalized symmetric 2-tensor, `n >= 3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpectrumH(Vec<f64>);

impl SpectrumH {
    pub fn new(h: Vec<f64>) -> Result<Self> {
        require_dim(h.len())?;
        if h.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(h))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(self.0.iter().map(|x| c * x).collect())
    }
}

/// Power sums `s_k = Σ h_iᵏ` for `k = 0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSums {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub s4: f64,
}

pub fn power_sums(h: &SpectrumH) -> PowerSums {
    let mut ps = PowerSums {
        s0: h.dim() as f64,
        s1: 0.0,
        s2: 0.0,
        s3: 0.0,
        s4: 0.0,
    };
    for &x in h.values() {
        let x2 = x * x;
        ps.s1 += x;
        ps.s2 += x2;
        ps.s3 += x2 * x;
        ps.s4 += x2 * x2;
    }
    ps
}

/// `β = (s₁² − s₂)α₀ / (2(n−1)(n−2)) − s₁α₁/(n−2) + α₂/(n−2)` with
/// `α₀ᵀβ` and `βᵀβ` cached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaVector {
    pub beta: Vec<f64>,
    pub dot_alpha0: f64,
    pub norm2: f64,
}

pub fn beta_vector(h: &SpectrumH) -> BetaVector {
    let n = h.dim() as f64;
    let ps = power_sums(h);
    let shift = (ps.s1 * ps.s1 - ps.s2) / (2.0 * (n - 1.0) * (n - 2.0));
    let beta: Vec<f64> = h
        .values()
        .iter()
        .map(|&x| shift + (x * x - ps.s1 * x) / (n - 2.0))
        .collect();
    BetaVector {
        dot_alpha0: beta.iter().sum(),
        norm2: beta.iter().map(|b| b * b).sum(),
        beta,
    }
}

/// `B = s₂ I + α₀βᵀ + βα₀ᵀ`.
pub fn build_b(h: &SpectrumH) -> DMatrix<f64> {
    let n = h.dim();
    let s2 = power_sums(h).s2;
    let beta = beta_vector(h).beta;
    DMatrix::from_fn(n, n, |i, j| {
        let diag = if i == j { s2 } else { 0.0 };
        diag + beta[i] + beta[j]
    })
}

/// Literal evaluation of
/// `Q = Σr²·Σh² + (2/(n−2))Σr·(−Σh·Σrh + Σrh²) + (Σr)²((Σh)² − Σh²)/((n−1)(n−2))`.
pub fn evaluate_q(r: &[f64], h: &SpectrumH) -> Result<f64> {
    require_same(h.dim(), r.len())?;
    let n = h.dim() as f64;
    let hv = h.values();
    let sum_r: f64 = r.iter().sum();
    let sum_r2: f64 = r.iter().map(|x| x * x).sum();
    let sum_h: f64 = hv.iter().sum();
    let sum_h2: f64 = hv.iter().map(|x| x * x).sum();
    let sum_rh: f64 = r.iter().zip(hv).map(|(a, b)| a * b).sum();
    let sum_rh2: f64 = r.iter().zip(hv).map(|(a, b)| a * b * b).sum();
    Ok(sum_r2 * sum_h2
        + 2.0 / (n - 2.0) * sum_r * (-sum_h * sum_rh + sum_rh2)
        + sum_r * sum_r * (sum_h * sum_h - sum_h2) / ((n - 1.0) * (n - 2.0)))
}

/// Closed-form spectrum of `B` with a nonnegativity verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCertificate {
    pub n: usize,
    pub s2: f64,
    /// `s₂ + α₀ᵀβ`
    pub dot: f64,
    /// `nβᵀβ`
    pub disc: f64,
    pub p: f64,
    pub q: f64,
    /// `s₂`, multiplicity `n − 2`.
    pub eig_bulk: f64,
    pub eig_lo: f64,
    pub eig_hi: f64,
    pub min_eig: f64,
    pub verdict: bool,
}

impl SpectralCertificate {
    /// All `n` eigenvalues, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut v = vec![self.eig_bulk; self.n - 2];
        v.push(self.eig_lo);
        v.push(self.eig_hi);
        v.sort_by(f64::total_cmp);
        v
    }
}

pub fn spectral_certificate(h: &SpectrumH, tol: f64) -> SpectralCertificate {
    let n = h.dim();
    let s2 = power_sums(h).s2;
    let beta = beta_vector(h);
    let dot = s2 + beta.dot_alpha0;
    let disc = n as f64 * beta.norm2;
    let root = disc.sqrt();
    let eig_lo = dot - root;
    let eig_hi = dot + root;
    let min_eig = s2.min(eig_lo);
    SpectralCertificate {
        n,
        s2,
        dot,
        disc,
        p: 2.0 * dot,
        q: dot * dot - disc,
        eig_bulk: s2,
        eig_lo,
        eig_hi,
        min_eig,
        verdict: min_eig >= -tol,
    }
}

/// `(s₂ + α₀ᵀβ, (s₂ + α₀ᵀβ)² − nβᵀβ)`.
pub fn lemma42_quantities(h: &SpectrumH) -> (f64, f64) {
    let s2 = power_sums(h).s2;
    let beta = beta_vector(h);
    let dot = s2 + beta.dot_alpha0;
    (dot, dot * dot - h.dim() as f64 * beta.norm2)
}

/// `α₁ᵀ A α₁` with `A = (1 + 1/(2(n−1))) I − α₀α₀ᵀ/(2(n−1))`, an
/// independent route to `s₂ + α₀ᵀβ`.
pub fn lemma42_proof_form(h: &SpectrumH) -> f64 {
    let n = h.dim();
    let c = 1.0 / (2.0 * (n as f64 - 1.0));
    let a = DMatrix::identity(n, n) * (1.0 + c) - DMatrix::from_element(n, n, c);
    let v = nalgebra::DVector::from_column_slice(h.values());
    (v.transpose() * a * &v)[(0, 0)]
}

/// The quartic `f(h) = (s₂ + α₀ᵀβ)² − nβᵀβ`, evaluated from `β`.
pub fn evaluate_f(h: &SpectrumH) -> f64 {
    lemma42_quantities(h).1
}

/// The same quartic expanded in power sums only:
/// `α₀ᵀβ` and `βᵀβ` are rewritten with `α_iᵀα_j = s_{i+j}`.
pub fn evaluate_f_expanded(ps: &PowerSums) -> f64 {
    let n = ps.s0;
    let (s1, s2, s3, s4) = (ps.s1, ps.s2, ps.s3, ps.s4);
    let dot = (1.0 + 1.0 / (2.0 * (n - 1.0))) * s2 - s1 * s1 / (2.0 * (n - 1.0));
    let shift = (s1 * s1 - s2) / (2.0 * (n - 1.0) * (n - 2.0));
    let beta2 = n * shift * shift
        + (s1 * s1 * s2 + s4 - 2.0 * s1 * s3) / ((n - 2.0) * (n - 2.0))
        + 2.0 * shift * (s2 - s1 * s1) / (n - 2.0);
    dot * dot - n * beta2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(v: &[f64]) -> SpectrumH {
        SpectrumH::new(v.to_vec()).unwrap()
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol * b.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn power_sum_examples() {
        let ps = power_sums(&h(&[1., 1., 1., 1.]));
        assert_eq!((ps.s1, ps.s2, ps.s3, ps.s4), (4., 4., 4., 4.));
        let ps = power_sums(&h(&[0., 0., 1., 1.]));
        assert_eq!((ps.s1, ps.s2, ps.s3, ps.s4), (2., 2., 2., 2.));
        let ps = power_sums(&h(&[-1., 1., 1., 1.]));
        assert_eq!((ps.s0, ps.s1, ps.s2, ps.s3, ps.s4), (4., 2., 4., 2., 4.));
    }

    #[test]
    fn beta_examples() {
        let b = beta_vector(&h(&[1., 1., 1., 1.]));
        assert_eq!(b.beta, vec![-0.5; 4]);
        assert_eq!((b.dot_alpha0, b.norm2), (-2.0, 1.0));

        let b = beta_vector(&h(&[0., 0., 1., 1.]));
        for (got, want) in b.beta.iter().zip([1. / 6., 1. / 6., -1. / 3., -1. / 3.]) {
            assert_close(*got, want, 1e-15);
        }
        assert_close(b.norm2, 5.0 / 18.0, 1e-15);

        let b = beta_vector(&h(&[0.; 5]));
        assert!(b.beta.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn b_matrix_examples() {
        let b = build_b(&h(&[1., 1., 1., 1.]));
        let want = DMatrix::from_fn(4, 4, |i, j| if i == j { 3.0 } else { -1.0 });
        assert_eq!(b, want);
        assert_eq!(build_b(&h(&[0.; 4])), DMatrix::zeros(4, 4));
    }

    #[test]
    fn q_examples() {
        // h = α₀: Q = 4|r|² − (Σr)²
        let r = [0.3, -1.2, 2.0, 0.7];
        let want = 4.0 * r.iter().map(|x| x * x).sum::<f64>() - r.iter().sum::<f64>().powi(2);
        assert_close(evaluate_q(&r, &h(&[1.; 4])).unwrap(), want, 1e-14);
        assert_eq!(evaluate_q(&[0.; 4], &h(&[1., 2., 3., 4.])).unwrap(), 0.0);
        assert_close(
            evaluate_q(&[1., 0., 0., 0.], &h(&[1., 0., 0., 0.])).unwrap(),
            1.0,
            1e-15,
        );
        assert!(evaluate_q(&[1., 0., 0.], &h(&[1., 0., 0., 0.])).is_err());
    }

    #[test]
    fn certificate_examples() {
        let c = spectral_certificate(&h(&[1.; 4]), 1e-12);
        assert_eq!(c.spectrum(), vec![0., 4., 4., 4.]);
        assert_eq!(c.min_eig, 0.0);
        assert!(c.verdict);
        let c = spectral_certificate(&h(&[0.; 6]), 0.0);
        assert!(c.spectrum().iter().all(|x| *x == 0.0));
        assert!(c.verdict);
    }

    #[test]
    fn lemma_examples() {
        assert_eq!(lemma42_quantities(&h(&[1.; 4])), (2.0, 0.0));
        let (d, q) = lemma42_quantities(&h(&[0., 0., 1., 1.]));
        assert_close(d, 5. / 3., 1e-15);
        assert_close(q, 5. / 3., 1e-14);
        let (d, q) = lemma42_quantities(&h(&[-1., 1., 1., 1.]));
        assert_close(d, 4., 1e-15);
        assert_close(q, 4., 1e-14);
        for v in [[1., 1., 1., 1.], [0., 0., 1., 1.], [-1., 1., 1., 1.]] {
            let s = h(&v);
            assert_close(lemma42_proof_form(&s), lemma42_quantities(&s).0, 1e-14);
        }
    }

    #[test]
    fn quartic_spot_values() {
        for (v, want) in [
            (vec![0., 0., 1., 1.], 5. / 3.),
            (vec![-1., 1., 1., 1.], 4.),
            (vec![1., 1., 1., 1.], 0.),
        ] {
            let s = h(&v);
            assert_close(evaluate_f(&s), want, 1e-12);
            assert_close(evaluate_f_expanded(&power_sums(&s)), want, 1e-12);
        }
    }

    #[test]
    fn rejects_small_or_nonfinite() {
        assert!(SpectrumH::new(vec![1., 2.]).is_err());
        assert!(SpectrumH::new(vec![1., f64::NAN, 0.]).is_err());
    }
}
