use rayon::prelude::*;

use super::{evaluate_q, SpectrumH};
use crate::sampling::{trial_rng, unit_vector};

const DOMAIN: u64 = 0x0a11_ce00;

/// Smallest `Q(γ, h)` over `trials` random unit vectors `γ`.
///
/// Trial `i` draws from its own stream, so the result does not depend on
/// thread count.
pub fn oracle_min_q(h: &SpectrumH, trials: usize, seed: u64) -> f64 {
    let n = h.dim();
    (0..trials.max(1) as u64)
        .into_par_iter()
        .map(|i| {
            let gamma = unit_vector(&mut trial_rng(seed, DOMAIN, i), n);
            evaluate_q(&gamma, h).expect("lengths agree")
        })
        .reduce(|| f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::spectral_certificate;
    use crate::sampling::{normal_vec, trial_rng};

    #[test]
    fn all_ones_minimum_approaches_zero() {
        let h = SpectrumH::new(vec![1.0; 4]).unwrap();
        let m = oracle_min_q(&h, 20_000, 3);
        assert!((0.0..0.05).contains(&m), "{m}");
    }

    #[test]
    fn zero_spectrum() {
        let h = SpectrumH::new(vec![0.0; 5]).unwrap();
        assert_eq!(oracle_min_q(&h, 10, 1), 0.0);
    }

    #[test]
    fn bounded_below_by_min_eigenvalue() {
        let mut rng = trial_rng(43, 0, 0);
        for n in 3..9 {
            let h = SpectrumH::new(normal_vec(&mut rng, n)).unwrap();
            let cert = spectral_certificate(&h, 0.0);
            assert!(oracle_min_q(&h, 500, n as u64) >= cert.min_eig - 1e-10);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let h = SpectrumH::new(vec![0.3, -1.0, 2.0, 0.5]).unwrap();
        assert_eq!(oracle_min_q(&h, 1000, 9), oracle_min_q(&h, 1000, 9));
    }
}
