use nalgebra::DVector;
use pinch_core::certify::{
    build_b, evaluate_f, evaluate_f_expanded, evaluate_q, expected_discriminant, jacobi_eigen,
    lemma42_proof_form, lemma42_quantities, oracle_min_q, power_sums, spectral_certificate,
    timofte_slice, SpectrumH,
};
use pinch_core::sampling::{normal, normal_vec, trial_rng, SpectrumFamily};
use proptest::prelude::*;

fn sample_h(seed: u64, n: usize, i: u64) -> (SpectrumH, Vec<f64>) {
    let mut rng = trial_rng(seed, n as u64, i);
    let h = SpectrumFamily::for_trial(i).sample(&mut rng, n);
    let r = normal_vec(&mut rng, n);
    (SpectrumH::new(h).unwrap(), r)
}

#[test]
fn bilinear_form_matches_literal_q() {
    for n in 3..=10 {
        for i in 0..10_000 {
            let (h, r) = sample_h(11, n, i);
            let b = build_b(&h);
            let rv = DVector::from_column_slice(&r);
            let form = (rv.transpose() * &b * &rv)[(0, 0)];
            let lit = evaluate_q(&r, &h).unwrap();
            let scale = rv.norm_squared() * b.norm();
            assert!(
                (form - lit).abs() <= 1e-10 * scale.max(1e-300),
                "n={n} i={i}"
            );
        }
    }
}

#[test]
fn closed_form_spectrum_matches_jacobi() {
    for n in 3..=10 {
        for i in 0..1_000 {
            let (h, _) = sample_h(12, n, i);
            let b = build_b(&h);
            let cert = spectral_certificate(&h, 1e-9);
            let oracle = jacobi_eigen(&b).unwrap();
            let scale = b.norm().max(1.0);
            for (a, o) in cert.spectrum().iter().zip(&oracle) {
                assert!((a - o).abs() <= 1e-8 * scale, "n={n} i={i}: {a} vs {o}");
            }
            let rel = scale * scale;
            assert!((cert.eig_lo + cert.eig_hi - cert.p).abs() <= 1e-10 * scale);
            assert!((cert.eig_lo * cert.eig_hi - cert.q).abs() <= 1e-10 * rel);
            assert!(cert.min_eig >= -1e-9 * cert.s2.max(1.0));
        }
    }
}

#[test]
fn lemma_inequalities_and_proof_form() {
    for n in 3..=10 {
        for i in 0..2_000 {
            let (h, _) = sample_h(13, n, i);
            let s2 = power_sums(&h).s2;
            let (dot, q) = lemma42_quantities(&h);
            assert!(dot >= -1e-10 * s2.max(1.0));
            assert!(q >= -1e-10 * (s2 * s2).max(1.0));
            let proof = lemma42_proof_form(&h);
            assert!((proof - dot).abs() <= 1e-10 * s2.max(1.0));
            let f = evaluate_f(&h);
            let fe = evaluate_f_expanded(&power_sums(&h));
            assert!(
                (f - fe).abs() <= 1e-10 * (s2 * s2).max(1.0),
                "n={n} {f} {fe}"
            );
            assert!((f - q).abs() <= 1e-12 * (s2 * s2).max(1.0));
        }
    }
}

#[test]
fn oracle_never_beats_smallest_eigenvalue() {
    for n in 3..=8 {
        for i in 0..50 {
            let (h, _) = sample_h(14, n, i);
            let cert = spectral_certificate(&h, 1e-9);
            let scale = build_b(&h).norm().max(1.0);
            let m = oracle_min_q(&h, 500, i);
            assert!(m >= cert.min_eig - 1e-10 * scale);
        }
    }
}

#[test]
fn slices_agree_with_direct_evaluation() {
    for n in 4..=12 {
        for k in 1..n {
            let slice = timofte_slice(n, k).unwrap();
            for j in 0..=400 {
                let t = -2.0 + 4.0 * j as f64 / 400.0;
                let h = SpectrumH::new(slice.configuration(t)).unwrap();
                let direct = evaluate_f(&h);
                let closed = slice.phi(t);
                let scale = power_sums(&h).s2.powi(2).max(1.0);
                assert!(
                    (direct - closed).abs() <= 1e-9 * scale,
                    "n={n} k={k} t={t}: {direct} vs {closed}"
                );
            }
        }
    }
}

#[test]
fn discriminant_identity_is_exact() {
    for n in 4..=200 {
        for k in 2..=n - 2 {
            let s = timofte_slice(n, k).unwrap();
            let d = (s.b1 as i128).pow(2) - 4 * s.a1 as i128 * s.c1 as i128;
            assert_eq!(d, expected_discriminant(n, k), "n={n} k={k}");
            assert_eq!(d, s.discriminant as i128);
            assert!(s.discriminant_identity);
        }
    }
}

fn spectrum_strategy() -> impl Strategy<Value = Vec<f64>> {
    (3usize..=10).prop_flat_map(|n| prop::collection::vec(-10.0f64..10.0, n))
}

proptest! {
    #[test]
    fn quartic_is_homogeneous(h in spectrum_strategy(), c in -5.0f64..5.0) {
        let h = SpectrumH::new(h).unwrap();
        let f = evaluate_f(&h);
        let fc = evaluate_f(&h.scaled(c));
        let s2 = power_sums(&h).s2;
        prop_assert!((fc - c.powi(4) * f).abs() <= 1e-10 * (c.powi(4) * s2 * s2).max(1.0));
    }

    #[test]
    fn q_scales_jointly(h in spectrum_strategy(), seed in any::<u64>(), a in -4.0f64..4.0, c in -4.0f64..4.0) {
        let n = h.len();
        let mut rng = trial_rng(seed, 0, 0);
        let r: Vec<f64> = (0..n).map(|_| normal(&mut rng)).collect();
        let ar: Vec<f64> = r.iter().map(|x| a * x).collect();
        let h = SpectrumH::new(h).unwrap();
        let q = evaluate_q(&r, &h).unwrap();
        let qs = evaluate_q(&ar, &h.scaled(c)).unwrap();
        let scale = a * a * c * c * build_b(&h).norm() * r.iter().map(|x| x * x).sum::<f64>();
        prop_assert!((qs - a * a * c * c * q).abs() <= 1e-10 * scale.max(1.0));
    }
}
