//! Nonnegativity certificate for the quadratic form
//! `Q(r, h) = rᵀ (s₂ I + α₀βᵀ + βα₀ᵀ) r` built from the eigenvalues `h` of
//! a symmetric 2-tensor.
//!
//! The certificate has two independent legs:
//! * the closed-form spectrum of `B` (eigenvalue `s₂` with multiplicity
//!   `n−2` plus `s₂ + α₀ᵀβ ± √(nβᵀβ)`), whose smaller root is nonnegative
//!   exactly when `f = (s₂+α₀ᵀβ)² − nβᵀβ ≥ 0`;
//! * nonnegativity of the symmetric quartic `f`, reduced to the one-variable
//!   slices `φ_k` with exact integer coefficients.
//!
//! [`jacobi_eigen`], [`oracle_min_q`] and [`det_lemma_check`] are
//! independent numerical oracles for the closed forms.

mod det_lemma;
mod jacobi;
mod oracle;
mod spectrum;
mod sweep;
mod timofte;

pub use det_lemma::det_lemma_check;
pub use jacobi::jacobi_eigen;
pub use oracle::oracle_min_q;
pub use spectrum::{
    beta_vector, build_b, evaluate_f, evaluate_f_expanded, evaluate_q, lemma42_proof_form,
    lemma42_quantities, power_sums, spectral_certificate, BetaVector, PowerSums,
    SpectralCertificate, SpectrumH,
};
pub use sweep::{
    certify_dims, CertifyConfig, CertifyReport, Counterexample, DimensionReport, ExitStatus,
};
pub use timofte::{
    expected_discriminant, timofte_certify, timofte_slice, TimofteCertificate, TimofteSlice,
};
