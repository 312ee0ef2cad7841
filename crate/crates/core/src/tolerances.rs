//! Every numerical threshold used by the crate lives here.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative tolerance for derived tensor identities (Bianchi, Weyl
    /// trace-freeness, Ricci round trips).
    pub identity: f64,
    /// Relative tolerance on `L Lᵀ = g`.
    pub cholesky: f64,
    /// Relative asymmetry accepted when ingesting a symmetric matrix.
    pub symmetry: f64,
    /// Off-diagonal Frobenius norm target for the Jacobi oracle, relative to `‖M‖`.
    pub jacobi_offdiag: f64,
    /// Maximum number of cyclic Jacobi sweeps.
    pub jacobi_max_sweeps: usize,
    /// Singularity floor for the determinant lemma, relative to the Hadamard bound.
    pub singular_floor: f64,
    /// Nonnegativity slack for `Q`, the spectrum of `B` and `P`, relative to scale.
    pub nonneg: f64,
    /// Nonnegativity slack for `s₂ + α₀ᵀβ` and `f`, relative to scale.
    pub lemma: f64,
    /// Closed-form spectrum vs Jacobi oracle, relative to `‖B‖`.
    pub spectrum_match: f64,
    /// Relative per-step slack for the monotone ratio monitor.
    pub monotone_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        DEFAULT
    }
}

pub const DEFAULT: Tolerances = Tolerances {
    identity: 1e-10,
    cholesky: 1e-12,
    symmetry: 1e-12,
    jacobi_offdiag: 1e-13,
    jacobi_max_sweeps: 100,
    singular_floor: 1e-12,
    nonneg: 1e-9,
    lemma: 1e-10,
    spectrum_match: 1e-8,
    monotone_slack: 1e-8,
};
