//! Pointwise tensor algebra at a single point of a Riemannian manifold.
//!
//! Components are given in an arbitrary coordinate frame with all indices
//! down. Curvature uses the `R_ikjl` slot order: antisymmetric in `(i,k)` and
//! in `(j,l)`, symmetric under pair exchange, and Ricci is the contraction
//! `R_ij = g^{kl} R_ikjl` over the second and fourth slots.

mod curvature;
mod document;
mod frame;
mod pinch;
mod sym;

pub use curvature::{
    const_curvature, kulkarni_nomizu, lcf_curvature_from_ricci, lichnerowicz_reaction, ricci_of,
    riemann_norm, riemann_quadratic, scalar_of, weyl_of, AlgCurvature, WeylReport,
};
pub use document::{ResolvedTensors, TensorDocument};
pub use frame::PointFrame;
pub use pinch::{pinch_p, pinch_p_scale, pinch_ratio};
pub use sym::{inner, norm2, orthonormalize, trace, SymTensor2};
