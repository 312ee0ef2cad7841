use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;

use super::{PointFrame, SymTensor2};
use crate::error::{require_dim, require_same, Error, Result};
use crate::tolerances::DEFAULT as TOL;

/// Dense algebraic curvature tensor `R_ikjl`, all indices down.
///
/// The two antisymmetries and pair exchange are enforced by construction;
/// the first Bianchi identity is validated on ingestion.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgCurvature {
    n: usize,
    c: Vec<f64>,
}

#[inline]
fn idx(n: usize, i: usize, k: usize, j: usize, l: usize) -> usize {
    ((i * n + k) * n + j) * n + l
}

impl AlgCurvature {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            c: vec![0.0; n * n * n * n],
        }
    }

    /// Builds a tensor from raw components in `i,k,j,l` order.
    ///
    /// Components must satisfy every symmetry up to relative roundoff; the
    /// stored tensor is their exact projection.
    pub fn from_components(n: usize, c: Vec<f64>) -> Result<Self> {
        require_same(n * n * n * n, c.len())?;
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let raw = Self { n, c };
        let floor = TOL.identity * raw.max_abs().max(1.0);

        let mut first = 0.0f64;
        let mut second = 0.0f64;
        let mut pair = 0.0f64;
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        let v = raw.get(i, k, j, l);
                        first = first.max((v + raw.get(k, i, j, l)).abs());
                        second = second.max((v + raw.get(i, k, l, j)).abs());
                        pair = pair.max((v - raw.get(j, l, i, k)).abs());
                    }
                }
            }
        }
        for (identity, residual) in [
            ("antisymmetry in the first pair", first),
            ("antisymmetry in the second pair", second),
            ("pair exchange symmetry", pair),
        ] {
            if residual > floor {
                return Err(Error::CurvatureSymmetry { identity, residual });
            }
        }

        let out = raw.projected();
        let residual = out.bianchi_residual();
        if residual > floor {
            return Err(Error::CurvatureSymmetry {
                identity: "first Bianchi identity",
                residual,
            });
        }
        Ok(out)
    }

    /// Exact projection onto the antisymmetric / pair-symmetric subspace.
    fn projected(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in (i + 1)..n {
                for j in 0..n {
                    for l in (j + 1)..n {
                        // one representative per pair-exchange orbit
                        if (i, k) > (j, l) {
                            continue;
                        }
                        let v = (self.get(i, k, j, l) - self.get(k, i, j, l)
                            + self.get(k, i, l, j)
                            - self.get(i, k, l, j)
                            + self.get(j, l, i, k)
                            - self.get(l, j, i, k)
                            + self.get(l, j, k, i)
                            - self.get(j, l, k, i))
                            / 8.0;
                        out.set_orbit(i, k, j, l, v);
                    }
                }
            }
        }
        out
    }

    fn set_orbit(&mut self, i: usize, k: usize, j: usize, l: usize, v: f64) {
        let n = self.n;
        for (a, b, c, d, s) in [
            (i, k, j, l, v),
            (k, i, j, l, -v),
            (i, k, l, j, -v),
            (k, i, l, j, v),
        ] {
            self.c[idx(n, a, b, c, d)] = s;
            self.c[idx(n, c, d, a, b)] = s;
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize, j: usize, l: usize) -> f64 {
        self.c[idx(self.n, i, k, j, l)]
    }

    /// Components in `i,k,j,l` row-major order.
    pub fn components(&self) -> &[f64] {
        &self.c
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `max |R_ikjl + R_kjil + R_jikl|`.
    pub fn bianchi_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        let s = self.get(i, k, j, l) + self.get(k, j, i, l) + self.get(j, i, k, l);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// Components in the `g`-orthonormal frame.
    pub(crate) fn to_orthonormal(&self, frame: &PointFrame) -> Self {
        let n = self.n;
        let m = frame.l_inv();
        let mut cur = self.c.clone();
        let mut next = vec![0.0; cur.len()];
        // contract one slot at a time: out[..a..] = Σ_x m[a][x] cur[..x..]
        for slot in 0..4 {
            let stride = n.pow(3 - slot as u32);
            for (base, out) in next.iter_mut().enumerate() {
                let a = (base / stride) % n;
                let rest = base - a * stride;
                let mut s = 0.0;
                for x in 0..=a {
                    // m is lower triangular
                    s += m[(a, x)] * cur[rest + x * stride];
                }
                *out = s;
            }
            std::mem::swap(&mut cur, &mut next);
        }
        Self { n, c: cur }
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }
}

impl Add for &AlgCurvature {
    type Output = AlgCurvature;
    fn add(self, rhs: &AlgCurvature) -> AlgCurvature {
        AlgCurvature {
            n: self.n,
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &AlgCurvature {
    type Output = AlgCurvature;
    fn sub(self, rhs: &AlgCurvature) -> AlgCurvature {
        AlgCurvature {
            n: self.n,
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<f64> for &AlgCurvature {
    type Output = AlgCurvature;
    fn mul(self, rhs: f64) -> AlgCurvature {
        AlgCurvature {
            n: self.n,
            c: self.c.iter().map(|a| a * rhs).collect(),
        }
    }
}

/// Kulkarni–Nomizu product
/// `(a ⊙ b)_ikjl = a_ij b_kl + a_kl b_ij − a_il b_jk − a_jk b_il`.
///
/// For symmetric `a`, `b` the result is an algebraic curvature tensor.
pub fn kulkarni_nomizu(a: &DMatrix<f64>, b: &DMatrix<f64>) -> AlgCurvature {
    let n = a.nrows();
    let mut out = AlgCurvature::zeros(n);
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                for l in 0..n {
                    out.c[idx(n, i, k, j, l)] = a[(i, j)] * b[(k, l)] + a[(k, l)] * b[(i, j)]
                        - a[(i, l)] * b[(j, k)]
                        - a[(j, k)] * b[(i, l)];
                }
            }
        }
    }
    out.projected()
}

/// Space form: `R_ikjl = κ (g_ij g_kl − g_il g_jk)`.
pub fn const_curvature(frame: &PointFrame, kappa: f64) -> AlgCurvature {
    let g = frame.metric();
    &kulkarni_nomizu(g, g) * (0.5 * kappa)
}

/// `R_ij = g^{kl} R_ikjl`.
pub fn ricci_of(frame: &PointFrame, rm: &AlgCurvature) -> Result<SymTensor2> {
    require_same(frame.dim(), rm.dim())?;
    Ok(SymTensor2::symmetrized(ricci_raw(frame, rm)))
}

pub(crate) fn ricci_raw(frame: &PointFrame, rm: &AlgCurvature) -> DMatrix<f64> {
    let n = rm.n;
    let gi = frame.inverse();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..n {
                for l in 0..n {
                    s += gi[(k, l)] * rm.get(i, k, j, l);
                }
            }
            out[(i, j)] = s;
        }
    }
    out
}

/// `R = g^{ij} R_ij`.
pub fn scalar_of(frame: &PointFrame, rc: &SymTensor2) -> Result<f64> {
    super::trace(frame, rc)
}

/// Frobenius norm `|Rm|` of the full component array in the orthonormal frame.
pub fn riemann_norm(frame: &PointFrame, rm: &AlgCurvature) -> Result<f64> {
    require_same(frame.dim(), rm.dim())?;
    Ok(rm
        .to_orthonormal(frame)
        .c
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt())
}

/// `R_ikjl h^{ij} h^{kl}`.
pub fn riemann_quadratic(frame: &PointFrame, rm: &AlgCurvature, h: &SymTensor2) -> Result<f64> {
    require_same(frame.dim(), rm.dim())?;
    require_same(frame.dim(), h.dim())?;
    let up = frame.raise(h.matrix());
    let action = curvature_action(rm, &up);
    Ok(action.component_mul(&up).sum())
}

/// `(Rm ♯ u)_ij = R_ikjl u^{kl}` for a contravariant `u`.
fn curvature_action(rm: &AlgCurvature, up: &DMatrix<f64>) -> DMatrix<f64> {
    let n = rm.n;
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..n {
                for l in 0..n {
                    s += rm.get(i, k, j, l) * up[(k, l)];
                }
            }
            out[(i, j)] = s;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylReport {
    pub weyl: AlgCurvature,
    pub ricci: SymTensor2,
    pub scalar: f64,
    pub weyl_norm: f64,
}

/// The Ricci-determined part
/// `(1/(n−2)) Rc ⊙ g − R/(2(n−1)(n−2)) g ⊙ g`.
fn schouten_part(frame: &PointFrame, rc: &SymTensor2, scalar: f64) -> AlgCurvature {
    let n = frame.dim() as f64;
    let g = frame.metric();
    let a = &kulkarni_nomizu(rc.matrix(), g) * (1.0 / (n - 2.0));
    let b = &kulkarni_nomizu(g, g) * (scalar / (2.0 * (n - 1.0) * (n - 2.0)));
    &a - &b
}

/// Splits `rm` into its Weyl part and Ricci data.
pub fn weyl_of(frame: &PointFrame, rm: &AlgCurvature) -> Result<WeylReport> {
    require_dim(frame.dim())?;
    let ricci = ricci_of(frame, rm)?;
    let scalar = scalar_of(frame, &ricci)?;
    let weyl = rm - &schouten_part(frame, &ricci, scalar);
    let weyl_norm = riemann_norm(frame, &weyl)?;
    Ok(WeylReport {
        weyl,
        ricci,
        scalar,
        weyl_norm,
    })
}

/// Curvature with vanishing Weyl part and the prescribed Ricci tensor.
pub fn lcf_curvature_from_ricci(frame: &PointFrame, rc: &SymTensor2) -> Result<AlgCurvature> {
    require_same(frame.dim(), rc.dim())?;
    let scalar = scalar_of(frame, rc)?;
    Ok(schouten_part(frame, rc, scalar))
}

/// Zeroth-order part of the Lichnerowicz Laplacian:
/// `2 R_ikjl h^{kl} − R_ik h^k_j − R_jk h^k_i`.
pub fn lichnerowicz_reaction(
    frame: &PointFrame,
    rm: &AlgCurvature,
    rc: &SymTensor2,
    h: &SymTensor2,
) -> Result<SymTensor2> {
    let n = frame.dim();
    require_same(n, rm.dim())?;
    require_same(n, rc.dim())?;
    require_same(n, h.dim())?;
    let up = frame.raise(h.matrix());
    let mixed = rc.matrix() * frame.inverse() * h.matrix();
    let out = curvature_action(rm, &up) * 2.0 - &mixed - mixed.transpose();
    Ok(SymTensor2::symmetrized(out))
}
