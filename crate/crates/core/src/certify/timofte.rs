use serde::{Deserialize, Serialize};

use crate::error::{require_dim, Error, Result};

/// The slice `φ_k(t) = f(t,…,t,1,…,1)` (`k` copies of `t`) in closed form:
///
/// `φ_k(t) = k(n−k)(t−1)²(a₁t² + b₁t + c₁) / ((n−1)(n−2)²)`
///
/// with integer `a₁`, `b₁`, `c₁`. At `k = 1` this is `(t−1)²t²`, at
/// `k = n−1` it is `(t−1)²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimofteSlice {
    pub n: usize,
    pub k: usize,
    pub a1: i64,
    pub b1: i64,
    pub c1: i64,
    pub prefactor_num: i64,
    pub prefactor_den: i64,
    pub discriminant: i64,
    /// `b₁² − 4a₁c₁ = −4(k−1)(n−1−k)n(n−2)²`, checked in integers.
    pub discriminant_identity: bool,
    /// Minimum of `a₁t² + b₁t + c₁` over `[−1, 1]`.
    pub quadratic_min: f64,
    /// Minimum of `φ_k` over `[−1, 1]`.
    pub min_on_interval: f64,
    pub argmin: f64,
}

impl TimofteSlice {
    pub fn quadratic(&self, t: f64) -> f64 {
        (self.a1 as f64 * t + self.b1 as f64) * t + self.c1 as f64
    }

    pub fn phi(&self, t: f64) -> f64 {
        let d = t - 1.0;
        self.prefactor_num as f64 * d * d * self.quadratic(t) / self.prefactor_den as f64
    }

    /// The two-value configuration `h₁ = … = h_k = t, h_{k+1} = … = hₙ = 1`.
    pub fn configuration(&self, t: f64) -> Vec<f64> {
        (0..self.n)
            .map(|i| if i < self.k { t } else { 1.0 })
            .collect()
    }
}

/// `−4(k−1)(n−1−k)n(n−2)²` in exact arithmetic.
pub fn expected_discriminant(n: usize, k: usize) -> i128 {
    let (n, k) = (n as i128, k as i128);
    -4 * (k - 1) * (n - 1 - k) * n * (n - 2) * (n - 2)
}

fn narrow(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Invalid(format!("coefficient {v} overflows i64")))
}

/// Exact minimum of `a t² + b t + c` on `[−1, 1]` as a rational `(num, den)`
/// with `den > 0`, plus the minimizer.
fn quadratic_min(a: i128, b: i128, c: i128) -> ((i128, i128), f64) {
    let left = ((a - b + c, 1), -1.0);
    let right = ((a + b + c, 1), 1.0);
    let endpoint = if left.0 .0 <= right.0 .0 { left } else { right };
    // vertex −b/(2a) lies in [−1, 1] iff |b| <= 2a
    if a > 0 && b.abs() <= 2 * a {
        // value 4ac − b² over 4a
        let vertex = ((4 * a * c - b * b, 4 * a), -(b as f64) / (2.0 * a as f64));
        let vertex_le = vertex.0 .0 * endpoint.0 .1 <= endpoint.0 .0 * vertex.0 .1;
        if vertex_le {
            return vertex;
        }
    }
    endpoint
}

pub fn timofte_slice(n: usize, k: usize) -> Result<TimofteSlice> {
    require_dim(n)?;
    if k < 1 || k > n - 1 {
        return Err(Error::IndexOutOfRange { k, max: n - 1 });
    }
    let (ni, ki) = (n as i128, k as i128);
    let a1 = ((ni - 1) * ki - 1) * (ni - 1 - ki);
    let b1 = -2 * (ki - 1) * (ni - 1 - ki) * (ni - 1);
    let c1 = (ki - 1) * ((ni - ki) * (ni - 1) - 1);
    let disc = b1 * b1 - 4 * a1 * c1;
    let prefactor_num = ki * (ni - ki);
    let prefactor_den = (ni - 1) * (ni - 2) * (ni - 2);

    let ((qnum, qden), qarg) = quadratic_min(a1, b1, c1);
    let quadratic_min = qnum as f64 / qden as f64;

    let mut slice = TimofteSlice {
        n,
        k,
        a1: narrow(a1)?,
        b1: narrow(b1)?,
        c1: narrow(c1)?,
        prefactor_num: narrow(prefactor_num)?,
        prefactor_den: narrow(prefactor_den)?,
        discriminant: narrow(disc)?,
        discriminant_identity: disc == expected_discriminant(n, k),
        quadratic_min,
        min_on_interval: 0.0,
        argmin: 1.0,
    };
    if qnum < 0 {
        // the quadratic dips below zero somewhere on [−1, 1]; locate the
        // minimum of φ_k numerically
        let (t, v) = minimize_on_grid(|t| slice.phi(t), qarg);
        slice.min_on_interval = v;
        slice.argmin = t;
    }
    Ok(slice)
}

fn minimize_on_grid(phi: impl Fn(f64) -> f64, hint: f64) -> (f64, f64) {
    const POINTS: usize = 4001;
    let mut best = (hint, phi(hint));
    for i in 0..POINTS {
        let t = -1.0 + 2.0 * i as f64 / (POINTS - 1) as f64;
        let v = phi(t);
        if v < best.1 {
            best = (t, v);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimofteCertificate {
    pub n: usize,
    pub slices: Vec<TimofteSlice>,
    pub verdict: bool,
}

/// Checks `φ_k >= 0` on `[−1, 1]` for every `k = 1, …, n−1`, which
/// certifies the symmetric quartic `f >= 0` on all of `ℝⁿ`.
pub fn timofte_certify(n: usize) -> Result<TimofteCertificate> {
    require_dim(n)?;
    let slices = (1..n)
        .map(|k| timofte_slice(n, k))
        .collect::<Result<Vec<_>>>()?;
    let verdict = slices
        .iter()
        .all(|s| s.discriminant_identity && s.min_on_interval >= 0.0);
    Ok(TimofteCertificate { n, slices, verdict })
}
