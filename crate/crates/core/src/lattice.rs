//! Short-vector enumeration in ℤ^r for a positive-definite Gram matrix.
//!
//! The quadratic form is written as Σ_i q_ii (x_i + Σ_{j>i} q_ij x_j)² and
//! coordinates are fixed from the last one down (Fincke–Pohst). Bounds are
//! widened by a relative slack so floating error never drops a candidate;
//! callers that need exact membership re-test each vector.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

const SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
pub(crate) struct QuadForm {
    n: usize,
    /// q[i*n+i] = q_ii, q[i*n+j] = q_ij for j > i.
    q: Vec<f64>,
}

impl QuadForm {
    pub(crate) fn new(gram: &[f64], n: usize) -> Result<Self> {
        let mut q = gram.to_vec();
        for i in 0..n {
            for j in i + 1..n {
                let v = q[i * n + j];
                q[j * n + i] = v;
            }
        }
        for i in 0..n {
            let d = q[i * n + i];
            if d.is_nan() || d <= 0.0 {
                return Err(Error::InvalidMetric("Gram matrix is not positive definite".into()));
            }
            for j in i + 1..n {
                q[j * n + i] = q[i * n + j];
                q[i * n + j] /= d;
            }
            for k in i + 1..n {
                for l in k..n {
                    let v = q[k * n + i] * q[i * n + l];
                    q[k * n + l] -= v;
                }
            }
        }
        Ok(Self { n, q })
    }

    fn half_width(&self, i: usize, budget: f64) -> f64 {
        (budget.max(0.0) / self.q[i * self.n + i]).sqrt() * (1.0 + SLACK) + SLACK
    }

    fn center(&self, i: usize, x: &[i64]) -> f64 {
        -(i + 1..self.n).map(|j| self.q[i * self.n + j] * x[j] as f64).sum::<f64>()
    }

    /// Integer range of the outermost coordinate x_{n−1} over the ellipsoid.
    pub(crate) fn outer_range(&self, r2: f64) -> (i64, i64) {
        let w = self.half_width(self.n - 1, r2);
        ((-w).ceil() as i64, w.floor() as i64)
    }

    /// Visit every x with xᵀGx ≤ r2 (up to slack) and x_{n−1} = `outer`.
    /// The visitor receives x and the floating value of xᵀGx.
    pub(crate) fn for_each_with_outer<F: FnMut(&[i64], f64)>(&self, r2: f64, outer: i64, visit: &mut F) {
        let n = self.n;
        let mut x = vec![0i64; n];
        x[n - 1] = outer;
        let d = self.q[(n - 1) * n + n - 1] * (outer as f64).powi(2);
        let budget = r2 - d;
        if budget < -SLACK * r2.abs().max(1.0) {
            return;
        }
        self.descend(n - 1, budget, d, r2, &mut x, visit);
    }

    fn descend<F: FnMut(&[i64], f64)>(
        &self,
        level: usize,
        budget: f64,
        acc: f64,
        r2: f64,
        x: &mut [i64],
        visit: &mut F,
    ) {
        if level == 0 {
            visit(x, acc);
            return;
        }
        let i = level - 1;
        let c = self.center(i, x);
        let w = self.half_width(i, budget);
        let lo = (c - w).ceil() as i64;
        let hi = (c + w).floor() as i64;
        let qii = self.q[i * self.n + i];
        for v in lo..=hi {
            x[i] = v;
            let d = qii * (v as f64 - c).powi(2);
            let rest = budget - d;
            if rest < -SLACK * r2.abs().max(1.0) {
                continue;
            }
            self.descend(i, rest, acc + d, r2, x, visit);
        }
        x[i] = 0;
    }

    pub(crate) fn for_each<F: FnMut(&[i64], f64)>(&self, r2: f64, visit: &mut F) {
        let (lo, hi) = self.outer_range(r2);
        for outer in lo..=hi {
            self.for_each_with_outer(r2, outer, visit);
        }
    }
}

/// Smallest eigenvalue of a symmetric matrix.
pub(crate) fn lambda_min(gram: &[f64], n: usize) -> f64 {
    let m = DMatrix::from_row_slice(n, n, gram);
    SymmetricEigen::new(m).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Upper bound on the G-length of the half-unit cube: max over x ∈ [−½, ½]^r
/// of sqrt(xᵀGx) ≤ ½ sqrt(Σ |G_ij|).
pub(crate) fn cube_radius(gram: &[f64]) -> f64 {
    0.5 * gram.iter().map(|v| v.abs()).sum::<f64>().sqrt()
}

/// Volume of the unit ball in ℝ^r.
pub(crate) fn unit_ball_volume(r: usize) -> f64 {
    use std::f64::consts::PI;
    match r {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / r as f64 * unit_ball_volume(r - 2),
    }
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

pub(crate) fn gcd_slice(xs: &[i64]) -> i64 {
    xs.iter().fold(0, |g, &v| gcd(g, v))
}

/// First nonzero coordinate positive.
pub(crate) fn is_canonical_sign(x: &[i64]) -> bool {
    x.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0)
}
