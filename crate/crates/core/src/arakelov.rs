//! Arakelov vector bundles over Q as metrized lattices (ℤ^r, G), and their
//! Gaussian section counts
//!
//!   #H⁰(V) = Σ_{x ∈ ℤ^r} exp(−π xᵀGx),   h⁰(V) = log #H⁰(V),   φ(V) = #H⁰(V) − 1.
//!
//! A bundle keeps an exact rational Gram matrix until it is twisted by a
//! real degree; after that only the floating Gram matrix is available.
//!
//! Tail certificate: with A(m) = #{x : xᵀGx ≤ m}, the terms left out of an
//! enumeration to radius² K are bounded shell by shell,
//!
//!   Σ_{xᵀGx > K} e^{−π xᵀGx} ≤ Σ_{k ≥ K} A(k+1) e^{−πk},
//!
//! and A(m) is bounded by the smaller of two cube-packing estimates: unit
//! cubes centred at the points lie in the Euclidean ball of radius
//! sqrt(m/λ_min) + √r/2, and in the G-ellipsoid of radius √m + ρ_G.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::lattice::{cube_radius, lambda_min, unit_ball_volume, QuadForm};
use crate::numfield::FieldDescriptor;
use crate::rational::{to_f64, RationalMatrix};
use crate::specfun::AnalyticValue;

#[derive(Debug, Clone)]
pub struct ArakelovBundle {
    rank: usize,
    gram: Vec<f64>,
    exact: Option<RationalMatrix>,
    /// log det G, tracked through every operation rather than recomputed.
    log_det: f64,
    field: FieldDescriptor,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BundleOp {
    Dual,
    /// Tensor with the Arakelov line bundle of degree t.
    Twist(f64),
    DirectSum,
    Determinant,
}

impl ArakelovBundle {
    /// Validates symmetry and positive-definiteness (all leading principal
    /// minors strictly positive).
    pub fn new(gram: RationalMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::InvalidMetric("Gram matrix is not symmetric".into()));
        }
        let minors = gram.leading_minors();
        if let Some(k) = minors.iter().position(|m| !m.is_positive()) {
            return Err(Error::InvalidMetric(format!(
                "leading minor {} is {}, not positive",
                k + 1,
                minors[k]
            )));
        }
        let det = minors.last().expect("rank ≥ 1");
        let log_det = log_rational(det);
        Ok(Self {
            rank: gram.size(),
            gram: gram.to_f64(),
            exact: Some(gram),
            log_det,
            field: FieldDescriptor::rationals(),
        })
    }

    /// A bundle with a floating Gram matrix (no exact comparisons).
    pub fn from_f64(rank: usize, gram: Vec<f64>) -> Result<Self> {
        if rank == 0 || gram.len() != rank * rank {
            return Err(Error::InvalidMetric("wrong number of Gram entries".into()));
        }
        for i in 0..rank {
            for j in 0..i {
                let (a, b) = (gram[i * rank + j], gram[j * rank + i]);
                if (a - b).abs() > 1e-14 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::InvalidMetric("Gram matrix is not symmetric".into()));
                }
            }
        }
        let chol = DMatrix::from_row_slice(rank, rank, &gram)
            .cholesky()
            .ok_or_else(|| Error::InvalidMetric("Gram matrix is not positive definite".into()))?;
        let log_det = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
        Ok(Self {
            rank,
            gram,
            exact: None,
            log_det,
            field: FieldDescriptor::rationals(),
        })
    }

    pub fn identity(rank: usize) -> Self {
        Self::new(RationalMatrix::identity(rank)).expect("identity is positive definite")
    }

    /// The Arakelov line bundle O(t) of degree t, Gram [e^{−2t}].
    pub fn line(t: f64) -> Self {
        Self::identity(1).twist(t)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[f64] {
        &self.gram
    }

    pub fn exact_gram(&self) -> Option<&RationalMatrix> {
        self.exact.as_ref()
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn log_det(&self) -> f64 {
        self.log_det
    }

    /// deg V = −½ log det G.
    pub fn degree(&self) -> f64 {
        -0.5 * self.log_det
    }

    /// N(V) = exp(deg V).
    pub fn norm(&self) -> f64 {
        self.degree().exp()
    }

    pub fn dual(&self) -> Self {
        match &self.exact {
            Some(g) => {
                let inv = g.inverse().expect("positive definite matrices are invertible");
                Self {
                    rank: self.rank,
                    gram: inv.to_f64(),
                    exact: Some(inv),
                    log_det: -self.log_det,
                    field: self.field.clone(),
                }
            }
            None => {
                let m = DMatrix::from_row_slice(self.rank, self.rank, &self.gram);
                let inv = m.try_inverse().expect("positive definite matrices are invertible");
                // symmetrise rounding noise
                let inv = (&inv + inv.transpose()) * 0.5;
                Self {
                    rank: self.rank,
                    gram: inv.transpose().as_slice().to_vec(),
                    exact: None,
                    log_det: -self.log_det,
                    field: self.field.clone(),
                }
            }
        }
    }

    /// V ⊗ O(t): the Gram matrix is scaled by e^{−2t}.
    pub fn twist(&self, t: f64) -> Self {
        if t == 0.0 {
            return self.clone();
        }
        let k = (-2.0 * t).exp();
        Self {
            rank: self.rank,
            gram: self.gram.iter().map(|g| g * k).collect(),
            exact: None,
            log_det: self.log_det - 2.0 * t * self.rank as f64,
            field: self.field.clone(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::Domain("direct sum of bundles over different fields".into()));
        }
        let n = self.rank + other.rank;
        let mut gram = vec![0.0; n * n];
        for i in 0..self.rank {
            for j in 0..self.rank {
                gram[i * n + j] = self.gram[i * self.rank + j];
            }
        }
        for i in 0..other.rank {
            for j in 0..other.rank {
                gram[(self.rank + i) * n + self.rank + j] = other.gram[i * other.rank + j];
            }
        }
        let exact = match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Some(a.block_diag(b)),
            _ => None,
        };
        Ok(Self {
            rank: n,
            gram,
            exact,
            log_det: self.log_det + other.log_det,
            field: self.field.clone(),
        })
    }

    /// det V: the rank-1 bundle with Gram [det G].
    pub fn determinant(&self) -> Self {
        match &self.exact {
            Some(g) => {
                let d = g.determinant();
                Self {
                    rank: 1,
                    gram: vec![to_f64(&d)],
                    exact: Some(RationalMatrix::diagonal(&[d])),
                    log_det: self.log_det,
                    field: self.field.clone(),
                }
            }
            None => Self {
                rank: 1,
                gram: vec![self.log_det.exp()],
                exact: None,
                log_det: self.log_det,
                field: self.field.clone(),
            },
        }
    }

    fn quad_form(&self) -> QuadForm {
        QuadForm::new(&self.gram, self.rank).expect("validated at construction")
    }

    pub fn lambda_min(&self) -> f64 {
        lambda_min(&self.gram, self.rank)
    }
}

fn log_rational(q: &crate::rational::Rational) -> f64 {
    let v = to_f64(q);
    if v.is_finite() && v > 0.0 && v.is_normal() {
        v.ln()
    } else {
        let (n, d) = (q.numer(), q.denom());
        log_bigint(n) - log_bigint(d)
    }
}

fn log_bigint(x: &num_bigint::BigInt) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let top: num_bigint::BigInt = x >> shift;
    to_f64(&crate::rational::Rational::from_integer(top)).ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn make_bundle(gram: RationalMatrix) -> Result<ArakelovBundle> {
    ArakelovBundle::new(gram)
}

pub fn bundle_degree(v: &ArakelovBundle) -> f64 {
    v.degree()
}

/// Dual, twist, direct sum or determinant. `w` is required for direct sums
/// and ignored otherwise.
pub fn bundle_algebra(v: &ArakelovBundle, w: Option<&ArakelovBundle>, op: BundleOp) -> Result<ArakelovBundle> {
    match op {
        BundleOp::Dual => Ok(v.dual()),
        BundleOp::Twist(t) => Ok(v.twist(t)),
        BundleOp::Determinant => Ok(v.determinant()),
        BundleOp::DirectSum => {
            let w = w.ok_or_else(|| Error::Domain("direct sum needs a second bundle".into()))?;
            v.direct_sum(w)
        }
    }
}

/// Upper bound for #{x ∈ ℤ^r : xᵀGx ≤ m}.
fn point_count_bound(v: &ArakelovBundle, lambda: f64, rho: f64, m: f64) -> f64 {
    let r = v.rank as f64;
    let vol = unit_ball_volume(v.rank);
    let euclid = vol * ((m / lambda).sqrt() + r.sqrt() / 2.0).powf(r);
    let metric = vol * (m.sqrt() + rho).powf(r) * (-0.5 * v.log_det).exp();
    euclid.min(metric).max(1.0)
}

fn tail_bound(v: &ArakelovBundle, lambda: f64, rho: f64, k0: u64) -> f64 {
    let mut total = 0.0;
    let mut k = k0;
    loop {
        let term = point_count_bound(v, lambda, rho, (k + 1) as f64) * (-PI * k as f64).exp();
        total += term;
        // A grows polynomially, so once e^{−π} dominates the terms shrink
        // geometrically by at least a half: remainder ≤ last term
        if term <= total * 1e-18 || term == 0.0 {
            let ratio = point_count_bound(v, lambda, rho, (k + 2) as f64)
                / point_count_bound(v, lambda, rho, (k + 1) as f64)
                * (-PI).exp();
            if ratio <= 0.5 {
                return total + term;
            }
        }
        k += 1;
        if k > k0 + 100_000 {
            return f64::INFINITY;
        }
    }
}

/// Σ_{x ≠ 0} exp(−π xᵀGx) with a certified absolute error ≤ tol.
pub fn phi(v: &ArakelovBundle, tol: f64) -> AnalyticValue {
    // below the f64 range: nothing to enumerate
    let ln_bound = ln_phi_upper_bound(v, 0.0);
    if ln_bound < -745.0 && ln_bound < tol.ln() {
        return AnalyticValue::real(0.0, ln_bound.exp());
    }
    let lambda = v.lambda_min() * (1.0 - 1e-12);
    let rho = cube_radius(&v.gram);
    // smallest integer radius² with a tail below tol, never below the first
    // eigenvalue shell so the shortest vectors are always summed
    let mut k = (lambda.ceil() as u64) + 12;
    while tail_bound(v, lambda, rho, k) > tol / 2.0 {
        k += 1;
    }
    let tail = tail_bound(v, lambda, rho, k);

    let qf = v.quad_form();
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut count = 0u64;
    qf.for_each(k as f64, &mut |x, q| {
        if x.iter().all(|&c| c == 0) {
            return;
        }
        let term = (-PI * q).exp();
        // Neumaier summation
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        count += 1;
    });
    let value = sum + comp;
    let rounding = 4.0 * f64::EPSILON * value * (1.0 + (count as f64).log2().max(0.0));
    AnalyticValue::real(value, tail + rounding)
}

/// #H⁰(V) with absolute error ≤ tol.
pub fn theta_count(v: &ArakelovBundle, tol: f64) -> AnalyticValue {
    let p = phi(v, tol);
    AnalyticValue::real(1.0 + p.re(), p.abs_error)
}

/// h⁰(V) = log #H⁰(V); the error on #H⁰ is at most tol.
pub fn h0(v: &ArakelovBundle, tol: f64) -> AnalyticValue {
    let p = phi(v, tol);
    AnalyticValue::real(p.re().ln_1p(), p.abs_error / (1.0 + p.re()))
}

/// Certified upper bound for φ(V ⊗ O(t)) from the theta comparison
/// Σ_{x≠0} e^{−πu xᵀGx} ≤ θ(πλu)^r − 1 with u = e^{−2t}, λ = λ_min(G) and
/// θ(a) − 1 ≤ 2e^{−a}/(1 − e^{−3a}). For t ≤ 0 this is put in the form
/// c₁ exp(−c₂ e^{−2t}).
pub fn phi_upper_bound(v: &ArakelovBundle, t: f64) -> f64 {
    ln_phi_upper_bound(v, t).exp()
}

/// log of [`phi_upper_bound`], usable far below the f64 range.
pub fn ln_phi_upper_bound(v: &ArakelovBundle, t: f64) -> f64 {
    let eps = |a: f64| 2.0 * (-a).exp() / -(-3.0 * a).exp_m1();
    if t <= 0.0 {
        let (c1, c2) = phi_decay_constants(v);
        c1.ln() - c2 * (-2.0 * t).exp()
    } else {
        let lambda = v.lambda_min() * (1.0 - 1e-12);
        let r = v.rank as f64;
        let a = PI * lambda * (-2.0 * t).exp();
        (r * eps(a).ln_1p()).exp_m1().ln()
    }
}

/// (c₁, c₂) with φ(V ⊗ O(t)) ≤ c₁ exp(−c₂ e^{−2t}) for all t ≤ 0.
pub fn phi_decay_constants(v: &ArakelovBundle) -> (f64, f64) {
    let lambda = v.lambda_min() * (1.0 - 1e-12);
    let r = v.rank as f64;
    let a0 = PI * lambda;
    let denom = -(-3.0 * a0).exp_m1();
    let eps0 = 2.0 * (-a0).exp() / denom;
    let c1 = 2.0 * r * (1.0 + eps0).powf(r - 1.0) / denom;
    (c1, a0)
}

/// h⁰(V) − h⁰(V^∨) − deg V; zero by Riemann–Roch over Q (ω trivial, Δ = 1).
pub fn rr_defect(v: &ArakelovBundle) -> Result<f64> {
    if !v.field().is_rationals() {
        return Err(Error::UnsupportedField(v.field().label.into()));
    }
    const TOL: f64 = 1e-13;
    let a = h0(v, TOL);
    let b = h0(&v.dual(), TOL);
    Ok(a.re() - b.re() - v.degree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn theta1(u: f64) -> f64 {
        // Σ_n e^{−π u n²} by direct summation
        let mut s = 1.0;
        for n in 1..200 {
            s += 2.0 * (-PI * u * (n * n) as f64).exp();
        }
        s
    }

    #[test]
    fn construction() {
        let id = make_bundle(RationalMatrix::identity(2)).unwrap();
        assert_eq!(bundle_degree(&id), 0.0);
        let v = make_bundle(RationalMatrix::from_i64(2, &[2, 1, 1, 1]).unwrap()).unwrap();
        assert!(v.degree().abs() < 1e-15);
        assert!(matches!(
            make_bundle(RationalMatrix::from_i64(2, &[1, 2, 2, 1]).unwrap()),
            Err(Error::InvalidMetric(_))
        ));
        assert!(matches!(
            make_bundle(RationalMatrix::from_i64(2, &[1, 0, 1, 1]).unwrap()),
            Err(Error::InvalidMetric(_))
        ));
    }

    #[test]
    fn degrees() {
        assert_eq!(ArakelovBundle::identity(3).degree(), 0.0);
        let l = ArakelovBundle::from_f64(1, vec![(-6.0f64).exp()]).unwrap();
        assert!((l.degree() - 3.0).abs() < 1e-14);
        let d = make_bundle(RationalMatrix::diagonal(&[rat(1, 4), rat(1, 9)])).unwrap();
        assert!((d.degree() - 6f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn algebra() {
        let id = ArakelovBundle::identity(2);
        assert_eq!(id.dual().exact_gram(), id.exact_gram());
        let v = make_bundle(RationalMatrix::from_i64(2, &[2, 1, 1, 1]).unwrap())
            .unwrap()
            .twist(1.0);
        assert!((v.degree() - 2.0).abs() < 1e-12);
        assert!((v.dual().degree() + 2.0).abs() < 1e-12);
        let one = ArakelovBundle::identity(1);
        let sum = bundle_algebra(&one, Some(&one), BundleOp::DirectSum).unwrap();
        assert_eq!(sum.exact_gram(), Some(&RationalMatrix::identity(2)));
        let det = v.determinant();
        assert_eq!(det.rank(), 1);
        assert!((det.degree() - v.degree()).abs() < 1e-12);
        let exact_det = make_bundle(RationalMatrix::diagonal(&[int(2), int(3)])).unwrap().determinant();
        assert_eq!(exact_det.exact_gram().unwrap().get(0, 0), &int(6));
    }

    #[test]
    fn theta_of_trivial_line() {
        let one = ArakelovBundle::identity(1);
        let h = h0(&one, 1e-15);
        assert!((h.re() - 0.082_901_5).abs() < 1e-7);
        assert!((h.re() - theta1(1.0).ln()).abs() < 1e-15);
        let p = phi(&one, 1e-15);
        assert!((p.re() - 0.086_434_8).abs() < 1e-7);
        let two = h0(&ArakelovBundle::identity(2), 1e-15);
        assert!((two.re() - 2.0 * h.re()).abs() < 1e-14);
    }

    #[test]
    fn theta_of_negative_line() {
        // degree −2: Gram [e⁴]; only x = ±1 matter
        let l = ArakelovBundle::line(-2.0);
        let p = phi(&l, 1e-12);
        let expected = 2.0 * (-PI * 4f64.exp()).exp();
        assert!((p.re() - expected).abs() <= 1e-3 * expected);
        assert!(p.abs_error <= 1e-12);
        assert!((h0(&l, 1e-12).re() - expected).abs() <= 1e-3 * expected);
    }

    #[test]
    fn phi_direct_sum_identity() {
        let one = ArakelovBundle::identity(1);
        let p = phi(&one, 1e-15).re();
        let s = phi(&one.direct_sum(&one).unwrap(), 1e-15).re();
        assert!((s - (2.0 * p + p * p)).abs() < 1e-12);
    }

    #[test]
    fn phi_bounds() {
        let one = ArakelovBundle::identity(1);
        let true_phi = 2.0 * (-PI * 4f64.exp()).exp();
        assert!(phi_upper_bound(&one, -2.0) >= true_phi);
        // rank-1 grid: φ(O(t)) ≤ e^t
        for i in 0..=32 {
            let t = -3.0 + 0.25 * i as f64;
            let p = phi(&one.twist(t), 1e-14);
            assert!(p.re() <= t.exp(), "t = {t}");
        }
        let mut last = f64::INFINITY;
        for i in 0..20 {
            let b = phi_upper_bound(&one, -0.3 * i as f64);
            assert!(b <= last);
            last = b;
        }
        // degree −6: far below 2.2e−552
        assert!(ln_phi_upper_bound(&one, -6.0) <= 2.2f64.ln() - 552.0 * 10f64.ln());
        assert!(phi(&one.twist(-6.0), 1e-12).re() <= 1e-300);
    }

    #[test]
    fn bound_dominates_phi() {
        let v = make_bundle(RationalMatrix::from_i64(2, &[2, 1, 1, 1]).unwrap()).unwrap();
        for t in [-2.0, -1.0, -0.5, 0.0, 0.5, 1.5] {
            assert!(phi(&v.twist(t), 1e-14).re() <= phi_upper_bound(&v, t), "t = {t}");
        }
    }

    #[test]
    fn riemann_roch_examples() {
        assert!(rr_defect(&ArakelovBundle::identity(3)).unwrap().abs() < 1e-12);
        let l = ArakelovBundle::line(2.0);
        assert!(rr_defect(&l).unwrap().abs() < 1e-10);
        let v = make_bundle(RationalMatrix::from_i64(2, &[2, 1, 1, 1]).unwrap())
            .unwrap()
            .twist(1.0);
        assert!(rr_defect(&v).unwrap().abs() < 1e-9);
    }

    #[test]
    fn h0_monotone_in_twist() {
        let v = make_bundle(RationalMatrix::from_i64(2, &[3, 1, 1, 2]).unwrap()).unwrap();
        let mut last = -1.0;
        for i in 0..16 {
            let h = h0(&v.twist(-2.0 + 0.3 * i as f64), 1e-13).re();
            assert!(h >= last);
            last = h;
        }
    }
}
