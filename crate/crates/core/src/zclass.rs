//! Analytic continuation of the height zeta function of ℙ(V) over Q.
//!
//! With J(V, z) = ∫_{−∞}^0 e^{−zt} φ(V ⊗ O(t)) dt the continued function is
//!
//!   2ξ(s) Z(ℙ(V), s) = J(V, s) + N(V) J(V^∨, r − s) + N(V)/(s − r) − 1/s,
//!
//! where both integrals are entire in their argument: the integrand decays
//! doubly exponentially as t → −∞. Truncation points come from the decay
//! constants of [`phi_decay_constants`], so every tail is certified.

use serde::Serialize;

use crate::arakelov::{phi, phi_decay_constants, ArakelovBundle};
use crate::error::{Error, Result};
use crate::numfield::FieldDescriptor;
use crate::quad::{integrate, QuadOptions};
use crate::specfun::{c, real, xi, AnalyticValue, C64};

/// w for Q (the roots of unity ±1).
const W: f64 = 2.0;

#[derive(Debug, Clone, Serialize)]
pub struct ContinuationResult {
    /// Z(ℙ(V), s).
    pub value: AnalyticValue,
    /// J(V, s), N(V)·J(V^∨, r−s), N(V)/(s−r), −1/s.
    pub parts: [AnalyticValue; 4],
}

impl ContinuationResult {
    pub fn numerator(&self) -> AnalyticValue {
        self.parts.iter().copied().fold(AnalyticValue::exact(real(0.0)), |a, b| a + b)
    }
}

/// ∫_T^∞ c₁ exp(a u − c₂ e^{2u}) du, bounded by linearising e^{2u} at T.
fn left_tail(c1: f64, c2: f64, a: f64, t: f64) -> f64 {
    let slope = 2.0 * c2 * (2.0 * t).exp() - a;
    if slope <= 0.0 {
        return f64::INFINITY;
    }
    c1 * (a * t - c2 * (2.0 * t).exp()).exp() / slope
}

fn truncation_point(c1: f64, c2: f64, a: f64, target: f64) -> f64 {
    let mut t = 0.5;
    while left_tail(c1, c2, a, t) > target {
        t += 0.125;
    }
    t
}

fn check_q(v: &ArakelovBundle) -> Result<()> {
    if v.field().is_rationals() {
        Ok(())
    } else {
        Err(Error::UnsupportedField(v.field().label.into()))
    }
}

/// ∫_{−∞}^0 e^{−zt} φ(V ⊗ O(t)) dt with absolute error ≤ tol.
pub fn j_integral(v: &ArakelovBundle, z: C64, tol: f64) -> Result<AnalyticValue> {
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let (c1, c2) = phi_decay_constants(v);
    let t_max = truncation_point(c1, c2, z.re, tol / 4.0);
    let tail = left_tail(c1, c2, z.re, t_max);
    // per-point tolerance for φ, weighted so that ∫ |e^{−zt}|·err(t) dt ≤ tol/4
    let unit = tol / (4.0 * t_max);
    let q = integrate(
        |t| {
            let weight = (-z * t).exp();
            let local = (unit / weight.norm()).max(1e-300);
            weight * phi(&v.twist(t), local).re()
        },
        -t_max,
        0.0,
        QuadOptions {
            abs_tol: tol / 4.0,
            min_panels: 16,
            max_panels: 20_000,
        },
    )?;
    Ok(AnalyticValue::new(q.value, q.error + tail + tol / 4.0))
}

fn inv_xi_checked(s: C64) -> Result<AnalyticValue> {
    let q = FieldDescriptor::rationals();
    // 1/ξ vanishes at the pole s = 1
    if s == real(1.0) {
        return Ok(AnalyticValue::exact(real(0.0)));
    }
    let x = xi(&q, s)?;
    let h = 1e-5;
    let d = (xi(&q, s + c(0.0, h))?.value - xi(&q, s - c(0.0, h))?.value) / c(0.0, 2.0 * h);
    if x.value.norm() < 1e-6 * d.norm() {
        return Err(Error::IllConditioned(format!("s = {s} is within 1e-6 of a zero of ξ")));
    }
    Ok(x.recip())
}

/// The completed numerator J(V,s) + N(V)J(V^∨,r−s) + N(V)/(s−r) − 1/s,
/// split into its four parts.
fn star_parts(v: &ArakelovBundle, s: C64, tol: f64) -> Result<[AnalyticValue; 4]> {
    check_q(v)?;
    let r = v.rank() as f64;
    if s == real(0.0) || s == real(r) {
        return Err(Error::Pole(format!("{s}")));
    }
    let n = v.norm();
    let dual = v.dual();
    let (j1, j2) = rayon::join(
        || j_integral(v, s, tol / 4.0),
        || j_integral(&dual, real(r) - s, tol / (4.0 * n.max(1.0))),
    );
    let pole_r = AnalyticValue::exact(real(n) / (s - r));
    let pole_0 = AnalyticValue::exact(-s.inv());
    Ok([j1?, j2?.scale(real(n)), pole_r, pole_0])
}

/// Z(ℙ(V), s) continued to s ∉ {0, r}.
pub fn continued_zeta(v: &ArakelovBundle, s: C64, tol: f64) -> Result<ContinuationResult> {
    let parts = star_parts(v, s, tol)?;
    let inv = inv_xi_checked(s)?;
    let num: AnalyticValue = parts.iter().copied().fold(AnalyticValue::exact(real(0.0)), |a, b| a + b);
    let value = (num * inv).scale(real(1.0 / W));
    Ok(ContinuationResult { value, parts })
}

/// Residue of Z(ℙ(V), s) at s = r: N(V) / (w ξ(r)).
pub fn residue_main(v: &ArakelovBundle) -> Result<f64> {
    check_q(v)?;
    let x = xi(v.field(), real(v.rank() as f64))?;
    Ok(v.norm() / (W * x.re()))
}

/// (s − r)Z(ℙ(V), s) at s = r + 10^{−k}, k = 2, 3, 4, extrapolated to s = r
/// by two rounds of Richardson elimination.
pub fn residue_extrapolated(v: &ArakelovBundle, tol: f64) -> Result<AnalyticValue> {
    let r = v.rank() as f64;
    let f = |h: f64| -> Result<AnalyticValue> {
        Ok(continued_zeta(v, real(r + h), tol)?.value.scale(real(h)))
    };
    let (f2, f3, f4) = (f(1e-2)?, f(1e-3)?, f(1e-4)?);
    let r1a = (f3.scale(real(10.0)) - f2).scale(real(1.0 / 9.0));
    let r1b = (f4.scale(real(10.0)) - f3).scale(real(1.0 / 9.0));
    let r2 = (r1b.scale(real(100.0)) - r1a).scale(real(1.0 / 99.0));
    // the step between the last two levels bounds the truncation
    let spread = (r2.value - r1b.value).norm();
    Ok(AnalyticValue::new(r2.value, r2.abs_error + spread))
}

/// ξ(s)·Z(ℙ(V), s), computed as half the completed numerator so that it is
/// finite at the pole of ξ.
fn completed(v: &ArakelovBundle, s: C64, tol: f64) -> Result<AnalyticValue> {
    let parts = star_parts(v, s, tol)?;
    let num = parts.iter().copied().fold(AnalyticValue::exact(real(0.0)), |a, b| a + b);
    Ok(num.scale(real(1.0 / W)))
}

/// |N(V)^{−1/2} ξ(s)Z(ℙ(V),s) − N(V^∨)^{−1/2} ξ(r−s)Z(ℙ(V^∨),r−s)|.
pub fn funceq_defect(v: &ArakelovBundle, s: C64, tol: f64) -> Result<f64> {
    let r = v.rank() as f64;
    let dual = v.dual();
    let lhs = completed(v, s, tol)?.scale(real(v.norm().powf(-0.5)));
    let rhs = completed(&dual, real(r) - s, tol)?.scale(real(dual.norm().powf(-0.5)));
    Ok((lhs.value - rhs.value).norm())
}

/// φ(O(t)) for all real t; for t > 0 through Riemann–Roch,
/// φ(O(t)) = e^t (1 + φ(O(−t))) − 1.
fn phi_line(t: f64, tol: f64) -> f64 {
    if t <= 0.0 {
        phi(&ArakelovBundle::line(t), tol).re()
    } else {
        let back = phi(&ArakelovBundle::line(-t), tol * (-t).exp()).re();
        t.exp_m1() + t.exp() * back
    }
}

/// ξ^{(k)}(s) = w^{−(k+1)} ∫_ℝ φ(O(t))^{k+1} e^{−st} dt for Re s > k + 1.
pub fn wan_xi_k(k: u32, s: C64, tol: f64) -> Result<AnalyticValue> {
    let sigma = s.re;
    let m = (k + 1) as f64;
    if sigma <= m {
        return Err(Error::Divergent(format!("ξ^({k}) needs Re s > {m}, got {s}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let scale = W.powf(-m);
    let budget = tol / scale;

    // left: φ(O(t))^{k+1} ≤ c₁^{k+1} exp(−(k+1)c₂ e^{−2t})
    let (c1, c2) = phi_decay_constants(&ArakelovBundle::identity(1));
    let (lc1, lc2) = (c1.powf(m), c2 * m);
    let left = truncation_point(lc1, lc2, sigma, budget / 4.0);
    let left_err = left_tail(lc1, lc2, sigma, left);

    // right: φ(O(t)) ≤ (1 + ε)e^t for t ≥ R with ε ≥ φ(O(−R))
    let decay = sigma - m;
    let mut right = 1.0;
    let right_bound = |rr: f64| {
        let eps = c1 * (-c2 * (2.0 * rr).exp()).exp();
        (1.0 + eps).powf(m) * (-decay * rr).exp() / decay
    };
    while right_bound(right) > budget / 4.0 {
        right += 0.25;
    }
    let right_err = right_bound(right);

    let unit = budget / (4.0 * (left + right));
    let q = integrate(
        |t| {
            let weight = (-s * t).exp();
            let p = phi_line(t, 1e-3 * unit / weight.norm().max(1e-300));
            weight * p.powf(m)
        },
        -left,
        right,
        QuadOptions {
            abs_tol: budget / 4.0,
            min_panels: 32,
            max_panels: 40_000,
        },
    )?;
    let err = q.error + left_err + right_err + budget / 4.0;
    Ok(AnalyticValue::new(q.value * scale, err * scale))
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// |Z(ℙⁿ, s) − ξ(s)^{−1} Σ_{0≤k≤n} C(n+1, k+1) w^k ξ^{(k)}(s)|.
pub fn wan_formula_defect(n: u32, s: C64) -> Result<f64> {
    const TOL: f64 = 1e-10;
    if s.re <= (n + 1) as f64 {
        return Err(Error::Divergent(format!("needs Re s > {}, got {s}", n + 1)));
    }
    let z = continued_zeta(&ArakelovBundle::identity(n as usize + 1), s, TOL)?;
    let mut sum = AnalyticValue::exact(real(0.0));
    for k in 0..=n {
        let term = wan_xi_k(k, s, TOL)?.scale(real(binomial(n + 1, k + 1) * W.powi(k as i32)));
        sum = sum + term;
    }
    let x = xi(&FieldDescriptor::rationals(), s)?;
    let rhs = sum.div(x);
    Ok((z.value.value - rhs.value).norm())
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// g/(a(b−1)!) · B^a (log B)^{b−1}.
pub fn tauberian_predict(a: f64, b: u32, g: f64, bound: f64) -> Result<f64> {
    if !(bound > 1.0) {
        return Err(Error::Domain(format!("bound must exceed 1, got {bound}")));
    }
    if !(a > 0.0) || b == 0 {
        return Err(Error::Domain("need a > 0 and b ≥ 1".into()));
    }
    Ok(g / (a * factorial(b - 1)) * bound.powf(a) * bound.ln().powi(b as i32 - 1))
}
