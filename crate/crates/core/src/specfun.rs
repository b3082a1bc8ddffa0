//! Γ(s), Dedekind zeta functions of Q and Q(i), and the completed factor
//!
//!   ξ(s) = 2^{−r₁} (π^{−s/2} Γ(s/2))^{r₁} ((2π)^{−s} Γ(s))^{r₂} ζ_F(s),
//!
//! together with the real-place effectivity integral
//! ∫_ℝ e^{−xs} e^{−π exp(−2x)} dx whose product with ζ(s) is ξ(s) over Q.
//!
//! Every operation returns an [`AnalyticValue`]: a complex value with an
//! absolute error bound.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numfield::FieldDescriptor;
use crate::quad::{integrate, QuadOptions};

pub type C64 = Complex64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticValue {
    #[serde(serialize_with = "ser_complex")]
    pub value: C64,
    pub abs_error: f64,
}

fn ser_complex<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

impl AnalyticValue {
    pub fn new(value: C64, abs_error: f64) -> Self {
        Self { value, abs_error }
    }

    pub fn exact(value: C64) -> Self {
        Self::new(value, 0.0)
    }

    pub fn real(x: f64, abs_error: f64) -> Self {
        Self::new(real(x), abs_error)
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn scale(self, k: C64) -> Self {
        Self::new(self.value * k, self.abs_error * k.norm())
    }

    pub fn recip(self) -> Self {
        let m = self.value.norm();
        // first-order bound, inflated when the relative error is not small
        let rel = self.abs_error / m;
        let err = if rel < 0.5 { rel / m * (1.0 + 2.0 * rel) } else { f64::INFINITY };
        Self::new(self.value.inv(), err)
    }

    pub fn div(self, other: Self) -> Self {
        self * other.recip()
    }

    /// Whether `target` lies within the error disc (plus `slack`).
    pub fn contains(&self, target: C64, slack: f64) -> bool {
        (self.value - target).norm() <= self.abs_error + slack
    }
}

impl Add for AnalyticValue {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.value + o.value, self.abs_error + o.abs_error)
    }
}

impl Sub for AnalyticValue {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.value - o.value, self.abs_error + o.abs_error)
    }
}

impl Neg for AnalyticValue {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, self.abs_error)
    }
}

impl Mul for AnalyticValue {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let e = self.value.norm() * o.abs_error + o.value.norm() * self.abs_error + self.abs_error * o.abs_error;
        Self::new(self.value * o.value, e)
    }
}

fn is_nonpositive_integer(s: C64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0
}

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// log Γ(s) for Re s ≥ 1/2 (principal branch not guaranteed; only exp of the
/// result is used).
fn ln_gamma_right(s: C64) -> C64 {
    let z = s - 1.0;
    let mut acc = real(LANCZOS[0]);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        acc += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

fn gamma_value(s: C64) -> C64 {
    if s.re < 0.5 {
        PI / ((PI * s).sin() * ln_gamma_right(1.0 - s).exp())
    } else {
        ln_gamma_right(s).exp()
    }
}

/// Relative accuracy claimed for Γ on −10 ≤ Re s ≤ 30, |Im s| ≤ 30.
const GAMMA_REL_ERR: f64 = 1e-13;

pub fn gamma(s: C64) -> Result<AnalyticValue> {
    if is_nonpositive_integer(s) {
        return Err(Error::Pole(format!("{s}")));
    }
    let g = gamma_value(s);
    Ok(AnalyticValue::new(g, GAMMA_REL_ERR * g.norm()))
}

/// B_{2k}/(2k)! for k = 1..=40, from the exact Bernoulli recurrence.
fn bernoulli_over_factorial() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        const M: usize = 80;
        // B_m via Σ_{j<m+1} C(m+1, j) B_j = 0
        let mut b: Vec<BigRational> = Vec::with_capacity(M + 1);
        b.push(BigRational::one());
        for m in 1..=M {
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one(); // C(m+1, j)
            for (j, bj) in b.iter().enumerate() {
                acc += bj * BigRational::from_integer(binom.clone());
                binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        let mut fact = BigInt::one();
        let mut out = Vec::new();
        for m in 1..=M {
            fact *= BigInt::from(m);
            if m % 2 == 0 {
                let q = &b[m] / BigRational::from_integer(fact.clone());
                out.push(q.to_f64().unwrap_or(0.0));
            }
        }
        out
    })
}

/// Knobs of the Euler–Maclaurin evaluator: direct-sum cutoff N (None picks
/// one from |s|) and the number of Bernoulli correction terms.
#[derive(Debug, Clone, Copy)]
pub struct ZetaConfig {
    pub cutoff: Option<usize>,
    pub order: usize,
}

impl Default for ZetaConfig {
    fn default() -> Self {
        Self {
            cutoff: None,
            order: 24,
        }
    }
}

/// Hurwitz ζ(s, a) by Euler–Maclaurin summation with N direct terms and
/// `order` Bernoulli corrections. The error estimate is the first omitted
/// term times |s + 2K + 1| / (Re s + 2K + 1).
pub fn hurwitz_zeta_em(s: C64, a: f64, cfg: ZetaConfig) -> Result<AnalyticValue> {
    if s == real(1.0) {
        return Err(Error::Pole("1".into()));
    }
    let (regular, x) = hurwitz_regular_part(s, a, cfg);
    Ok(regular + AnalyticValue::exact(((1.0 - s) * x.ln()).exp() / (s - 1.0)))
}

/// Euler–Maclaurin sum for ζ(s, a) without the x^{1−s}/(s−1) term, and the
/// cutoff point x = N + a.
fn hurwitz_regular_part(s: C64, a: f64, cfg: ZetaConfig) -> (AnalyticValue, f64) {
    let k_max = cfg.order.min(39);
    let n = cfg.cutoff.unwrap_or(20 + s.norm().ceil() as usize);
    let mut sum = C64::new(0.0, 0.0);
    let mut comp = C64::new(0.0, 0.0);
    for j in 0..n {
        // Kahan summation
        let y = (-s * (j as f64 + a).ln()).exp() - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let x = n as f64 + a;
    let lx = x.ln();
    let x_pow = |e: C64| (e * lx).exp();
    sum += 0.5 * x_pow(-s);
    let bern = bernoulli_over_factorial();
    // rising factorial s(s+1)…(s+2k−2) and the power x^{−s−2k+1}
    let mut rising = s;
    let mut power = x_pow(-s - 1.0);
    let mut last = C64::new(0.0, 0.0);
    for k in 1..=k_max + 1 {
        let term = bern[k - 1] * rising * power;
        if k == k_max + 1 {
            last = term;
            break;
        }
        sum += term;
        let m = 2.0 * k as f64;
        rising *= (s + m - 1.0) * (s + m);
        power /= x * x;
    }
    let sigma_shift = s.re + 2.0 * k_max as f64 + 1.0;
    let factor = if sigma_shift > 0.0 {
        (s + 2.0 * k_max as f64 + 1.0).norm() / sigma_shift
    } else {
        f64::INFINITY
    };
    let err = last.norm() * factor + 4.0 * f64::EPSILON * (n as f64) * sum.norm().max(1.0);
    (AnalyticValue::new(sum, err), x)
}

/// Below this real part the Riemann zeta is taken through its functional
/// equation to avoid cancellation in the direct sum.
const REFLECT_BELOW: f64 = 0.0;

pub fn riemann_zeta(s: C64) -> Result<AnalyticValue> {
    if s == real(1.0) {
        return Err(Error::Pole("1".into()));
    }
    if s.re >= REFLECT_BELOW {
        return hurwitz_zeta_em(s, 1.0, ZetaConfig::default());
    }
    if s.im == 0.0 && s.re.fract() == 0.0 && (s.re as i64) % 2 == 0 {
        // trivial zero
        return Ok(AnalyticValue::exact(real(0.0)));
    }
    // ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s)
    let z1 = hurwitz_zeta_em(1.0 - s, 1.0, ZetaConfig::default())?;
    let g = gamma(1.0 - s)?;
    let pre = (s * 2f64.ln()).exp() * ((s - 1.0) * PI.ln()).exp() * (PI * s / 2.0).sin();
    Ok((g * z1).scale(pre))
}

/// L(s, χ₋₄) = 4^{−s} (ζ(s, 1/4) − ζ(s, 3/4)), through the functional
/// equation of the completed L-function for Re s < −1.
pub fn dirichlet_l_minus4(s: C64) -> Result<AnalyticValue> {
    if s.re >= REFLECT_BELOW {
        let (a, xa) = hurwitz_regular_part(s, 0.25, ZetaConfig::default());
        let (b, xb) = hurwitz_regular_part(s, 0.75, ZetaConfig::default());
        // (xa^{1−s} − xb^{1−s})/(s − 1), continuous through s = 1
        let w = 1.0 - s;
        let pole_terms = if w.norm() < 1e-8 {
            let (la, lb) = (xa.ln(), xb.ln());
            -(la - lb) - w * (la * la - lb * lb) / 2.0
        } else {
            ((w * xa.ln()).exp() - (w * xb.ln()).exp()) / (s - 1.0)
        };
        let diff = a - b + AnalyticValue::exact(pole_terms);
        return Ok(diff.scale((-s * 4f64.ln()).exp()));
    }
    if s.im == 0.0 && s.re.fract() == 0.0 && (s.re as i64) % 2 != 0 {
        return Ok(AnalyticValue::exact(real(0.0)));
    }
    // Λ(s) = (4/π)^{(s+1)/2} Γ((s+1)/2) L(s) = Λ(1−s)
    let lf = |w: C64| ((w + 1.0) / 2.0 * (4.0 / PI).ln()).exp();
    let w = 1.0 - s;
    let l1 = dirichlet_l_minus4(w)?;
    let num = (gamma((w + 1.0) / 2.0)? * l1).scale(lf(w));
    let den = gamma((s + 1.0) / 2.0)?.scale(lf(s));
    Ok(num.div(den))
}

/// The Dedekind zeta function of `desc` (Q or Q(i)).
pub fn zeta_field(desc: &FieldDescriptor, s: C64) -> Result<AnalyticValue> {
    if s == real(1.0) {
        return Err(Error::Pole("1".into()));
    }
    match desc.label {
        "Q" => riemann_zeta(s),
        "Q(i)" => Ok(riemann_zeta(s)? * dirichlet_l_minus4(s)?),
        other => Err(Error::UnsupportedField(other.into())),
    }
}

/// ξ(s) as the gamma-factor product times ζ_F(s).
pub fn xi(desc: &FieldDescriptor, s: C64) -> Result<AnalyticValue> {
    if s == real(1.0) {
        return Err(Error::Pole("1".into()));
    }
    if desc.r1 > 0 && is_nonpositive_integer(s / 2.0) {
        return Err(Error::Pole(format!("{s}")));
    }
    if desc.r2 > 0 && is_nonpositive_integer(s) {
        return Err(Error::Pole(format!("{s}")));
    }
    let mut acc = zeta_field(desc, s)?;
    for _ in 0..desc.r1 {
        let g = gamma(s / 2.0)?.scale((-s / 2.0 * PI.ln()).exp() * 0.5);
        acc = acc * g;
    }
    for _ in 0..desc.r2 {
        let g = gamma(s)?.scale((-s * (2.0 * PI).ln()).exp());
        acc = acc * g;
    }
    Ok(acc)
}

/// ∫_ℝ e^{−xs} e^{−π exp(−2x)} dx by quadrature with certified tails,
/// absolute error at most 1e-8.
pub fn effectivity_integral(s: C64) -> Result<AnalyticValue> {
    effectivity_integral_tol(s, 1e-10)
}

pub fn effectivity_integral_tol(s: C64, tol: f64) -> Result<AnalyticValue> {
    let sigma = s.re;
    if sigma <= 0.0 {
        return Err(Error::Divergent(format!(
            "effectivity integral needs Re s > 0, got {s}"
        )));
    }
    // right tail: e^{−π exp(−2x)} ≤ 1, so ∫_R^∞ ≤ e^{−σR}/σ
    let right = ((4.0 / (sigma * tol)).ln() / sigma).max(1.0);
    let right_tail = (-sigma * right).exp() / sigma;
    // left tail, y = −x ≥ L: integrand ≤ exp(σy − π e^{2y}); linearising
    // e^{2y} ≥ e^{2L}(1 + 2(y − L)) gives the bound below once 2πe^{2L} > σ
    let left_bound = |l: f64| {
        let slope = 2.0 * PI * (2.0 * l).exp() - sigma;
        if slope <= 0.0 {
            f64::INFINITY
        } else {
            (sigma * l - PI * (2.0 * l).exp()).exp() / slope
        }
    };
    let mut left = 0.5;
    while left_bound(left) > tol / 4.0 {
        left += 0.25;
    }
    let q = integrate(
        |x| (-x * s).exp() * (-PI * (-2.0 * x).exp()).exp(),
        -left,
        right,
        QuadOptions {
            abs_tol: tol / 2.0,
            min_panels: 16,
            max_panels: 20_000,
        },
    )?;
    Ok(AnalyticValue::new(q.value, q.error + right_tail + left_bound(left)))
}
