//! Base-field invariants and Arakelov divisors over Q.
//!
//! Only Q carries divisor arithmetic. Q(i) is registered so that the
//! completed zeta factor can be exercised with a complex place.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldDescriptor {
    pub label: &'static str,
    /// Number of real places.
    pub r1: u32,
    /// Number of complex places.
    pub r2: u32,
    pub discriminant: i64,
    /// Number of roots of unity.
    pub w: u32,
    pub class_number: u32,
    pub regulator: f64,
    /// Regulator times class number.
    pub alpha: f64,
    /// log|Δ|, the degree of the canonical bundle.
    pub canonical_degree: f64,
    /// Local degrees n_v of the infinite places.
    pub local_degrees: BTreeMap<&'static str, u32>,
}

impl FieldDescriptor {
    pub fn rationals() -> Self {
        Self::build("Q", 1, 0, 1, 2, 1, 1.0, [("inf", 1)])
    }

    pub fn gaussian() -> Self {
        Self::build("Q(i)", 0, 1, -4, 4, 1, 1.0, [("inf", 2)])
    }

    #[allow(clippy::too_many_arguments)]
    fn build<const K: usize>(
        label: &'static str,
        r1: u32,
        r2: u32,
        discriminant: i64,
        w: u32,
        class_number: u32,
        regulator: f64,
        places: [(&'static str, u32); K],
    ) -> Self {
        Self {
            label,
            r1,
            r2,
            discriminant,
            w,
            class_number,
            regulator,
            alpha: regulator * class_number as f64,
            canonical_degree: (discriminant.unsigned_abs() as f64).ln(),
            local_degrees: places.into_iter().collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.r1 + 2 * self.r2
    }

    pub fn is_rationals(&self) -> bool {
        self.label == "Q"
    }
}

pub fn field_descriptor(label: &str) -> Result<FieldDescriptor> {
    match label.trim() {
        "Q" => Ok(FieldDescriptor::rationals()),
        "Q(i)" => Ok(FieldDescriptor::gaussian()),
        other => Err(Error::UnsupportedField(other.to_string())),
    }
}

/// An Arakelov divisor on Spec Z: one real coordinate at infinity and a
/// finitely supported integer multiplicity at each prime.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ArithDivisor {
    pub infinite_part: f64,
    pub finite_part: BTreeMap<u64, i64>,
}

impl ArithDivisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(infinite_part: f64, finite: impl IntoIterator<Item = (u64, i64)>) -> Self {
        let finite_part = finite.into_iter().filter(|&(_, m)| m != 0).collect();
        Self {
            infinite_part,
            finite_part,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut finite_part = self.finite_part.clone();
        for (&p, &m) in &other.finite_part {
            *finite_part.entry(p).or_insert(0) += m;
        }
        finite_part.retain(|_, m| *m != 0);
        Self {
            infinite_part: self.infinite_part + other.infinite_part,
            finite_part,
        }
    }

    pub fn degree(&self) -> f64 {
        divisor_degree(self)
    }

    /// exp(deg D).
    pub fn norm(&self) -> f64 {
        divisor_degree(self).exp()
    }
}

fn factor_u64(mut n: u64) -> BTreeMap<u64, i64> {
    let mut out = BTreeMap::new();
    let mut p = 2u64;
    while p * p <= n {
        while n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

fn big_to_u64(x: &BigInt) -> Result<u64> {
    x.abs()
        .to_u64()
        .ok_or_else(|| Error::Domain(format!("{x} is too large to factor")))
}

/// The principal divisor (f) = −log|f|·[∞] + Σ_p ord_p(f)·[p].
pub fn principal_divisor(f: &Rational) -> Result<ArithDivisor> {
    if f.is_zero() {
        return Err(Error::Domain("principal divisor of 0".into()));
    }
    let mut finite = factor_u64(big_to_u64(f.numer())?);
    for (p, m) in factor_u64(big_to_u64(f.denom())?) {
        *finite.entry(p).or_insert(0) -= m;
    }
    let abs = f.abs();
    // log of numerator minus log of denominator keeps precision for huge parts
    let log_abs = log_big(abs.numer()) - log_big(abs.denom());
    Ok(ArithDivisor::new(-log_abs, finite))
}

fn log_big(x: &BigInt) -> f64 {
    match x.to_f64() {
        Some(v) if v.is_finite() => v.ln(),
        _ => {
            let bits = x.bits();
            let shift = bits.saturating_sub(64);
            let top: BigInt = x >> shift;
            to_f64(&Rational::from_integer(top)).ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

/// deg D = x_∞ + Σ_p m_p log p.
pub fn divisor_degree(d: &ArithDivisor) -> f64 {
    d.finite_part
        .iter()
        .fold(d.infinite_part, |acc, (&p, &m)| acc + m as f64 * (p as f64).ln())
}

/// Probability that D is effective: zero when the finite part is not
/// effective, otherwise exp(−π·exp(−2·x_∞)).
pub fn effectivity(d: &ArithDivisor) -> f64 {
    if d.finite_part.values().any(|&m| m < 0) {
        return 0.0;
    }
    (-std::f64::consts::PI * (-2.0 * d.infinite_part).exp()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn registry() {
        let q = field_descriptor("Q").unwrap();
        assert_eq!((q.r1, q.r2, q.discriminant, q.w), (1, 0, 1, 2));
        assert_eq!(q.alpha, 1.0);
        assert_eq!(q.canonical_degree, 0.0);
        let qi = field_descriptor("Q(i)").unwrap();
        assert_eq!((qi.r1, qi.r2, qi.discriminant, qi.w), (0, 1, -4, 4));
        assert!((qi.canonical_degree - 4f64.ln()).abs() < 1e-14);
        assert_eq!(qi.alpha, qi.regulator * qi.class_number as f64);
        assert_eq!(
            field_descriptor("Q(sqrt5)"),
            Err(Error::UnsupportedField("Q(sqrt5)".into()))
        );
    }

    #[test]
    fn principal_divisors() {
        assert_eq!(principal_divisor(&int(1)).unwrap(), ArithDivisor::zero());
        let d2 = principal_divisor(&int(2)).unwrap();
        assert!((d2.infinite_part + 2f64.ln()).abs() < 1e-15);
        assert_eq!(d2.finite_part, BTreeMap::from([(2, 1)]));
        let d = principal_divisor(&rat(-3, 4)).unwrap();
        assert!((d.infinite_part + 0.75f64.ln()).abs() < 1e-15);
        assert_eq!(d.finite_part, BTreeMap::from([(2, -2), (3, 1)]));
        assert!(principal_divisor(&int(0)).is_err());
    }

    #[test]
    fn degrees() {
        assert_eq!(divisor_degree(&ArithDivisor::zero()), 0.0);
        let d = ArithDivisor::new(0.0, [(2, 3)]);
        assert!((divisor_degree(&d) - 3.0 * 2f64.ln()).abs() < 1e-15);
        for f in [int(2), rat(-3, 4), rat(7, 5)] {
            assert!(principal_divisor(&f).unwrap().degree().abs() < 1e-12);
        }
    }

    #[test]
    fn effectivity_values() {
        assert_eq!(effectivity(&ArithDivisor::new(0.0, [(2, -1)])), 0.0);
        assert!((effectivity(&ArithDivisor::zero()) - 0.043_213_918_263_772_25).abs() < 1e-15);
        assert!((effectivity(&ArithDivisor::new(30.0, [])) - 1.0).abs() < 1e-20);
    }
}
