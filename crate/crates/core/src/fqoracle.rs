//! Brute-force section counts of ℙ(V) → ℙ¹ over small prime fields.
//!
//! A degree-d section of ℙ(⊕O(a_i)) is a tuple (f₁, …, f_r) of binary forms
//! with deg f_i = d + a_i, not all zero and without a common zero over the
//! algebraic closure, taken up to F_q^× scaling.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::motivic::SplittingType;

/// Coefficient budget for a single enumeration.
pub const MAX_COEFFS: usize = 12;

/// A binary form Σ c_i x^{n−i} y^i over F_q, with c = [c_0, …, c_n].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FqForm {
    pub q: u32,
    pub coeffs: Vec<u32>,
}

impl FqForm {
    pub fn new(q: u32, coeffs: Vec<u32>) -> Result<Self> {
        check_prime(q)?;
        Ok(Self {
            q,
            coeffs: coeffs.into_iter().map(|c| c % q).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

fn check_prime(q: u32) -> Result<()> {
    let prime = q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0);
    if prime {
        Ok(())
    } else {
        Err(Error::Domain(format!("{q} is not prime")))
    }
}

fn inv_mod(a: u32, q: u32) -> u32 {
    // Fermat: a^{q−2}
    let (mut base, mut exp, mut acc) = (a as u64 % q as u64, q - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q as u64;
        }
        base = base * base % q as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Univariate polynomials, lowest degree first, trailing zeros trimmed.
fn trim(mut p: Vec<u32>) -> Vec<u32> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn poly_rem(mut a: Vec<u32>, b: &[u32], q: u32) -> Vec<u32> {
    let lead_inv = inv_mod(*b.last().expect("nonzero divisor"), q);
    while a.len() >= b.len() {
        let shift = a.len() - b.len();
        let factor = a.last().copied().unwrap_or(0) as u64 * lead_inv as u64 % q as u64;
        for (i, &bc) in b.iter().enumerate() {
            let sub = factor * bc as u64 % q as u64;
            a[shift + i] = ((a[shift + i] as u64 + q as u64 - sub) % q as u64) as u32;
        }
        a = trim(a);
    }
    a
}

fn poly_gcd(a: Vec<u32>, b: Vec<u32>, q: u32) -> Vec<u32> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = poly_rem(a, &b, q);
        a = b;
        b = r;
    }
    // monic
    if let Some(&lead) = a.last() {
        let inv = inv_mod(lead, q);
        a.iter_mut().for_each(|c| *c = (*c as u64 * inv as u64 % q as u64) as u32);
    }
    a
}

/// Degrees of the y-power and the x-gcd part of the common factor of the
/// nonzero forms, or None when every form is zero.
fn gcd_parts(forms: &[&[u32]], q: u32) -> Option<(usize, Vec<u32>)> {
    let nonzero: Vec<&[u32]> = forms.iter().copied().filter(|f| f.iter().any(|&c| c != 0)).collect();
    if nonzero.is_empty() {
        return None;
    }
    // y^k divides Σ c_i x^{n−i} y^i iff c_i = 0 for i < k
    let k = nonzero
        .iter()
        .map(|f| f.iter().position(|&c| c != 0).expect("nonzero"))
        .min()
        .expect("nonempty");
    // dehomogenize at y = 1: coefficient of x^j is c_{n−j}
    let mut g: Vec<u32> = Vec::new();
    for f in &nonzero {
        let dehom: Vec<u32> = f.iter().rev().copied().collect();
        g = if g.is_empty() { trim(dehom) } else { poly_gcd(g, dehom, q) };
    }
    Some((k, poly_gcd(g, Vec::new(), q)))
}

/// Homogeneous gcd of two binary forms: the common power of y times the
/// re-homogenized gcd of the dehomogenizations, normalized monic.
pub fn homogeneous_gcd(f: &FqForm, g: &FqForm) -> Result<FqForm> {
    if f.q != g.q {
        return Err(Error::Domain("forms over different fields".into()));
    }
    let (k, x_part) = gcd_parts(&[&f.coeffs, &g.coeffs], f.q)
        .ok_or_else(|| Error::Domain("gcd of two zero forms".into()))?;
    // x_part = Σ e_j x^j of degree m; as a form x^{m−i}y^i has coefficient e_{m−i}
    let m = x_part.len() - 1;
    // times y^k: shift every coefficient k places towards y
    let mut coeffs = vec![0; k];
    coeffs.extend((0..=m).map(|i| x_part[m - i]));
    FqForm::new(f.q, coeffs)
}

fn is_section(forms: &[&[u32]], q: u32) -> bool {
    match gcd_parts(forms, q) {
        Some((k, g)) => k == 0 && g.len() == 1,
        None => false,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionCount {
    pub q: u32,
    pub split: Vec<i64>,
    pub d: i64,
    pub count: u64,
    /// Tuples before dividing by q − 1.
    pub raw: u64,
}

/// Enumerate every coefficient tuple once; count sections and the canonical
/// representatives (first nonzero coefficient 1).
pub fn count_sections_detailed(q: u32, split: &SplittingType, d: i64) -> Result<SectionCount> {
    check_prime(q)?;
    let lens: Vec<usize> = split.degrees().iter().map(|a| (d + a + 1).max(0) as usize).collect();
    let total: usize = lens.iter().sum();
    if total > MAX_COEFFS {
        return Err(Error::TooLarge(format!(
            "{total} coefficients exceed the budget of {MAX_COEFFS}"
        )));
    }
    let mut report = SectionCount {
        q,
        split: split.degrees().to_vec(),
        d,
        count: 0,
        raw: 0,
    };
    if total == 0 {
        return Ok(report);
    }
    let mut digits = vec![0u32; total];
    loop {
        let mut forms: Vec<&[u32]> = Vec::with_capacity(lens.len());
        let mut at = 0;
        for &l in &lens {
            forms.push(&digits[at..at + l]);
            at += l;
        }
        if is_section(&forms, q) {
            report.raw += 1;
            if digits.iter().find(|&&c| c != 0) == Some(&1) {
                report.count += 1;
            }
        }
        // odometer
        let mut i = 0;
        loop {
            if i == total {
                return Ok(report);
            }
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Number of degree-d sections of ℙ(V) → ℙ¹ over F_q.
pub fn count_sections(q: u32, split: &SplittingType, d: i64) -> Result<u64> {
    Ok(count_sections_detailed(q, split, d)?.count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split(a: &[i64]) -> SplittingType {
        SplittingType::new(a.to_vec()).unwrap()
    }

    fn form(q: u32, c: &[u32]) -> FqForm {
        FqForm::new(q, c.to_vec()).unwrap()
    }

    #[test]
    fn gcds() {
        // x², y²
        assert_eq!(homogeneous_gcd(&form(3, &[1, 0, 0]), &form(3, &[0, 0, 1])).unwrap(), form(3, &[1]));
        // xy, y² → y
        assert_eq!(homogeneous_gcd(&form(3, &[0, 1, 0]), &form(3, &[0, 0, 1])).unwrap(), form(3, &[0, 1]));
        // x² + y², x + y over F₂ → x + y
        assert_eq!(homogeneous_gcd(&form(2, &[1, 0, 1]), &form(2, &[1, 1])).unwrap(), form(2, &[1, 1]));
        assert!(homogeneous_gcd(&form(2, &[0, 0]), &form(2, &[0])).is_err());
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_sections(2, &split(&[0, 0]), 1).unwrap(), 6);
        assert_eq!(count_sections(3, &split(&[0, 0]), 1).unwrap(), 24);
        assert_eq!(count_sections(3, &split(&[0, 0]), 0).unwrap(), 4);
        assert_eq!(count_sections(2, &split(&[0, 0]), -1).unwrap(), 0);
    }

    #[test]
    fn scaling_quotient() {
        for q in [2, 3, 5] {
            for d in 0..=2 {
                let c = count_sections_detailed(q, &split(&[0, 1]), d).unwrap();
                assert_eq!(c.raw, c.count * (q as u64 - 1));
            }
        }
    }

    #[test]
    fn closed_form() {
        for q in [2u64, 3] {
            for d in 0..=3i64 {
                let want = match d {
                    0 => q + 1,
                    1 => q.pow(3) - q,
                    _ => q.pow(2 * d as u32 + 1) - q.pow(2 * d as u32 - 1),
                };
                assert_eq!(count_sections(q as u32, &split(&[0, 0]), d).unwrap(), want);
            }
        }
    }

    #[test]
    fn budget() {
        assert!(matches!(count_sections(2, &split(&[0, 0]), 6), Err(Error::TooLarge(_))));
        assert!(count_sections(4, &split(&[0]), 0).is_err());
    }
}
