//! Laurent polynomials in 𝕃 with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of ℤ[𝕃^{±1}]; zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MotivicElement {
    terms: BTreeMap<i64, BigInt>,
}

impl MotivicElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::l_pow(0)
    }

    /// 𝕃^k.
    pub fn l_pow(k: i64) -> Self {
        Self::monomial(k, 1)
    }

    pub fn monomial(k: i64, c: impl Into<BigInt>) -> Self {
        let mut out = Self::zero();
        out.add_term(k, c.into());
        out
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, c.into());
        }
        out
    }

    fn add_term(&mut self, k: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    /// (exponent, coefficient) pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// Multiply by 𝕃^k.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (*k, v * c)))
    }

    /// Substitute 𝕃 ↦ q.
    pub fn specialize(&self, q: i64) -> Result<BigRational> {
        if q < 2 {
            return Err(Error::Domain(format!("specialization needs q ≥ 2, got {q}")));
        }
        let qb = BigRational::from_integer(BigInt::from(q));
        let mut acc = BigRational::zero();
        for (k, c) in &self.terms {
            let p = Pow::pow(&qb, *k as i32);
            acc += p * BigRational::from_integer(c.clone());
        }
        Ok(acc)
    }
}

impl fmt::Display for MotivicElement {
    /// Highest power of 𝕃 first, e.g. `L^2 + L + 1 - L^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let unit = mag.is_one();
            match (*k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "L")?,
                (1, false) => write!(f, "{mag}*L")?,
                (k, true) => write!(f, "L^{k}")?,
                (k, false) => write!(f, "{mag}*L^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for MotivicElement {
    /// `{"<exponent>": "<coefficient>", ...}`
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.terms.len()))?;
        for (k, c) in &self.terms {
            m.serialize_entry(&k.to_string(), &c.to_string())?;
        }
        m.end()
    }
}

impl Add for &MotivicElement {
    type Output = MotivicElement;
    fn add(self, o: &MotivicElement) -> MotivicElement {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl Add for MotivicElement {
    type Output = MotivicElement;
    fn add(mut self, o: MotivicElement) -> MotivicElement {
        self += &o;
        self
    }
}

impl AddAssign<&MotivicElement> for MotivicElement {
    fn add_assign(&mut self, o: &MotivicElement) {
        for (k, c) in &o.terms {
            self.add_term(*k, c.clone());
        }
    }
}

impl Neg for &MotivicElement {
    type Output = MotivicElement;
    fn neg(self) -> MotivicElement {
        MotivicElement {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Neg for MotivicElement {
    type Output = MotivicElement;
    fn neg(self) -> MotivicElement {
        -&self
    }
}

impl Sub for &MotivicElement {
    type Output = MotivicElement;
    fn sub(self, o: &MotivicElement) -> MotivicElement {
        self + &(-o)
    }
}

impl Sub for MotivicElement {
    type Output = MotivicElement;
    fn sub(self, o: MotivicElement) -> MotivicElement {
        &self - &o
    }
}

impl Mul for &MotivicElement {
    type Output = MotivicElement;
    fn mul(self, o: &MotivicElement) -> MotivicElement {
        let mut out = MotivicElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Mul for MotivicElement {
    type Output = MotivicElement;
    fn mul(self, o: MotivicElement) -> MotivicElement {
        &self * &o
    }
}

/// [ℙⁿ] for every integer n: 1 + 𝕃 + … + 𝕃ⁿ for n ≥ 0, 0 for n = −1 and
/// −𝕃^{−1} − … − 𝕃^{−(−n−1)} below, so that [ℙ^{n+1}] = 𝕃[ℙⁿ] + 1 always.
pub fn projective_class(n: i64) -> MotivicElement {
    if n >= 0 {
        MotivicElement::from_terms((0..=n).map(|i| (i, 1)))
    } else {
        MotivicElement::from_terms((1..=-n - 1).map(|i| (-i, -1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes() {
        assert_eq!(projective_class(2), MotivicElement::from_terms([(0, 1), (1, 1), (2, 1)]));
        assert!(projective_class(-1).is_zero());
        assert_eq!(projective_class(-2), MotivicElement::monomial(-1, -1));
        assert_eq!(projective_class(-4).to_string(), "-L^-1 - L^-2 - L^-3");
    }

    #[test]
    fn recursion_everywhere() {
        for n in -10..10 {
            let lhs = projective_class(n + 1);
            let rhs = projective_class(n).shift(1) + MotivicElement::one();
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn specialization() {
        assert_eq!(projective_class(1).specialize(3).unwrap(), BigRational::from_integer(4.into()));
        let x = MotivicElement::from_terms([(3, 1), (1, -1)]);
        assert_eq!(x.specialize(2).unwrap(), BigRational::from_integer(6.into()));
        assert_eq!(
            projective_class(-2).specialize(2).unwrap(),
            BigRational::new((-1).into(), 2.into())
        );
        assert!(x.specialize(1).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(MotivicElement::zero().to_string(), "0");
        assert_eq!(MotivicElement::from_terms([(1, 2), (0, -3)]).to_string(), "2*L - 3");
        assert_eq!(MotivicElement::from_terms([(3, 1), (1, -1)]).to_string(), "L^3 - L");
    }
}
