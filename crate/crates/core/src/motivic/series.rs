//! Windowed Laurent series in t over ℤ[𝕃^{±1}].
//!
//! A series stores coefficients on an explicit window [lo, hi] and records
//! whether everything below (resp. above) the window is known to vanish.
//! Arithmetic produces a result only on the exponents it fully determines.

use std::fmt;

use serde::Serialize;

use super::element::MotivicElement;
use crate::error::{Error, Result};

const INF: i64 = i64::MAX / 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MotivicSeries {
    lo: i64,
    hi: i64,
    coeffs: Vec<MotivicElement>,
    zero_below: bool,
    zero_above: bool,
}

impl MotivicSeries {
    /// A series known on [lo, lo + len − 1], zero below lo, unknown above.
    pub fn laurent(lo: i64, coeffs: Vec<MotivicElement>) -> Self {
        Self::from_parts(lo, coeffs, true, false)
    }

    /// A Laurent polynomial: zero outside the given coefficients.
    pub fn polynomial(lo: i64, coeffs: Vec<MotivicElement>) -> Self {
        Self::from_parts(lo, coeffs, true, true)
    }

    /// Polynomial from (exponent, coefficient) pairs.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, MotivicElement)>) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        let lo = terms.iter().map(|t| t.0).min().unwrap_or(0);
        let hi = terms.iter().map(|t| t.0).max().unwrap_or(-1);
        let mut coeffs = vec![MotivicElement::zero(); (hi - lo + 1).max(0) as usize];
        for (k, c) in terms {
            coeffs[(k - lo) as usize] += &c;
        }
        Self::polynomial(lo, coeffs)
    }

    fn from_parts(lo: i64, coeffs: Vec<MotivicElement>, zero_below: bool, zero_above: bool) -> Self {
        let hi = lo + coeffs.len() as i64 - 1;
        Self {
            lo,
            hi,
            coeffs,
            zero_below,
            zero_above,
        }
    }

    /// First stored exponent.
    pub fn order(&self) -> i64 {
        self.lo
    }

    /// Last stored exponent.
    pub fn truncation(&self) -> i64 {
        self.hi
    }

    pub fn is_polynomial(&self) -> bool {
        self.zero_below && self.zero_above
    }

    fn known_lo(&self) -> i64 {
        if self.zero_below {
            -INF
        } else {
            self.lo
        }
    }

    fn known_hi(&self) -> i64 {
        if self.zero_above {
            INF
        } else {
            self.hi
        }
    }

    /// Coefficient of t^m, or None when the window does not determine it.
    pub fn coeff(&self, m: i64) -> Option<MotivicElement> {
        if m >= self.lo && m <= self.hi {
            Some(self.coeffs[(m - self.lo) as usize].clone())
        } else if m >= self.known_lo() && m <= self.known_hi() {
            Some(MotivicElement::zero())
        } else {
            None
        }
    }

    fn get(&self, m: i64) -> Option<&MotivicElement> {
        if m >= self.lo && m <= self.hi {
            Some(&self.coeffs[(m - self.lo) as usize])
        } else {
            None
        }
    }

    /// (exponent, coefficient) over the stored window.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &MotivicElement)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.lo + i as i64, c))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let zb = self.zero_below && o.zero_below;
        let za = self.zero_above && o.zero_above;
        let lo = if zb { self.lo.min(o.lo) } else { self.known_lo().max(o.known_lo()) };
        let hi = if za { self.hi.max(o.hi) } else { self.known_hi().min(o.known_hi()) };
        if lo > hi + 1 {
            return Err(Error::InsufficientTruncation("sum has no determined coefficients".into()));
        }
        let coeffs = (lo..=hi)
            .map(|m| {
                let a = self.coeff(m).expect("inside known range");
                let b = o.coeff(m).expect("inside known range");
                a + b
            })
            .collect();
        Ok(Self::from_parts(lo, coeffs, zb, za))
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    /// Product of two series that are both bounded below or both bounded
    /// above; the window is every exponent whose coefficient is a finite sum
    /// of known terms.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let zb = self.zero_below && o.zero_below;
        let za = self.zero_above && o.zero_above;
        let (lo, hi) = if zb {
            let hi = if za {
                self.hi + o.hi
            } else {
                (self.known_hi().saturating_add(o.lo)).min(o.known_hi().saturating_add(self.lo))
            };
            (self.lo + o.lo, hi)
        } else if za {
            let lo = (self.known_lo().saturating_add(o.hi)).max(o.known_lo().saturating_add(self.hi));
            (lo, self.hi + o.hi)
        } else {
            return Err(Error::InsufficientTruncation(
                "product of series unbounded in opposite directions".into(),
            ));
        };
        if lo > hi + 1 {
            return Err(Error::InsufficientTruncation("product has no determined coefficients".into()));
        }
        let mut coeffs = vec![MotivicElement::zero(); (hi - lo + 1) as usize];
        for (i, a) in self.iter() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.iter() {
                let m = i + j;
                if m >= lo && m <= hi {
                    coeffs[(m - lo) as usize] += &(a * b);
                }
            }
        }
        Ok(Self::from_parts(lo, coeffs, zb, za))
    }

    pub fn scale(&self, c: &MotivicElement) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            ..self.clone()
        }
    }

    /// Multiply by t^j.
    pub fn shift(&self, j: i64) -> Self {
        Self {
            lo: self.lo + j,
            hi: self.hi + j,
            ..self.clone()
        }
    }

    /// Substitute t ↦ 𝕃^k t^{−1}: t^m goes to 𝕃^{km} t^{−m}.
    pub fn substitute_inverse(&self, k: i64) -> Self {
        let coeffs: Vec<_> = (self.lo..=self.hi)
            .rev()
            .map(|m| self.get(m).expect("stored").shift(k * m))
            .collect();
        Self::from_parts(-self.hi, coeffs, self.zero_above, self.zero_below)
    }

    /// Restrict the stored window to [lo, hi] (must lie inside the known range).
    pub fn window(&self, lo: i64, hi: i64) -> Result<Self> {
        if lo < self.known_lo() || hi > self.known_hi() {
            return Err(Error::InsufficientTruncation(format!(
                "window [{lo}, {hi}] not determined by [{}, {}]",
                self.lo, self.hi
            )));
        }
        let coeffs = (lo..=hi).map(|m| self.coeff(m).expect("known")).collect();
        let zb = self.zero_below && lo <= self.lo;
        let za = self.zero_above && hi >= self.hi;
        Ok(Self::from_parts(lo, coeffs, zb, za))
    }

    /// Drop stored zero coefficients at both ends of a polynomial.
    pub fn trimmed(&self) -> Self {
        if !self.is_polynomial() {
            return self.clone();
        }
        let terms: Vec<_> = self
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, c.clone()))
            .collect();
        Self::from_terms(terms)
    }

    /// Evaluate a Laurent polynomial at t = 𝕃^k.
    pub fn eval_l_pow(&self, k: i64) -> Result<MotivicElement> {
        if !self.is_polynomial() {
            return Err(Error::InsufficientTruncation("evaluation needs a polynomial".into()));
        }
        let mut acc = MotivicElement::zero();
        for (m, c) in self.iter() {
            acc += &c.shift(k * m);
        }
        Ok(acc)
    }

    /// Whether every stored coefficient with exponent in [from, to] is zero.
    pub fn vanishes_on(&self, from: i64, to: i64) -> Result<bool> {
        for m in from..=to {
            match self.coeff(m) {
                Some(c) if c.is_zero() => {}
                Some(_) => return Ok(false),
                None => {
                    return Err(Error::InsufficientTruncation(format!("coefficient {m} is not determined")))
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Display for MotivicSeries {
    /// One `t^m: coefficient` line per stored exponent, increasing in m.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, c) in self.iter() {
            writeln!(f, "t^{m}: {c}")?;
        }
        if !self.zero_above {
            writeln!(f, "+ O(t^{})", self.hi + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(k: i64) -> MotivicElement {
        MotivicElement::l_pow(k)
    }

    #[test]
    fn product_window() {
        // 1/(1 − t) to order 5, times (1 − t)
        let geo = MotivicSeries::laurent(0, vec![el(0); 6]);
        let p = MotivicSeries::from_terms([(0, el(0)), (1, -el(0))]);
        let prod = geo.mul(&p).unwrap();
        assert_eq!(prod.order(), 0);
        assert_eq!(prod.truncation(), 5);
        assert_eq!(prod.coeff(0), Some(el(0)));
        assert!(prod.vanishes_on(1, 5).unwrap());
        assert_eq!(prod.coeff(6), None);
        // two truncated series: only the overlap is determined
        let a = MotivicSeries::laurent(-1, vec![el(0); 4]);
        let b = MotivicSeries::laurent(2, vec![el(0); 3]);
        let ab = a.mul(&b).unwrap();
        assert_eq!((ab.order(), ab.truncation()), (1, 3));
    }

    #[test]
    fn opposite_directions_refused() {
        let a = MotivicSeries::laurent(0, vec![el(0); 3]);
        let b = a.substitute_inverse(0);
        assert!(a.mul(&b).is_err());
        let sum = a.add(&b).unwrap();
        assert_eq!((sum.order(), sum.truncation()), (-2, 2));
    }

    #[test]
    fn substitution_and_eval() {
        let p = MotivicSeries::from_terms([(0, el(0)), (2, el(1))]);
        let q = p.substitute_inverse(-1);
        assert_eq!(q.coeff(-2), Some(el(-1)));
        assert_eq!(q.coeff(0), Some(el(0)));
        assert_eq!(p.eval_l_pow(1).unwrap(), el(0) + el(3));
    }
}
