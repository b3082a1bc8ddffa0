//! Exact rational scalars and small square matrices.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // very large numerators/denominators: go through logs
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Parses `3`, `-7/4`, `0.25` or `1e-3` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("{s}: zero denominator")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Ok(BigRational::from_integer(n));
    }
    // decimal with optional exponent, parsed exactly
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {s}")))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (ip, fp) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let neg = ip.starts_with('-');
    let ip = ip.trim_start_matches(['-', '+']);
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) || (ip.is_empty() && fp.is_empty()) {
        return Err(Error::Parse(format!("not a rational: {s}")));
    }
    let digits = format!("{ip}{fp}");
    let mut n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
        .map_err(|e| Error::Parse(format!("{s}: {e}")))?;
    if neg {
        n = -n;
    }
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let q = if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(q)
}

/// Lowest common denominator of a slice of rationals.
pub fn common_denominator(xs: &[Rational]) -> BigInt {
    xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Dense square matrix with exact rational entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            if i > 0 {
                write!(f, ";")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

impl RationalMatrix {
    pub fn new(n: usize, entries: Vec<Rational>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::InvalidMetric(format!(
                "expected {n}x{n} entries, got {}",
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        Self { n, entries }
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let n = d.len();
        let mut entries = vec![Rational::zero(); n * n];
        for (i, x) in d.iter().enumerate() {
            entries[i * n + i] = x.clone();
        }
        Self { n, entries }
    }

    pub fn from_i64(n: usize, xs: &[i64]) -> Result<Self> {
        Self::new(n, xs.iter().map(|&x| int(x)).collect())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(to_f64).collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    /// Leading principal minors det(A[..k, ..k]) for k = 1..=n.
    pub fn leading_minors(&self) -> Vec<Rational> {
        (1..=self.n).map(|k| self.sub(k).determinant()).collect()
    }

    fn sub(&self, k: usize) -> Self {
        let mut entries = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                entries.push(self.get(i, j).clone());
            }
        }
        Self { n: k, entries }
    }

    pub fn determinant(&self) -> Rational {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Rational::zero();
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in col + 1..n {
                let f = &a[r * n + col] / &p;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = &a[col * n + j] * &f;
                    a[r * n + j] -= v;
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss–Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n).entries;
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r * n + col].is_zero())?;
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                    inv.swap(piv * n + j, col * n + j);
                }
            }
            let p = a[col * n + col].clone();
            for j in 0..n {
                a[col * n + j] /= &p;
                inv[col * n + j] /= &p;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let f = a[r * n + col].clone();
                for j in 0..n {
                    let va = &a[col * n + j] * &f;
                    let vi = &inv[col * n + j] * &f;
                    a[r * n + j] -= va;
                    inv[r * n + j] -= vi;
                }
            }
        }
        Some(Self { n, entries: inv })
    }

    /// Uᵀ A U for an integer matrix U (row-major).
    pub fn congruence(&self, u: &[i64]) -> Self {
        let n = self.n;
        let mut out = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for k in 0..n {
                    for l in 0..n {
                        let c = u[k * n + i] * u[l * n + j];
                        if c != 0 {
                            acc += self.get(k, l) * int(c);
                        }
                    }
                }
                out[i * n + j] = acc;
            }
        }
        Self { n, entries: out }
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..self.n {
            for j in 0..self.n {
                entries[i * n + j] = self.get(i, j).clone();
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                entries[(self.n + i) * n + self.n + j] = other.get(i, j).clone();
            }
        }
        Self { n, entries }
    }

    /// Exact value of xᵀ A x.
    pub fn quadratic_form(&self, x: &[i64]) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..self.n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                if x[j] != 0 {
                    acc += self.get(i, j) * int(x[i] * x[j]);
                }
            }
        }
        acc
    }
}
