//! Rational points of bounded height on ℙ(V)(Q).
//!
//! A point is a primitive vector x ∈ ℤ^r up to sign, and its height is the
//! metric length ‖x‖_G. All comparisons against the bound are made on exact
//! squared heights, so points with H(P) = B are always counted.

use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arakelov::ArakelovBundle;
use crate::error::{Error, Result};
use crate::lattice::{cube_radius, gcd_slice, is_canonical_sign, unit_ball_volume, QuadForm};
use crate::rational::{common_denominator, to_f64, Rational, RationalMatrix};
use crate::specfun::{AnalyticValue, C64};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightRecord {
    pub coords: Vec<i64>,
    /// xᵀGx as a reduced fraction.
    pub height_sq_num: String,
    pub height_sq_den: String,
}

impl HeightRecord {
    fn new(coords: Vec<i64>, h2: &Rational) -> Self {
        Self {
            coords,
            height_sq_num: h2.numer().to_string(),
            height_sq_den: h2.denom().to_string(),
        }
    }

    pub fn height_sq(&self) -> Rational {
        let n: BigInt = self.height_sq_num.parse().expect("stored as decimal");
        let d: BigInt = self.height_sq_den.parse().expect("stored as decimal");
        BigRational::new(n, d)
    }

    pub fn height(&self) -> f64 {
        to_f64(&self.height_sq()).sqrt()
    }
}

/// An upper bound B on heights, held as the exact rational B².
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeightBound {
    squared: Rational,
}

impl HeightBound {
    pub fn from_height(b: Rational) -> Result<Self> {
        if b <= Rational::zero() {
            return Err(Error::Domain("height bound must be positive".into()));
        }
        Ok(Self { squared: &b * &b })
    }

    pub fn from_squared(b2: Rational) -> Result<Self> {
        if b2 <= Rational::zero() {
            return Err(Error::Domain("height bound must be positive".into()));
        }
        Ok(Self { squared: b2 })
    }

    pub fn height(b: i64) -> Self {
        Self::from_height(crate::rational::int(b)).expect("positive")
    }

    pub fn squared(&self) -> &Rational {
        &self.squared
    }

    pub fn as_f64(&self) -> f64 {
        to_f64(&self.squared).sqrt()
    }
}

/// Integer form of "q·xᵀMx ≤ rhs" for G = M/D and B² = p/q.
struct ExactTest {
    n: usize,
    m: Vec<i128>,
    /// Common denominator D of the Gram entries.
    d: f64,
    lhs_scale: i128,
    rhs: i128,
}

fn to_i128(x: &BigInt, what: &str) -> Result<i128> {
    x.to_i128().ok_or_else(|| Error::Overflow(what.into()))
}

impl ExactTest {
    fn new(g: &RationalMatrix, bound: &HeightBound) -> Result<Self> {
        let d = common_denominator(g.entries());
        let m = g
            .entries()
            .iter()
            .map(|e| to_i128(&(e.numer() * (&d / e.denom())), "scaled Gram entry"))
            .collect::<Result<Vec<_>>>()?;
        let b2 = bound.squared();
        Ok(Self {
            n: g.size(),
            m,
            d: to_f64(&BigRational::from_integer(d.clone())),
            lhs_scale: to_i128(b2.denom(), "bound denominator")?,
            rhs: to_i128(&(b2.numer() * &d), "scaled bound")?,
        })
    }

    /// xᵀMx, or None on overflow.
    fn form(&self, x: &[i64]) -> Option<i128> {
        let mut acc: i128 = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                let t = self.m[i * self.n + j].checked_mul(x[i] as i128 * x[j] as i128)?;
                acc = acc.checked_add(t)?;
            }
        }
        Some(acc)
    }

    /// Some(xᵀGx as f64) when x is within the bound.
    fn within(&self, x: &[i64]) -> Result<Option<f64>> {
        let f = self.form(x).ok_or_else(|| Error::Overflow("quadratic form value".into()))?;
        let v = f
            .checked_mul(self.lhs_scale)
            .ok_or_else(|| Error::Overflow("quadratic form value".into()))?;
        Ok((v <= self.rhs).then(|| f as f64 / self.d))
    }
}

fn exact_gram(v: &ArakelovBundle) -> Result<&RationalMatrix> {
    v.exact_gram()
        .ok_or_else(|| Error::Domain("point counting needs an exact rational Gram matrix".into()))
}

/// Exact squared height xᵀGx of the point spanned by the primitive vector x.
pub fn point_height(v: &ArakelovBundle, x: &[i64]) -> Result<Rational> {
    let g = exact_gram(v)?;
    if x.len() != v.rank() {
        return Err(Error::Domain(format!("expected {} coordinates", v.rank())));
    }
    if gcd_slice(x) != 1 {
        return Err(Error::NotPrimitive(x.to_vec()));
    }
    Ok(g.quadratic_form(x))
}

/// Runs `visit` on each canonical primitive vector with xᵀGx ≤ B², one
/// outer-coordinate slice per task; slices are returned in order.
fn per_slice<T, F>(v: &ArakelovBundle, bound: &HeightBound, visit: F) -> Result<Vec<T>>
where
    T: Send + Default,
    F: Fn(&mut T, &[i64], f64) + Sync,
{
    let g = exact_gram(v)?;
    let test = ExactTest::new(g, bound)?;
    let qf = QuadForm::new(v.gram(), v.rank())?;
    let r2 = to_f64(bound.squared());
    // the outermost coordinate is the last one; slices with x_{r−1} < 0 never
    // hold a representative with the sign convention used while enumerating
    let (_, hi) = qf.outer_range(r2);
    (0..=hi.max(0))
        .into_par_iter()
        .map(|outer| {
            let mut acc = T::default();
            let mut err = None;
            qf.for_each_with_outer(r2, outer, &mut |x, _| {
                if err.is_some() || !is_canonical_sign_last(x) || gcd_slice(x) != 1 {
                    return;
                }
                match test.within(x) {
                    Ok(Some(h2)) => visit(&mut acc, x, h2),
                    Ok(None) => {}
                    Err(e) => err = Some(e),
                }
            });
            match err {
                Some(e) => Err(e),
                None => Ok(acc),
            }
        })
        .collect()
}

/// Canonical sign with respect to the enumeration order: the first nonzero
/// coordinate, read from the last index down, is positive. Reversing the
/// vector maps this to "first nonzero coordinate positive".
fn is_canonical_sign_last(x: &[i64]) -> bool {
    x.iter().rev().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}

/// Normalise to "first nonzero coordinate positive".
fn canonicalise(x: &[i64]) -> Vec<i64> {
    let mut out = x.to_vec();
    if !is_canonical_sign(&out) {
        out.iter_mut().for_each(|c| *c = -*c);
    }
    out
}

/// All points with H(P) ≤ B, sorted by height and then coordinates.
pub fn enumerate_points(v: &ArakelovBundle, bound: &HeightBound) -> Result<Vec<HeightRecord>> {
    let g = exact_gram(v)?.clone();
    let slices: Vec<Vec<Vec<i64>>> = per_slice(v, bound, |acc: &mut Vec<Vec<i64>>, x, _| acc.push(canonicalise(x)))?;
    let mut pts: Vec<(Rational, Vec<i64>)> = slices
        .into_iter()
        .flatten()
        .map(|x| (g.quadratic_form(&x), x))
        .collect();
    pts.sort();
    Ok(pts.into_iter().map(|(h2, x)| HeightRecord::new(x, &h2)).collect())
}

/// Number of points with H(P) ≤ B, without storing them.
pub fn count_points(v: &ArakelovBundle, bound: &HeightBound) -> Result<u64> {
    let slices: Vec<u64> = per_slice(v, bound, |acc: &mut u64, _, _| *acc += 1)?;
    Ok(slices.into_iter().sum())
}

/// Certified bound on Σ_{H(P) > B} H(P)^{−σ} for σ > r, by partial
/// summation against N(X) ≤ c·X^r (X ≥ B), where c comes from packing unit
/// cubes into the G-ellipsoid of radius X + ρ and halving for the sign.
pub fn dirichlet_tail_bound(v: &ArakelovBundle, sigma: f64, b: f64) -> f64 {
    let r = v.rank() as f64;
    if sigma <= r {
        return f64::INFINITY;
    }
    let rho = cube_radius(v.gram());
    let c = unit_ball_volume(v.rank()) * (1.0 + rho / b).powf(r) * (-0.5 * v.log_det()).exp() / 2.0;
    sigma / (sigma - r) * c * b.powf(r - sigma)
}

/// Σ_{H(P) ≤ B} H(P)^{−s}, with the certified tail as abs_error (infinite
/// when Re s ≤ r).
pub fn dirichlet_partial(v: &ArakelovBundle, s: C64, bound: &HeightBound) -> Result<AnalyticValue> {
    if bound.as_f64() < 1.0 {
        return Err(Error::Domain("bound must be at least 1".into()));
    }
    #[derive(Default)]
    struct Acc {
        sum: C64,
        comp: C64,
        count: u64,
    }
    let slices: Vec<Acc> = per_slice(v, bound, |acc: &mut Acc, _, h2| {
        let term = (-s * 0.5 * h2.ln()).exp();
        let y = term - acc.comp;
        let t = acc.sum + y;
        acc.comp = (t - acc.sum) - y;
        acc.sum = t;
        acc.count += 1;
    })?;
    let mut sum = C64::new(0.0, 0.0);
    let mut count = 0;
    for a in &slices {
        sum += a.sum;
        count += a.count;
    }
    let rounding = 8.0 * f64::EPSILON * (count as f64).max(1.0).sqrt() * sum.norm();
    let tail = dirichlet_tail_bound(v, s.re, bound.as_f64());
    Ok(AnalyticValue::new(sum, tail + rounding))
}

/// CSV with columns x0..x{r−1}, height_sq_num, height_sq_den.
pub fn write_csv<W: Write>(records: &[HeightRecord], rank: usize, mut out: W) -> Result<()> {
    let header: Vec<String> = (0..rank)
        .map(|i| format!("x{i}"))
        .chain(["height_sq_num".to_string(), "height_sq_den".to_string()])
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for r in records {
        let row: Vec<String> = r
            .coords
            .iter()
            .map(|c| c.to_string())
            .chain([r.height_sq_num.clone(), r.height_sq_den.clone()])
            .collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn bundle(n: usize, xs: &[i64]) -> ArakelovBundle {
        ArakelovBundle::new(RationalMatrix::from_i64(n, xs).unwrap()).unwrap()
    }

    #[test]
    fn heights() {
        let id = ArakelovBundle::identity(2);
        assert_eq!(point_height(&id, &[1, 0]).unwrap(), int(1));
        assert_eq!(point_height(&id, &[3, 4]).unwrap(), int(25));
        let d = ArakelovBundle::new(RationalMatrix::diagonal(&[int(1), rat(1, 4)])).unwrap();
        assert_eq!(point_height(&d, &[0, 1]).unwrap(), rat(1, 4));
        assert_eq!(point_height(&id, &[2, 4]), Err(Error::NotPrimitive(vec![2, 4])));
        assert!(point_height(&id.twist(0.5), &[1, 0]).is_err());
    }

    #[test]
    fn small_censuses() {
        let id = ArakelovBundle::identity(2);
        let pts = enumerate_points(&id, &HeightBound::height(1)).unwrap();
        let coords: Vec<_> = pts.iter().map(|p| p.coords.clone()).collect();
        assert_eq!(coords, vec![vec![0, 1], vec![1, 0]]);
        let b = HeightBound::from_squared(int(2)).unwrap();
        let pts = enumerate_points(&id, &b).unwrap();
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().any(|p| p.coords == vec![1, -1]));
        assert_eq!(count_points(&id, &HeightBound::height(5)).unwrap(), 24);
        assert_eq!(count_points(&ArakelovBundle::identity(1), &HeightBound::height(7)).unwrap(), 1);
        assert_eq!(count_points(&ArakelovBundle::identity(3), &HeightBound::height(1)).unwrap(), 3);
    }

    #[test]
    fn closed_inequality_on_boundary() {
        // (3,4) has height exactly 5
        let pts = enumerate_points(&ArakelovBundle::identity(2), &HeightBound::height(5)).unwrap();
        assert!(pts.iter().any(|p| p.coords == vec![3, 4]));
        assert!(pts.iter().any(|p| p.coords == vec![3, -4]));
    }

    #[test]
    fn count_equals_enumeration_length() {
        let v = bundle(3, &[2, 1, 0, 1, 3, 1, 0, 1, 2]);
        let b = HeightBound::height(6);
        assert_eq!(count_points(&v, &b).unwrap() as usize, enumerate_points(&v, &b).unwrap().len());
    }

    #[test]
    fn partial_sums() {
        let id = ArakelovBundle::identity(2);
        let p = dirichlet_partial(&id, C64::new(3.0, 0.0), &HeightBound::height(1)).unwrap();
        assert!((p.value.re - 2.0).abs() < 1e-15);
        let big = dirichlet_partial(&id, C64::new(200.0, 0.0), &HeightBound::height(30)).unwrap();
        assert!((big.value.re - 2.0).abs() < 1e-15);
        let div = dirichlet_partial(&id, C64::new(1.5, 0.0), &HeightBound::height(3)).unwrap();
        assert!(div.abs_error.is_infinite());
    }

    #[test]
    fn csv_dump() {
        let pts = enumerate_points(&ArakelovBundle::identity(2), &HeightBound::height(1)).unwrap();
        let mut buf = Vec::new();
        write_csv(&pts, 2, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x0,x1,height_sq_num,height_sq_den\n0,1,1,1\n1,0,1,1\n");
    }
}
