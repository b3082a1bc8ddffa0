//! Motivic height zeta functions of projective bundles ℙ(V) over ℙ¹.
//!
//! At genus 0 every class in play is a Laurent polynomial in 𝕃, so the
//! engine works in ℤ[𝕃^{±1}]. For V = ⊕ O(a_i) the space of degree-n data
//! is X_n(V) ≅ ℙ^{h_n − 1} with h_n = Σ max(0, n + a_i + 1), and
//!
//!   ζ(t) Z(ℙ(V), t) = Σ_n [X_n(V)] tⁿ,    ζ(t) = 1/((1 − t)(1 − 𝕃t)).
//!
//! Rationality, critical values and the functional equation all reduce to
//! identities between Laurent polynomials once the series is multiplied by
//! (t − 1)(t − 𝕃^{−r}).

mod element;
mod series;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

pub use element::{projective_class, MotivicElement};
pub use series::MotivicSeries;

use crate::error::{Error, Result};

/// V = ⊕ O(a_i) on ℙ¹, stored with a₁ ≥ … ≥ a_r.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SplittingType {
    a: Vec<i64>,
}

impl SplittingType {
    pub fn new(mut a: Vec<i64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Domain("splitting type needs rank ≥ 1".into()));
        }
        a.sort_unstable_by(|x, y| y.cmp(x));
        Ok(Self { a })
    }

    pub fn degrees(&self) -> &[i64] {
        &self.a
    }

    pub fn rank(&self) -> i64 {
        self.a.len() as i64
    }

    pub fn degree(&self) -> i64 {
        self.a.iter().sum()
    }

    pub fn dual(&self) -> Self {
        Self::new(self.a.iter().map(|x| -x).collect()).expect("same rank")
    }

    /// n₁ = −min a_i; from n₁ on, h_n = rn + deg V + r.
    pub fn stabilization(&self) -> i64 {
        -*self.a.last().expect("rank ≥ 1")
    }

    /// −max a_i − 1: every X_n below this index is empty.
    pub fn first_index(&self) -> i64 {
        -self.a[0] - 1
    }
}

fn ell(k: i64) -> MotivicElement {
    MotivicElement::l_pow(k)
}

/// (1 − t)(1 − 𝕃t).
fn zeta_denominator() -> MotivicSeries {
    MotivicSeries::from_terms([(0, ell(0)), (1, -(ell(0) + ell(1))), (2, ell(1))])
}

/// (t − 1)(t − 𝕃^{−k}).
fn critical_denominator(k: i64) -> MotivicSeries {
    MotivicSeries::from_terms([(0, ell(-k)), (1, -(ell(0) + ell(-k))), (2, ell(0))])
}

/// Σ_{0≤n≤N} [ℙⁿ] tⁿ, the Kapranov zeta function of ℙ¹.
pub fn zeta_p1_series(n: i64) -> Result<MotivicSeries> {
    if n < 0 {
        return Err(Error::Domain("truncation must be ≥ 0".into()));
    }
    Ok(MotivicSeries::laurent(0, (0..=n).map(projective_class).collect()))
}

/// [X_n(V)] = [ℙ^{h−1}] with h = Σ max(0, n + a_i + 1).
pub fn x_n_class(split: &SplittingType, n: i64) -> MotivicElement {
    let h: i64 = split.a.iter().map(|a| (n + a + 1).max(0)).sum();
    projective_class(h - 1)
}

/// Σ_n [X_n(V)] tⁿ on [−max a_i − 1, N].
pub fn zeta_z_series(split: &SplittingType, n: i64) -> Result<MotivicSeries> {
    if n < 0 {
        return Err(Error::Domain("truncation must be ≥ 0".into()));
    }
    let lo = split.first_index();
    Ok(MotivicSeries::laurent(lo, (lo..=n).map(|k| x_n_class(split, k)).collect()))
}

/// Σ_d [Sect_d(ℙ(V))] t^d = (1 − t)(1 − 𝕃t) ζ(t)Z(ℙ(V), t) on
/// [−max a_i − 1, N − 2].
pub fn sect_series(split: &SplittingType, n: i64) -> Result<MotivicSeries> {
    if n < 2 {
        return Err(Error::Domain("truncation must be ≥ 2".into()));
    }
    let full = zeta_z_series(split, n)?.mul(&zeta_denominator())?;
    full.window(split.first_index(), n - 2)
}

#[derive(Debug, Clone, Serialize)]
pub struct RationalityReport {
    pub split: Vec<i64>,
    pub truncation: i64,
    pub stabilization: i64,
    /// P(t) = (t − 1)(t − 𝕃^{−r}) ζ(t)Z(ℙ(V), t) as a Laurent polynomial.
    pub polynomial: MotivicSeries,
    /// Exponents checked to vanish.
    pub residual_window: (i64, i64),
    pub residual_zero: bool,
}

/// Multiply ζZ by (t − 1)(t − 𝕃^{−r}) and check that every coefficient past
/// n₁ + 1 vanishes.
pub fn rationality_witness(split: &SplittingType, n: i64) -> Result<RationalityReport> {
    let n1 = split.stabilization();
    if n < n1 + 4 {
        return Err(Error::InsufficientTruncation(format!(
            "N = {n} is below n₁ + 4 = {}",
            n1 + 4
        )));
    }
    let p = zeta_z_series(split, n)?.mul(&critical_denominator(split.rank()))?;
    let window = (n1 + 2, n);
    let residual_zero = p.vanishes_on(window.0, window.1)?;
    let head: Vec<_> = p
        .window(split.first_index(), n1 + 1)?
        .iter()
        .map(|(k, c)| (k, c.clone()))
        .collect();
    Ok(RationalityReport {
        split: split.a.clone(),
        truncation: n,
        stabilization: n1,
        polynomial: MotivicSeries::from_terms(head).trimmed(),
        residual_window: window,
        residual_zero,
    })
}

fn witness_polynomial(split: &SplittingType) -> Result<MotivicSeries> {
    let rep = rationality_witness(split, split.stabilization().max(0) + 8)?;
    if !rep.residual_zero {
        return Err(Error::Domain(format!("ζZ is not rational for split {:?}", split.a)));
    }
    Ok(rep.polynomial)
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalValue {
    pub value: MotivicElement,
    pub expected: MotivicElement,
    pub defect: MotivicElement,
    pub defect_is_zero: bool,
}

/// P(𝕃^{−r}) against 𝕃^{−1+deg V}(1 − [ℙ^{−r}]).
pub fn value_at_critical(split: &SplittingType) -> Result<CriticalValue> {
    let p = witness_polynomial(split)?;
    let value = p.eval_l_pow(-split.rank())?;
    let expected = ell(split.degree() - 1) * (ell(0) - projective_class(-split.rank()));
    let defect = &value - &expected;
    Ok(CriticalValue {
        defect_is_zero: defect.is_zero(),
        value,
        expected,
        defect,
    })
}

/// [X_n(V)] − 𝕃^{r(n+1)+deg V}[X_{−2−n}(V^∨)] − [ℙ^{r(n+1)+deg V−1}].
pub fn motivic_rr_defect(split: &SplittingType, n: i64) -> MotivicElement {
    let k = split.rank() * (n + 1) + split.degree();
    let dual = x_n_class(&split.dual(), -2 - n).shift(k);
    &(&x_n_class(split, n) - &dual) - &projective_class(k - 1)
}

#[derive(Debug, Clone, Serialize)]
pub struct FunceqReport {
    pub split: Vec<i64>,
    /// P_V(t).
    pub lhs: MotivicSeries,
    /// 𝕃^{deg V} P_{V^∨}(𝕃^{−r} t^{−1}).
    pub rhs: MotivicSeries,
    pub defect: MotivicSeries,
    pub all_zero: bool,
}

/// The functional equation ζZ_V(t) = 𝕃^{deg V − r} t^{−2} ζZ_{V^∨}(𝕃^{−r}t^{−1}).
/// Both sides share the denominator (t − 1)(t − 𝕃^{−r}) after the
/// substitution, so the identity is checked on numerators:
/// P_V(t) = 𝕃^{deg V} P_{V^∨}(𝕃^{−r} t^{−1}).
pub fn funceq_defect_motivic(split: &SplittingType, n: i64) -> Result<FunceqReport> {
    let dual = split.dual();
    let lhs = rationality_witness(split, n)?;
    let rhs_src = rationality_witness(&dual, n)?;
    if !lhs.residual_zero || !rhs_src.residual_zero {
        return Err(Error::Domain("numerator is not a polynomial in the window".into()));
    }
    let rhs = rhs_src
        .polynomial
        .substitute_inverse(-split.rank())
        .scale(&ell(split.degree()));
    let defect = lhs.polynomial.sub(&rhs)?.trimmed();
    let all_zero = defect.iter().all(|(_, c)| c.is_zero());
    Ok(FunceqReport {
        split: split.a.clone(),
        all_zero,
        lhs: lhs.polynomial,
        rhs: rhs.trimmed(),
        defect,
    })
}

/// 𝕃 ↦ q on every stored coefficient.
pub fn specialize_series(s: &MotivicSeries, q: i64) -> Result<Vec<(i64, BigRational)>> {
    s.iter().map(|(k, c)| Ok((k, c.specialize(q)?))).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaPolyReport {
    pub a: i64,
    pub b: i64,
    pub truncation: i64,
    pub g: MotivicSeries,
    pub vanishing: bool,
    pub value: MotivicElement,
    pub expected: MotivicElement,
    pub value_matches: bool,
    /// Σ_{n<0} + Σ_{n≥0} of [ℙ^{an+b}]tⁿ is the zero rational function.
    pub two_sided_zero: bool,
    pub pass: bool,
}

/// g(t) = (t − 1)(t − 𝕃^{−a}) Σ_{n≥0} [ℙ^{an+b}] tⁿ is linear in t with
/// g(𝕃^{−a}) = 𝕃^{b−a}(1 − [ℙ^{−a}]); the series over n < 0 cancels it.
pub fn lemma_poly_check(a: i64, b: i64, n: i64) -> Result<LemmaPolyReport> {
    if n < 4 {
        return Err(Error::InsufficientTruncation("N must be at least 4".into()));
    }
    if a < 1 {
        return Err(Error::Domain("a must be positive".into()));
    }
    let plus = MotivicSeries::laurent(0, (0..=n).map(|k| projective_class(a * k + b)).collect());
    let g_full = plus.mul(&critical_denominator(a))?;
    let vanishing = g_full.vanishes_on(2, n)?;
    let g = MotivicSeries::from_terms(g_full.iter().filter(|(k, _)| *k <= 1).map(|(k, c)| (k, c.clone())));
    let value = g.eval_l_pow(-a)?;
    let expected = ell(b - a) * (ell(0) - projective_class(-a));

    // n < 0 in s = t^{−1}: Σ_{m≥1} [ℙ^{b−am}] s^m times (1 − s)(1 − 𝕃^{−a}s)
    let minus = MotivicSeries::laurent(1, (1..=n).map(|m| projective_class(b - a * m)).collect());
    let den_s = MotivicSeries::from_terms([(0, ell(0)), (1, -(ell(0) + ell(-a))), (2, ell(-a))]);
    let h_full = minus.mul(&den_s)?;
    let h_vanishing = h_full.vanishes_on(3, n)?;
    let h = MotivicSeries::from_terms(h_full.iter().filter(|(k, _)| *k <= 2).map(|(k, c)| (k, c.clone())));
    // back in t the numerator over (t − 1)(t − 𝕃^{−a}) is t²·h(t^{−1})
    let h_t = h.substitute_inverse(0).shift(2);
    let total = g.add(&h_t)?;
    let two_sided_zero = h_vanishing && total.iter().all(|(_, c)| c.is_zero());

    let value_matches = value == expected;
    Ok(LemmaPolyReport {
        a,
        b,
        truncation: n,
        g: g.trimmed(),
        vanishing,
        pass: vanishing && value_matches && two_sided_zero,
        value,
        expected,
        value_matches,
        two_sided_zero,
    })
}

fn q_pow(q: i64, k: i64) -> BigRational {
    Pow::pow(BigRational::from_integer(BigInt::from(q)), k as i32)
}

/// Residue at t = q^{−r} of the specialized Z(ℙ(V), t):
/// −q^{deg V}(1 − q^{−r})(1 − q^{1−r})/(q − 1).
pub fn residue_specialized(split: &SplittingType, q: i64) -> Result<BigRational> {
    if q < 2 {
        return Err(Error::Domain(format!("q must be ≥ 2, got {q}")));
    }
    let r = split.rank();
    let one = BigRational::one();
    Ok(-q_pow(q, split.degree()) * (&one - q_pow(q, -r)) * (&one - q_pow(q, 1 - r))
        / BigRational::from_integer(BigInt::from(q - 1)))
}

/// The same residue read off the specialized series: multiply Σ #Sect_d t^d
/// by D(t) = (t − 1)(t − q^{−r}), check the product is a polynomial N(t) in
/// the window, and return N(t₀)/D'(t₀) at t₀ = q^{−r}.
pub fn residue_extracted(split: &SplittingType, q: i64) -> Result<BigRational> {
    let n1 = split.stabilization().max(0);
    let n = n1 + 12;
    let sect = specialize_series(&sect_series(split, n)?, q)?;
    let t0 = q_pow(q, -split.rank());
    let one = BigRational::one();
    let den = [t0.clone(), -(&one + &t0), one.clone()];
    let lo = sect[0].0;
    let hi = sect.last().expect("nonempty").0;
    // coefficient m of the product needs sect at m, m−1, m−2
    let mut num = Vec::new();
    for m in lo..=hi {
        let mut acc = BigRational::zero();
        for (j, d) in den.iter().enumerate() {
            let k = m - j as i64;
            if k >= lo {
                acc += d * &sect[(k - lo) as usize].1;
            }
        }
        num.push((m, acc));
    }
    // −P(t)(1 − qt) has degree at most n₁ + 3
    if num.iter().any(|(m, c)| *m > n1 + 3 && !c.is_zero()) {
        return Err(Error::Domain("specialized numerator is not a polynomial".into()));
    }
    let value = num.iter().fold(BigRational::zero(), |acc, (m, c)| acc + c * Pow::pow(&t0, *m as i32));
    let d_prime = BigRational::from_integer(2.into()) * &t0 - (&one + &t0);
    Ok(value / d_prime)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split(a: &[i64]) -> SplittingType {
        SplittingType::new(a.to_vec()).unwrap()
    }

    fn el(terms: &[(i64, i64)]) -> MotivicElement {
        MotivicElement::from_terms(terms.iter().copied())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn kapranov_zeta() {
        let z = zeta_p1_series(6).unwrap();
        assert_eq!(z.coeff(2), Some(el(&[(0, 1), (1, 1), (2, 1)])));
        let prod = z.mul(&zeta_denominator()).unwrap();
        assert_eq!(prod.coeff(0), Some(MotivicElement::one()));
        assert!(prod.vanishes_on(1, 6).unwrap());
        // ζ(t) = 𝕃^{−1} t^{−2} ζ(𝕃^{−1}t^{−1}): numerators agree after clearing
        // the common denominator, (1 − t)(1 − 𝕃t) ↦ 𝕃^{−1}t^{−2}(1 − t)(1 − 𝕃t)·𝕃
        let den = zeta_denominator();
        let back = den.substitute_inverse(-1).shift(2).scale(&ell(1));
        assert_eq!(back.trimmed(), den.trimmed());
    }

    #[test]
    fn x_classes() {
        assert_eq!(x_n_class(&split(&[0, 0]), 1), projective_class(3));
        assert!(x_n_class(&split(&[0, 0]), -1).is_zero());
        assert_eq!(x_n_class(&split(&[0, 2]), 0), projective_class(3));
        assert_eq!(x_n_class(&split(&[-1, 1]), 0), projective_class(1));
        let s = zeta_z_series(&split(&[0, 0]), 5).unwrap();
        for n in 0..=5 {
            assert_eq!(s.coeff(n), Some(projective_class(2 * n + 1)));
        }
    }

    #[test]
    fn sections() {
        let s = sect_series(&split(&[0, 0]), 8).unwrap();
        assert_eq!(s.truncation(), 6);
        assert_eq!(s.coeff(0), Some(projective_class(1)));
        assert_eq!(s.coeff(1), Some(el(&[(3, 1), (1, -1)])));
        assert_eq!(s.coeff(-1), Some(MotivicElement::zero()));
    }

    #[test]
    fn rationality() {
        let rep = rationality_witness(&split(&[0, 0]), 12).unwrap();
        assert!(rep.residual_zero);
        assert!(rationality_witness(&split(&[0, 3]), 15).unwrap().residual_zero);
        assert!(matches!(
            rationality_witness(&split(&[0, 0]), 3),
            Err(Error::InsufficientTruncation(_))
        ));
    }

    #[test]
    fn critical_values() {
        let v = value_at_critical(&split(&[0, 0])).unwrap();
        assert_eq!(v.value, el(&[(-1, 1), (-2, 1)]));
        assert!(v.defect_is_zero);
        let w = value_at_critical(&split(&[0, 1])).unwrap();
        assert_eq!(w.value, el(&[(0, 1), (-1, 1)]));
        assert!(w.defect_is_zero);
        let one = value_at_critical(&split(&[0])).unwrap();
        assert_eq!(one.value, ell(-1));
    }

    #[test]
    fn riemann_roch() {
        assert!(motivic_rr_defect(&split(&[0, 0]), 3).is_zero());
        assert!(motivic_rr_defect(&split(&[0, 0]), -1).is_zero());
        for n in -5..=5 {
            assert!(motivic_rr_defect(&split(&[-2, 3]), n).is_zero(), "n = {n}");
        }
    }

    #[test]
    fn functional_equation() {
        assert!(funceq_defect_motivic(&split(&[0, 0]), 12).unwrap().all_zero);
        assert!(funceq_defect_motivic(&split(&[1, 2]), 14).unwrap().all_zero);
        assert!(funceq_defect_motivic(&split(&[0, 0, 0]), 12).unwrap().all_zero);
    }

    #[test]
    fn lemma_polynomial() {
        let r = lemma_poly_check(2, 0, 10).unwrap();
        assert!(r.pass);
        assert_eq!(r.g, MotivicSeries::from_terms([(0, ell(-2)), (1, ell(-1))]));
        assert_eq!(lemma_poly_check(1, 0, 10).unwrap().value, ell(-1));
        let c = lemma_poly_check(3, 2, 12).unwrap();
        assert_eq!(c.value, el(&[(-1, 1), (-2, 1), (-3, 1)]));
        assert!(c.pass);
    }

    #[test]
    fn specialization_values() {
        assert_eq!(ell(3).specialize(2).unwrap() - ell(1).specialize(2).unwrap(), rat(6, 1));
        let sect = sect_series(&split(&[0, 0]), 4).unwrap();
        let sp = specialize_series(&sect, 3).unwrap();
        assert_eq!(sp.iter().find(|(k, _)| *k == 1).unwrap().1, rat(24, 1));
    }

    #[test]
    fn residues() {
        assert_eq!(residue_specialized(&split(&[0, 0]), 2).unwrap(), rat(-3, 8));
        assert_eq!(residue_specialized(&split(&[0, 0]), 3).unwrap(), rat(-8, 27));
        assert_eq!(residue_specialized(&split(&[0, 1]), 2).unwrap(), rat(-3, 4));
        for (a, q) in [(vec![0, 0], 2), (vec![0, 0], 3), (vec![0, 1], 2), (vec![-1, 2, 0], 5)] {
            let s = split(&a);
            assert_eq!(residue_extracted(&s, q).unwrap(), residue_specialized(&s, q).unwrap());
        }
    }
}
