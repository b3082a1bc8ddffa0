use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use heightzeta::arakelov::{bundle_algebra, h0, rr_defect, ArakelovBundle, BundleOp};
use heightzeta::cli::config::Config;
use heightzeta::cli::parse::parse_complex;
use heightzeta::fqoracle::{count_sections, count_sections_detailed, homogeneous_gcd, FqForm};
use heightzeta::motivic::{motivic_rr_defect, projective_class, MotivicElement, MotivicSeries, SplittingType};
use heightzeta::pcount::{count_points, enumerate_points, point_height, HeightBound};
use heightzeta::rational::{int, rat, RationalMatrix};
use heightzeta::specfun::{c, gamma};

fn element() -> impl Strategy<Value = MotivicElement> {
    prop::collection::vec((-4i64..=4, -20i64..=20), 0..5).prop_map(|t| {
        MotivicElement::from_terms(t.into_iter().map(|(k, c)| (k, BigInt::from(c))))
    })
}

/// Positive definite 2×2 integer Gram matrices [[a, b], [b, c]].
fn gram2() -> impl Strategy<Value = RationalMatrix> {
    (1i64..=6, -4i64..=4, 1i64..=6)
        .prop_filter("positive definite", |(a, b, c)| a * c - b * b > 0)
        .prop_map(|(a, b, c)| RationalMatrix::from_i64(2, &[a, b, b, c]).unwrap())
}

fn brute_force(g: &RationalMatrix, b2: i64, reach: i64) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    for x in -reach..=reach {
        for y in -reach..=reach {
            if (x, y) == (0, 0) || x.gcd(&y) != 1 {
                continue;
            }
            // one representative of ±
            let v = if x < 0 || (x == 0 && y < 0) { vec![-x, -y] } else { vec![x, y] };
            if g.quadratic_form(&v) <= int(b2) {
                out.insert(v);
            }
        }
    }
    out
}

fn canonical(v: &[i64]) -> Vec<i64> {
    let first = v.iter().find(|&&c| c != 0).copied().unwrap_or(1);
    if first < 0 { v.iter().map(|c| -c).collect() } else { v.to_vec() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn specialize_is_a_ring_homomorphism(x in element(), y in element(), q in 2i64..=7) {
        let (sx, sy) = (x.specialize(q).unwrap(), y.specialize(q).unwrap());
        prop_assert_eq!((&x + &y).specialize(q).unwrap(), &sx + &sy);
        prop_assert_eq!((&x * &y).specialize(q).unwrap(), &sx * &sy);
        prop_assert_eq!((-&x).specialize(q).unwrap(), -sx);
    }

    #[test]
    fn element_ring_axioms(x in element(), y in element(), z in element()) {
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn projective_class_recursion(n in -12i64..=12) {
        // [ℙ^{n+1}] = 𝕃[ℙⁿ] + 1
        let lhs = projective_class(n + 1);
        let rhs = &projective_class(n).shift(1) + &MotivicElement::one();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn polynomial_series_product_commutes(
        a in prop::collection::vec(element(), 1..4),
        b in prop::collection::vec(element(), 1..4),
        lo in -3i64..=3,
    ) {
        let p = MotivicSeries::polynomial(lo, a);
        let q = MotivicSeries::polynomial(0, b);
        let pq = p.mul(&q).unwrap();
        prop_assert_eq!(pq.trimmed(), q.mul(&p).unwrap().trimmed());
        // evaluation at t = 𝕃^k is multiplicative
        for k in -2..=2 {
            prop_assert_eq!(pq.eval_l_pow(k).unwrap(), &p.eval_l_pow(k).unwrap() * &q.eval_l_pow(k).unwrap());
        }
    }

    #[test]
    fn motivic_riemann_roch(a in prop::collection::vec(-3i64..=3, 1..=3), n in -8i64..=8) {
        let split = SplittingType::new(a).unwrap();
        prop_assert!(motivic_rr_defect(&split, n).is_zero());
    }

    #[test]
    fn gcd_is_symmetric_and_divides(
        q in prop::sample::select(vec![2u32, 3, 5]),
        f in prop::collection::vec(0u32..5, 1..5),
        g in prop::collection::vec(0u32..5, 1..5),
    ) {
        let (f, g) = (FqForm::new(q, f).unwrap(), FqForm::new(q, g).unwrap());
        prop_assume!(!(f.is_zero() && g.is_zero()));
        let d = homogeneous_gcd(&f, &g).unwrap();
        prop_assert_eq!(&d, &homogeneous_gcd(&g, &f).unwrap());
        if !f.is_zero() {
            prop_assert!(d.degree() <= f.degree());
            // the gcd of f with itself is f up to a unit
            let ff = homogeneous_gcd(&f, &f).unwrap();
            prop_assert_eq!(ff.degree(), f.degree());
        }
    }

    #[test]
    fn census_matches_brute_force(g in gram2(), b2 in 1i64..=30) {
        let v = ArakelovBundle::new(g.clone()).unwrap();
        let bound = HeightBound::from_squared(int(b2)).unwrap();
        let got: BTreeSet<Vec<i64>> = enumerate_points(&v, &bound)
            .unwrap()
            .into_iter()
            .map(|r| canonical(&r.coords))
            .collect();
        // xᵀGx ≥ λ_min|x|² ≥ |x|²·det/trace, so |x_i|² ≤ b2·trace/det
        let det = g.get(0, 0) * g.get(1, 1) - g.get(0, 1) * g.get(0, 1);
        let tr = g.get(0, 0) + g.get(1, 1);
        let reach = (b2 as f64 * heightzeta::rational::to_f64(&(tr / det))).sqrt().ceil() as i64 + 1;
        prop_assert_eq!(got, brute_force(&g, b2, reach));
    }

    #[test]
    fn census_is_invariant_under_gl2z(g in gram2(), k in -3i64..=3, swap in any::<bool>(), b in 1i64..=6) {
        let u = if swap { [k, 1, 1, 0] } else { [1, k, 0, 1] };
        let v = ArakelovBundle::new(g.clone()).unwrap();
        let w = ArakelovBundle::new(g.congruence(&u)).unwrap();
        let bound = HeightBound::height(b);
        prop_assert_eq!(count_points(&v, &bound).unwrap(), count_points(&w, &bound).unwrap());
    }

    #[test]
    fn heights_are_sign_invariant(g in gram2(), x in -9i64..=9, y in -9i64..=9) {
        prop_assume!((x, y) != (0, 0) && x.gcd(&y) == 1);
        let v = ArakelovBundle::new(g.clone()).unwrap();
        prop_assert_eq!(point_height(&v, &[x, y]).unwrap(), point_height(&v, &[-x, -y]).unwrap());
        prop_assert_eq!(point_height(&v, &[x, y]).unwrap(), g.quadratic_form(&[x, y]));
    }

    #[test]
    fn theta_riemann_roch(g in gram2(), num in 1i64..=10, den in 1i64..=10, t in -2.0f64..2.0) {
        let v = ArakelovBundle::new(g.scale(&rat(num, den))).unwrap().twist(t);
        prop_assert!(rr_defect(&v).unwrap().abs() <= 1e-9);
    }

    #[test]
    fn degree_identities(g in gram2(), t in -2.0f64..2.0) {
        let v = ArakelovBundle::new(g).unwrap();
        let w = ArakelovBundle::identity(1).twist(0.5);
        let sum = bundle_algebra(&v, Some(&w), BundleOp::DirectSum).unwrap();
        prop_assert!((sum.degree() - v.degree() - w.degree()).abs() <= 1e-12);
        prop_assert!((v.dual().degree() + v.degree()).abs() <= 1e-12);
        prop_assert!((v.twist(t).degree() - v.degree() - 2.0 * t).abs() <= 1e-12);
    }

    #[test]
    fn h0_monotone_in_twist(g in gram2(), t in -2.0f64..2.0, dt in 0.01f64..1.0) {
        let v = ArakelovBundle::new(g).unwrap();
        prop_assert!(h0(&v.twist(t), 1e-12).re() <= h0(&v.twist(t + dt), 1e-12).re() + 1e-12);
    }

    #[test]
    fn gamma_recurrence(re in 0.2f64..8.0, im in -10.0f64..10.0) {
        let s = c(re, im);
        let lhs = gamma(s + 1.0).unwrap().value;
        let rhs = s * gamma(s).unwrap().value;
        prop_assert!((lhs - rhs).norm() <= 1e-11 * lhs.norm());
    }

    #[test]
    fn complex_parse_roundtrip(re in -1e3f64..1e3, im in -1e3f64..1e3) {
        let text = format!("{re}{}{}i", if im < 0.0 { "-" } else { "+" }, im.abs());
        let z = parse_complex(&text).unwrap();
        prop_assert_eq!((z.re, z.im), (re, im));
    }

    #[test]
    fn config_roundtrip(tol in 1e-14f64..1.0, cache in any::<bool>(), pretty in any::<bool>(), det in any::<bool>()) {
        let text = format!("tol = {tol}\ncache = {cache}\npretty = {pretty}\ndeterministic = {det}\n");
        let cfg = Config::parse(&text).unwrap();
        prop_assert_eq!(cfg, Config { tol, cache, pretty, deterministic: det });
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn section_counts_shift_with_the_split(
        a in prop::collection::vec(-1i64..=1, 2),
        shift in -1i64..=1,
        d in 0i64..=2,
        q in prop::sample::select(vec![2u32, 3]),
    ) {
        // Sect_d(⊕O(a_i + c)) = Sect_{d+c}(⊕O(a_i))
        let base = SplittingType::new(a.clone()).unwrap();
        let moved = SplittingType::new(a.iter().map(|x| x + shift).collect()).unwrap();
        prop_assert_eq!(count_sections(q, &moved, d).unwrap(), count_sections(q, &base, d + shift).unwrap());
        let det = count_sections_detailed(q, &base, d).unwrap();
        prop_assert_eq!(det.raw, det.count * (q as u64 - 1));
    }
}
