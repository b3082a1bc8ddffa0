//! Rational points on Hirzebruch surfaces F_e = ℙ(O ⊕ O(e)) over ℙ¹_Q.
//!
//! A point P lies over a base point Q = [u:v] of ℙ¹ = ℙ(V) and is a line
//! [λ:μ] in the fiber lattice with Gram diag(1, H(Q)^{−2e}). With
//! h = H(Q)² the height attached to O(a, b) satisfies
//!
//!   H_{a,b}(P)² = (λ² + μ² h^{−e})^a · h^b = (λ² h^e + μ²)^a · h^{b−ae},
//!
//! which is an exact rational number. Counting is done with exact integer
//! comparisons; floats only steer the lattice enumeration.

use std::io::Write;

use num_bigint::BigInt;
use num_traits::{One, Pow};
use rayon::prelude::*;
use serde::Serialize;

use crate::arakelov::ArakelovBundle;
use crate::error::{Error, Result};
use crate::lattice::{gcd, is_canonical_sign, QuadForm};
use crate::pcount::{dirichlet_partial, dirichlet_tail_bound, HeightBound};
use crate::rational::{rat, to_f64, Rational, RationalMatrix};
use crate::specfun::{real, xi};
use crate::zclass::{continued_zeta, tauberian_predict};

/// Arguments of Z(ℙ¹, ·) at or above this value are summed directly.
const DIRECT_SUM_FROM: f64 = 4.0;

#[derive(Debug, Clone)]
pub struct HirzebruchConfig {
    pub e: i64,
    pub a: i64,
    pub b: i64,
    base: ArakelovBundle,
}

impl HirzebruchConfig {
    pub fn new(e: i64, a: i64, b: i64) -> Result<Self> {
        Self::with_base(e, a, b, RationalMatrix::identity(2))
    }

    pub fn with_base(e: i64, a: i64, b: i64, base_gram: RationalMatrix) -> Result<Self> {
        if e < 2 {
            return Err(Error::Unsupported(format!("e = {e}; only e ≥ 2 is supported")));
        }
        if a <= 0 || b <= a * e {
            return Err(Error::Domain(format!("O({a},{b}) is not ample on F_{e}: need a > 0 and b > ae")));
        }
        if base_gram.size() != 2 {
            return Err(Error::Domain("base Gram matrix must be 2×2".into()));
        }
        Ok(Self { e, a, b, base: ArakelovBundle::new(base_gram)? })
    }

    pub fn base(&self) -> &ArakelovBundle {
        &self.base
    }

    fn base_gram(&self) -> &RationalMatrix {
        self.base.exact_gram().expect("constructed from a rational matrix")
    }

    /// b − ae, the degree of the minimal section.
    pub fn section_degree(&self) -> i64 {
        self.b - self.a * self.e
    }

    pub fn is_coincident(&self) -> bool {
        self.b == (self.e + 1) * self.a
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SurfacePoint {
    pub base: (i64, i64),
    pub fiber: (i64, i64),
    #[serde(serialize_with = "ser_rational")]
    pub base_height_sq: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub total_height_sq: Rational,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn canonical_primitive(x: (i64, i64)) -> bool {
    gcd(x.0, x.1) == 1 && is_canonical_sign(&[x.0, x.1])
}

fn total_sq(cfg: &HirzebruchConfig, h: &Rational, fiber: (i64, i64)) -> Rational {
    let l2 = Rational::from_integer(BigInt::from(fiber.0) * fiber.0);
    let m2 = Rational::from_integer(BigInt::from(fiber.1) * fiber.1);
    let inner = l2 * Pow::pow(h, cfg.e as u32) + m2;
    Pow::pow(inner, cfg.a as u32) * Pow::pow(h, cfg.section_degree() as u32)
}

/// H_{a,b}(P)² for a base pair and a fiber pair, both primitive.
pub fn surface_height(cfg: &HirzebruchConfig, base: (i64, i64), fiber: (i64, i64)) -> Result<Rational> {
    for x in [base, fiber] {
        if gcd(x.0, x.1) != 1 {
            return Err(Error::NotPrimitive(vec![x.0, x.1]));
        }
    }
    let h = cfg.base_gram().quadratic_form(&[base.0, base.1]);
    Ok(total_sq(cfg, &h, fiber))
}

/// Canonical primitive base points with h = H(Q)² ≤ r2 (float filter with
/// slack; callers re-test exactly).
fn base_points(cfg: &HirzebruchConfig, r2: f64) -> Result<Vec<((i64, i64), Rational)>> {
    let qf = QuadForm::new(cfg.base.gram(), 2)?;
    let mut out = Vec::new();
    qf.for_each(r2 * (1.0 + 1e-9) + 1e-9, &mut |x, _| {
        if canonical_primitive((x[0], x[1])) {
            out.push(((x[0], x[1]), cfg.base_gram().quadratic_form(x)));
        }
    });
    out.sort_by(|p, q| p.1.cmp(&q.1).then(p.0.cmp(&q.0)));
    Ok(out)
}

/// Exact test h^k ≤ B² with k = b − ae.
fn base_admissible(h: &Rational, k: u32, b2: &Rational) -> bool {
    &Pow::pow(h, k) <= b2
}

/// Fiber points over a base point with squared height h.
fn fiber_points(cfg: &HirzebruchConfig, h: &Rational, b2: &Rational, mut visit: impl FnMut((i64, i64), Rational)) {
    let hf = to_f64(h);
    let ef = cfg.e as f64;
    // λ² + μ² h^{−e} ≤ (B²/h^b)^{1/a}
    let radius2 = ((to_f64(b2).ln() - cfg.b as f64 * hf.ln()) / cfg.a as f64).exp();
    if !(radius2 > 0.0) {
        return;
    }
    let slack = 1.0 + 1e-9;
    let lam_max = (radius2 * slack).sqrt().floor() as i64;
    for lam in 0..=lam_max {
        let rest = radius2 * slack - (lam * lam) as f64;
        let mu_max = if rest <= 0.0 { 0 } else { (rest * hf.powf(ef)).sqrt().floor() as i64 };
        let mu_lo = if lam == 0 { 1 } else { -mu_max };
        for mu in mu_lo..=mu_max {
            if !canonical_primitive((lam, mu)) {
                continue;
            }
            let t = total_sq(cfg, h, (lam, mu));
            if &t <= b2 {
                visit((lam, mu), t);
            }
        }
    }
}

/// All points with H_{a,b}(P) ≤ B, sorted by height, base, fiber.
pub fn enumerate_surface(cfg: &HirzebruchConfig, bound: &HeightBound) -> Result<Vec<SurfacePoint>> {
    let b2 = bound.squared();
    if b2 < &Rational::one() {
        return Err(Error::Domain("bound must be at least 1".into()));
    }
    let k = cfg.section_degree() as u32;
    let outer = (to_f64(b2).ln() / k as f64).exp();
    let bases = base_points(cfg, outer)?;
    let mut pts: Vec<SurfacePoint> = bases
        .par_iter()
        .flat_map_iter(|(q, h)| {
            let mut local = Vec::new();
            // h ≥ 1 forces h^k ≤ B²; below 1 every fiber still needs the test
            if h >= &Rational::one() && !base_admissible(h, k, b2) {
                return local.into_iter();
            }
            fiber_points(cfg, h, b2, |f, t| {
                local.push(SurfacePoint {
                    base: *q,
                    fiber: f,
                    base_height_sq: h.clone(),
                    total_height_sq: t,
                })
            });
            local.into_iter()
        })
        .collect();
    pts.sort_by(|p, q| {
        p.total_height_sq
            .cmp(&q.total_height_sq)
            .then(p.base.cmp(&q.base))
            .then(p.fiber.cmp(&q.fiber))
    });
    Ok(pts)
}

pub fn count_surface(cfg: &HirzebruchConfig, bound: &HeightBound) -> Result<u64> {
    let b2 = bound.squared();
    if b2 < &Rational::one() {
        return Err(Error::Domain("bound must be at least 1".into()));
    }
    let k = cfg.section_degree() as u32;
    let outer = (to_f64(b2).ln() / k as f64).exp();
    let bases = base_points(cfg, outer)?;
    Ok(bases
        .par_iter()
        .map(|(_, h)| {
            if h >= &Rational::one() && !base_admissible(h, k, b2) {
                return 0;
            }
            let mut n = 0u64;
            fiber_points(cfg, h, b2, |_, _| n += 1);
            n
        })
        .sum())
}

/// Points on the minimal section λ = 0, i.e. base points with
/// h^{b−ae} ≤ B².
pub fn minimal_section_count(cfg: &HirzebruchConfig, bound: &HeightBound) -> Result<u64> {
    let b2 = bound.squared();
    let k = cfg.section_degree() as u32;
    let outer = (to_f64(b2).ln() / k as f64).exp();
    Ok(base_points(cfg, outer)?
        .iter()
        .filter(|(_, h)| base_admissible(h, k, b2))
        .count() as u64)
}

#[derive(Debug, Clone, Serialize)]
pub struct PoleFlags {
    pub s1_in_domain: bool,
    pub s2_in_domain: bool,
    pub coincident: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PoleReport {
    pub s1: f64,
    pub rho1: f64,
    pub rho1_abs_error: f64,
    pub s2: f64,
    pub rho2: f64,
    pub sigma0: f64,
    pub flags: PoleFlags,
    /// (s*, ρ*) of the rightmost pole inside the domain.
    pub dominant: Option<(f64, f64)>,
}

/// Z(ℙ(V), x) for the base bundle at a real argument x > 2, as (value, error).
fn base_zeta(v: &ArakelovBundle, x: f64) -> Result<(f64, f64)> {
    if x >= DIRECT_SUM_FROM {
        // smallest bound in the ladder whose tail is below 1e-9
        let mut b = 50i64;
        while b < 2000 && dirichlet_tail_bound(v, x, b as f64) > 1e-9 {
            b *= 2;
        }
        let z = dirichlet_partial(v, real(x), &HeightBound::height(b))?;
        Ok((z.re(), z.abs_error))
    } else {
        let z = continued_zeta(v, real(x), 1e-11)?.value;
        Ok((z.re(), z.abs_error))
    }
}

/// Pole locations and residues of Z(F_e, s) for the height H_{a,b}.
pub fn predicted_poles(cfg: &HirzebruchConfig) -> Result<PoleReport> {
    let (e, a, b) = (cfg.e as f64, cfg.a as f64, cfg.b as f64);
    let k = cfg.section_degree() as f64;
    let two_xi2 = 2.0 * xi(cfg.base.field(), real(2.0))?.re();
    let s1 = 2.0 / a;
    let s2 = 2.0 / k;
    let sigma0 = (1.0 / a).max((e + 2.0) / b);
    let (z, z_err) = base_zeta(&cfg.base, 2.0 * b / a - e)?;
    let rho1 = z / (a * two_xi2);
    let rho2 = cfg.base.norm() / (k * two_xi2);
    let flags = PoleFlags {
        s1_in_domain: s1 > sigma0,
        s2_in_domain: s2 > sigma0,
        coincident: cfg.is_coincident(),
    };
    let mut dominant: Option<(f64, f64)> = None;
    for (s, rho, inside) in [(s1, rho1, flags.s1_in_domain), (s2, rho2, flags.s2_in_domain)] {
        if inside && dominant.is_none_or(|(d, _)| s > d) {
            dominant = Some((s, rho));
        }
    }
    Ok(PoleReport {
        s1,
        rho1,
        rho1_abs_error: z_err / (a * two_xi2),
        s2,
        rho2,
        sigma0,
        flags,
        dominant,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CountComparison {
    pub observed: u64,
    pub predicted: f64,
    pub ratio: f64,
}

/// Observed count against ρ*/s* · B^{s*} from the dominant pole.
pub fn compare_counts(cfg: &HirzebruchConfig, bound: &HeightBound) -> Result<CountComparison> {
    if cfg.is_coincident() {
        return Err(Error::Unsupported(format!(
            "b = (e+1)a = {}: the two poles coincide and the log power is not determined",
            cfg.b
        )));
    }
    let poles = predicted_poles(cfg)?;
    let (s, rho) = poles
        .dominant
        .ok_or_else(|| Error::Unsupported("no pole inside the domain of convergence".into()))?;
    let observed = count_surface(cfg, bound)?;
    let predicted = tauberian_predict(s, 1, rho, bound.as_f64())?;
    Ok(CountComparison {
        observed,
        predicted,
        ratio: observed as f64 / predicted,
    })
}

/// max(2/a, (2−e)/(b−ae)): the least A with A·L + K effective, where
/// K = O(−2, −2−e) and the effective cone is {a ≥ 0, b ≥ ae}.
pub fn alpha_invariant(cfg: &HirzebruchConfig) -> Rational {
    let first = rat(2, cfg.a);
    let second = rat(2 - cfg.e, cfg.section_degree());
    first.max(second)
}

/// CSV with columns u, v, lambda, mu, base_height_sq, total_height_sq.
pub fn write_csv<W: Write>(points: &[SurfacePoint], mut out: W) -> Result<()> {
    writeln!(out, "u,v,lambda,mu,base_height_sq,total_height_sq")?;
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            p.base.0, p.base.1, p.fiber.0, p.fiber.1, p.base_height_sq, p.total_height_sq
        )?;
    }
    Ok(())
}
