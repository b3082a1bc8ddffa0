//! C ABI for `heightzeta`.
//!
//! Every function returns an [`HzStatus`]; results go through out-pointers.
//! On failure [`hz_last_error`] describes the error on the calling thread.
//! Handles are opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use heightzeta::arakelov::{self, ArakelovBundle};
use heightzeta::cli::parse::parse_bundle;
use heightzeta::fqoracle;
use heightzeta::hirz::{self, HirzebruchConfig};
use heightzeta::motivic::{self, SplittingType};
use heightzeta::pcount::{self, HeightBound};
use heightzeta::rational::parse_rational;
use heightzeta::zclass;
use heightzeta::Error;
use num_complex::Complex64;
use num_traits::ToPrimitive;

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Pole = 4,
    Divergent = 5,
    IllConditioned = 6,
    Unsupported = 7,
    TooLarge = 8,
    Overflow = 9,
    Numerical = 10,
    Io = 11,
    Panic = 12,
}

/// An Arakelov bundle over Q.
pub struct HzBundle(ArakelovBundle);

/// A Hirzebruch surface with a height H_{a,b}.
pub struct HzHirzebruch(HirzebruchConfig);

/// A value with a certified absolute error.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HzValue {
    pub re: f64,
    pub im: f64,
    pub abs_error: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HzStatus {
    match e {
        Error::UnsupportedField(_) | Error::Unsupported(_) => HzStatus::Unsupported,
        Error::Domain(_) | Error::InvalidMetric(_) | Error::NotPrimitive(_) => HzStatus::Domain,
        Error::Pole(_) => HzStatus::Pole,
        Error::Divergent(_) => HzStatus::Divergent,
        Error::IllConditioned(_) => HzStatus::IllConditioned,
        Error::InsufficientTruncation(_) | Error::TooLarge(_) => HzStatus::TooLarge,
        Error::Overflow(_) => HzStatus::Overflow,
        Error::Quadrature(_) => HzStatus::Numerical,
        Error::Parse(_) => HzStatus::InvalidArgument,
        Error::Io(_) | Error::ChecksumMismatch(_) => HzStatus::Io,
    }
}

struct Fail(HzStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(HzStatus::NullPointer, format!("{what} is NULL"))
}

/// Run `f`, translating errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> HzStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            HzStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            HzStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(HzStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn bundle<'a>(p: *const HzBundle) -> Result<&'a ArakelovBundle, Fail> {
    p.as_ref().map(|b| &b.0).ok_or_else(|| null("bundle"))
}

unsafe fn split_arg(a: *const i64, len: usize) -> Result<SplittingType, Fail> {
    if a.is_null() {
        return Err(null("split"));
    }
    Ok(SplittingType::new(std::slice::from_raw_parts(a, len).to_vec())?)
}

fn bound_arg(s: &str) -> Result<HeightBound, Fail> {
    Ok(HeightBound::from_height(parse_rational(s)?)?)
}

/// Last error message on this thread, or NULL. Valid until the next call
/// into this library on the same thread.
#[no_mangle]
pub extern "C" fn hz_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse a Gram spec (`I<k>` or `2,1;1,1`) into a bundle.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out_bundle` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hz_bundle_parse(spec: *const c_char, out_bundle: *mut *mut HzBundle) -> HzStatus {
    guard(|| {
        let slot = out(out_bundle, "out_bundle")?;
        let b = parse_bundle(str_arg(spec, "spec")?)?;
        *slot = Box::into_raw(Box::new(HzBundle(b)));
        Ok(())
    })
}

/// A bundle from a row-major `rank × rank` Gram matrix of doubles.
///
/// # Safety
/// `gram` must point to `rank * rank` doubles and `out_bundle` be valid.
#[no_mangle]
pub unsafe extern "C" fn hz_bundle_from_gram(
    rank: usize,
    gram: *const f64,
    out_bundle: *mut *mut HzBundle,
) -> HzStatus {
    guard(|| {
        let slot = out(out_bundle, "out_bundle")?;
        if gram.is_null() {
            return Err(null("gram"));
        }
        let n = rank
            .checked_mul(rank)
            .ok_or_else(|| Fail(HzStatus::InvalidArgument, "rank too large".into()))?;
        let g = std::slice::from_raw_parts(gram, n).to_vec();
        *slot = Box::into_raw(Box::new(HzBundle(ArakelovBundle::from_f64(rank, g)?)));
        Ok(())
    })
}

/// # Safety
/// `b` must come from this library and not have been freed; NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn hz_bundle_free(b: *mut HzBundle) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hz_bundle_rank(b: *const HzBundle, rank: *mut usize) -> HzStatus {
    guard(|| {
        *out(rank, "rank")? = bundle(b)?.rank();
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hz_bundle_degree(b: *const HzBundle, degree: *mut f64) -> HzStatus {
    guard(|| {
        *out(degree, "degree")? = bundle(b)?.degree();
        Ok(())
    })
}

/// h⁰(V) to absolute accuracy `tol`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hz_h0(b: *const HzBundle, tol: f64, value: *mut HzValue) -> HzStatus {
    guard(|| {
        if !(tol > 0.0) {
            return Err(Fail(HzStatus::InvalidArgument, "tol must be positive".into()));
        }
        let v = arakelov::h0(bundle(b)?, tol);
        *out(value, "value")? = to_value(&v);
        Ok(())
    })
}

/// h⁰(V) − h⁰(V^∨) − deg V.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hz_rr_defect(b: *const HzBundle, defect: *mut f64) -> HzStatus {
    guard(|| {
        *out(defect, "defect")? = arakelov::rr_defect(bundle(b)?)?;
        Ok(())
    })
}

fn to_value(v: &heightzeta::AnalyticValue) -> HzValue {
    HzValue {
        re: v.value.re,
        im: v.value.im,
        abs_error: v.abs_error,
    }
}

/// Z(ℙ(V), s) at s = re + i·im.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hz_zeta(b: *const HzBundle, re: f64, im: f64, tol: f64, value: *mut HzValue) -> HzStatus {
    guard(|| {
        let r = zclass::continued_zeta(bundle(b)?, Complex64::new(re, im), tol)?;
        *out(value, "value")? = to_value(&r.value);
        Ok(())
    })
}

/// Residue of Z(ℙ(V), s) at s = rank V.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hz_residue(b: *const HzBundle, residue: *mut f64) -> HzStatus {
    guard(|| {
        *out(residue, "residue")? = zclass::residue_main(bundle(b)?)?;
        Ok(())
    })
}

/// #{P ∈ ℙ(V)(Q) : H(P) ≤ B} with B a decimal or fraction string.
///
/// # Safety
/// Pointers must be valid and `bound` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn hz_count_points(b: *const HzBundle, bound: *const c_char, count: *mut u64) -> HzStatus {
    guard(|| {
        let bd = bound_arg(str_arg(bound, "bound")?)?;
        *out(count, "count")? = pcount::count_points(bundle(b)?, &bd)?;
        Ok(())
    })
}

/// F_e with the standard metric on the base.
///
/// # Safety
/// `out_surface` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hz_hirzebruch_new(e: i64, a: i64, b: i64, out_surface: *mut *mut HzHirzebruch) -> HzStatus {
    guard(|| {
        let slot = out(out_surface, "out_surface")?;
        *slot = Box::into_raw(Box::new(HzHirzebruch(HirzebruchConfig::new(e, a, b)?)));
        Ok(())
    })
}

/// # Safety
/// `h` must come from this library and not have been freed; NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn hz_hirzebruch_free(h: *mut HzHirzebruch) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Points of height ≤ B on the surface.
///
/// # Safety
/// Pointers must be valid and `bound` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn hz_hirzebruch_count(
    h: *const HzHirzebruch,
    bound: *const c_char,
    count: *mut u64,
) -> HzStatus {
    guard(|| {
        let cfg = &h.as_ref().ok_or_else(|| null("surface"))?.0;
        let bd = bound_arg(str_arg(bound, "bound")?)?;
        *out(count, "count")? = hirz::count_surface(cfg, &bd)?;
        Ok(())
    })
}

/// Location and residue of the dominant pole.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hz_hirzebruch_dominant_pole(
    h: *const HzHirzebruch,
    s: *mut f64,
    rho: *mut f64,
) -> HzStatus {
    guard(|| {
        let cfg = &h.as_ref().ok_or_else(|| null("surface"))?.0;
        let (s_out, rho_out) = (out(s, "s")?, out(rho, "rho")?);
        let p = hirz::predicted_poles(cfg)?;
        let (ps, pr) = p
            .dominant
            .ok_or_else(|| Fail(HzStatus::Unsupported, "no pole inside the domain".into()))?;
        *s_out = ps;
        *rho_out = pr;
        Ok(())
    })
}

/// Degree-d sections of ℙ(⊕O(a_i)) → ℙ¹ over F_q by enumeration.
///
/// # Safety
/// `split` must point to `len` integers and `count` be valid.
#[no_mangle]
pub unsafe extern "C" fn hz_count_sections(
    q: u32,
    split: *const i64,
    len: usize,
    d: i64,
    count: *mut u64,
) -> HzStatus {
    guard(|| {
        let st = split_arg(split, len)?;
        *out(count, "count")? = fqoracle::count_sections(q, &st, d)?;
        Ok(())
    })
}

/// Residue at t = q^{−r} of the specialized motivic Z, as num/den.
///
/// # Safety
/// `split` must point to `len` integers and the outputs be valid.
#[no_mangle]
pub unsafe extern "C" fn hz_motivic_residue(
    split: *const i64,
    len: usize,
    q: i64,
    num: *mut i64,
    den: *mut i64,
) -> HzStatus {
    guard(|| {
        let st = split_arg(split, len)?;
        let (n_out, d_out) = (out(num, "num")?, out(den, "den")?);
        let r = motivic::residue_specialized(&st, q)?;
        let overflow = || Fail(HzStatus::Overflow, "residue does not fit in 64 bits".into());
        *n_out = r.numer().to_i64().ok_or_else(overflow)?;
        *d_out = r.denom().to_i64().ok_or_else(overflow)?;
        Ok(())
    })
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn hz_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
