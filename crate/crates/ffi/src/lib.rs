//! C ABI over `toric-cap`.
//!
//! Regions live behind the opaque [`TcProfile`] handle. Every fallible call
//! returns a [`TcStatus`]; on failure the message is kept per thread and can
//! be read with [`tc_last_error`]. Rationals cross the boundary as `"p/q"`
//! strings, which the caller releases with [`tc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use toric_cap::rational::{fmt_q, parse_q};
use toric_cap::{Error, MethodChoice, Threshold, ToricProfile, Window, Q};

/// Opaque region handle.
pub struct TcProfile {
    inner: ToricProfile,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    InvalidDomain = 3,
    InvalidThreshold = 4,
    DegenerateEdge = 5,
    SpectrumBoundary = 6,
    Contract = 7,
    Truncation = 8,
    Parse = 9,
    Overflow = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcMethod {
    Auto = 0,
    General = 1,
    Formula = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TcStatus {
    match e {
        Error::InvalidParameter(_) | Error::Io(_) => TcStatus::InvalidParameter,
        Error::InvalidProfile(_) => TcStatus::InvalidDomain,
        Error::InvalidThreshold(_) => TcStatus::InvalidThreshold,
        Error::DegenerateEdge { .. } => TcStatus::DegenerateEdge,
        Error::SpectrumBoundary { .. } => TcStatus::SpectrumBoundary,
        Error::Contract(_) => TcStatus::Contract,
        Error::Truncation(_) => TcStatus::Truncation,
        Error::Parse(_) => TcStatus::Parse,
    }
}

struct Fail(TcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TcStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TcStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(TcStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(TcStatus::Parse, format!("{name} is not UTF-8")))
}

unsafe fn q_arg(p: *const c_char, name: &str) -> Result<Q, Fail> {
    Ok(parse_q(str_arg(p, name)?)?)
}

unsafe fn profile_arg<'a>(p: *const TcProfile) -> Result<&'a ToricProfile, Fail> {
    p.as_ref()
        .map(|p| &p.inner)
        .ok_or_else(|| Fail(TcStatus::NullPointer, "profile is null".into()))
}

fn out_check<T>(out: *mut T) -> Result<(), Fail> {
    if out.is_null() {
        Err(Fail(TcStatus::NullPointer, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn method(m: TcMethod) -> MethodChoice {
    match m {
        TcMethod::Auto => MethodChoice::Auto,
        TcMethod::General => MethodChoice::General,
        TcMethod::Formula => MethodChoice::Formula,
    }
}

unsafe fn store_profile(out: *mut *mut TcProfile, p: ToricProfile) {
    *out = Box::into_raw(Box::new(TcProfile { inner: p }));
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn tc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"vertices": [["x","y"], ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tc_profile_from_json(json: *const c_char, out: *mut *mut TcProfile) -> TcStatus {
    guard(|| {
        out_check(out)?;
        let p = toric_cap::io::profile_from_json(str_arg(json, "json")?)?;
        store_profile(out, p);
        Ok(())
    })
}

/// # Safety
/// `a` and `b` must be NUL-terminated rationals and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tc_profile_ellipsoid(
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut TcProfile,
) -> TcStatus {
    guard(|| {
        out_check(out)?;
        let p = ToricProfile::ellipsoid(q_arg(a, "a")?, q_arg(b, "b")?)?;
        store_profile(out, p);
        Ok(())
    })
}

/// # Safety
/// `a` and `b` must be NUL-terminated rationals and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tc_profile_polydisk(
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut TcProfile,
) -> TcStatus {
    guard(|| {
        out_check(out)?;
        let p = ToricProfile::polydisk(q_arg(a, "a")?, q_arg(b, "b")?)?;
        store_profile(out, p);
        Ok(())
    })
}

/// # Safety
/// `p` must come from a `tc_profile_*` constructor and not be used again.
#[no_mangle]
pub unsafe extern "C" fn tc_profile_free(p: *mut TcProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// `c_k` as a `"p/q"` string.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tc_capacity(
    p: *const TcProfile,
    k: i64,
    m: TcMethod,
    out: *mut *mut c_char,
) -> TcStatus {
    guard(|| {
        out_check(out)?;
        let r = toric_cap::capacity(profile_arg(p)?, k, method(m))?;
        *out = c_string(fmt_q(&r.value));
        Ok(())
    })
}

/// `c_k` as a reduced fraction; fails with `Overflow` if it does not fit.
///
/// # Safety
/// `p` must be a live handle and `num`, `den` writable.
#[no_mangle]
pub unsafe extern "C" fn tc_capacity_i64(
    p: *const TcProfile,
    k: i64,
    m: TcMethod,
    num: *mut i64,
    den: *mut i64,
) -> TcStatus {
    guard(|| {
        out_check(num)?;
        out_check(den)?;
        let r = toric_cap::capacity(profile_arg(p)?, k, method(m))?;
        match (r.value.numer().to_i64(), r.value.denom().to_i64()) {
            (Some(n), Some(d)) => {
                *num = n;
                *den = d;
                Ok(())
            }
            _ => Err(Fail(TcStatus::Overflow, format!("{} does not fit in i64", fmt_q(&r.value)))),
        }
    })
}

/// Betti number in `degree` of the window `[a, b)`; `b` may be `"inf"`.
///
/// # Safety
/// `p` must be a live handle, `a` and `b` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tc_betti(
    p: *const TcProfile,
    a: *const c_char,
    b: *const c_char,
    degree: i64,
    out: *mut usize,
) -> TcStatus {
    guard(|| {
        out_check(out)?;
        let b = match str_arg(b, "b")?.trim() {
            "inf" => Threshold::Infinite,
            s => Threshold::Finite(parse_q(s)?),
        };
        let w = Window::new(q_arg(a, "a")?, b)?;
        let t = toric_cap::betti(profile_arg(p)?, &w, degree..=degree)?;
        *out = t.get(degree);
        Ok(())
    })
}

/// Spectrum up to `a_max` as a JSON array.
///
/// # Safety
/// `p` must be a live handle, `a_max` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tc_spectrum_json(
    p: *const TcProfile,
    a_max: *const c_char,
    out: *mut *mut c_char,
) -> TcStatus {
    guard(|| {
        out_check(out)?;
        let s = toric_cap::spectrum(profile_arg(p)?, &q_arg(a_max, "a_max")?)?;
        let text = serde_json::to_string(&s).map_err(|e| Fail(TcStatus::Contract, e.to_string()))?;
        *out = c_string(text);
        Ok(())
    })
}

/// `lim c_k / k` as a `"p/q"` string.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tc_asymptotic_limit(p: *const TcProfile, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        out_check(out)?;
        *out = c_string(fmt_q(&toric_cap::asymptotic_limit(profile_arg(p)?)));
        Ok(())
    })
}
