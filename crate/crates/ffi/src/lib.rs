//! C ABI for the counting engine: opaque result handles, integer status
//! codes (matching the CLI's exit codes), and strings allocated by Rust that
//! the caller releases with `mc_string_free`.
//!
//! The header `include/matcensus.h` is generated by cbindgen at build time.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use matcensus::census::{self, CensusResult, DEFAULT_BUDGET};
use matcensus::error::Error;
use matcensus::ffcount::{self, PrimeField};
use matcensus::intmat::IntMatrix;
use matcensus::intpoly::IntPoly;
use matcensus::{asympt, quadstat, witness, BigInt};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McStatus {
    Ok = 0,
    /// Internal failure (non-convergence, panic).
    Internal = 1,
    /// A parameter failed validation.
    InvalidArgument = 2,
    /// The exact-mode iteration budget was exceeded.
    BudgetExceeded = 3,
}

/// Opaque census result handle; release with `mc_census_result_free`.
pub struct McCensusResult {
    inner: CensusResult,
}

fn status_of(e: &Error) -> McStatus {
    match e {
        Error::BudgetExceeded { .. } => McStatus::BudgetExceeded,
        Error::InvalidInput(_)
        | Error::DimensionMismatch(_)
        | Error::ZeroPolynomial
        | Error::ConstantPolynomial => McStatus::InvalidArgument,
        _ => McStatus::Internal,
    }
}

/// Runs a closure, translating panics into `Internal` instead of unwinding
/// across the C boundary.
fn guarded<F: FnOnce() -> McStatus>(f: F) -> McStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(McStatus::Internal)
}

unsafe fn cstr_arg<'a>(s: *const c_char) -> Option<&'a str> {
    if s.is_null() {
        return None;
    }
    CStr::from_ptr(s).to_str().ok()
}

fn string_out(s: String, out: *mut *mut c_char) -> McStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            McStatus::Ok
        }
        Err(_) => McStatus::Internal,
    }
}

/// Version of the underlying engine, as a static string (do not free).
#[no_mangle]
pub extern "C" fn mc_version() -> *const c_char {
    concat!("matcensus ", env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Frees a string returned by any `mc_*` call.
///
/// # Safety
/// `s` must be a pointer previously returned by this library and not yet
/// freed; passing anything else is undefined behavior.
#[no_mangle]
pub unsafe extern "C" fn mc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Frees a census result handle.
///
/// # Safety
/// `res` must come from an `mc_count_*` call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mc_census_result_free(res: *mut McCensusResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

fn census_out(
    result: Result<CensusResult, Error>,
    out: *mut *mut McCensusResult,
) -> McStatus {
    match result {
        Ok(inner) => {
            let boxed = Box::new(McCensusResult { inner });
            unsafe { *out = Box::into_raw(boxed) };
            McStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Counts n x n box matrices with discriminant `d` (decimal string), or the
/// full histogram when `d` is NULL. `budget` of 0 means the default 10^10.
///
/// # Safety
/// `d` must be NULL or a valid NUL-terminated string; `out` must be a valid
/// pointer to a result slot.
#[no_mangle]
pub unsafe extern "C" fn mc_count_discr(
    n: u32,
    h: i64,
    d: *const c_char,
    budget: u64,
    workers: u32,
    out: *mut *mut McCensusResult,
) -> McStatus {
    if out.is_null() {
        return McStatus::InvalidArgument;
    }
    let d_parsed: Option<BigInt> = match cstr_arg(d) {
        None => None,
        Some(s) => match s.trim().parse() {
            Ok(v) => Some(v),
            Err(_) => return McStatus::InvalidArgument,
        },
    };
    if d.is_null() != d_parsed.is_none() {
        return McStatus::InvalidArgument;
    }
    let budget = if budget == 0 { DEFAULT_BUDGET } else { budget as u128 };
    guarded(|| {
        census_out(
            census::count_discr(n as usize, h, d_parsed.clone(), budget, workers.max(1) as usize),
            out,
        )
    })
}

/// Counts n x n box matrices that are not diagonalisable over C.
///
/// # Safety
/// `out` must be a valid pointer to a result slot.
#[no_mangle]
pub unsafe extern "C" fn mc_count_nondiag(
    n: u32,
    h: i64,
    budget: u64,
    workers: u32,
    out: *mut *mut McCensusResult,
) -> McStatus {
    if out.is_null() {
        return McStatus::InvalidArgument;
    }
    let budget = if budget == 0 { DEFAULT_BUDGET } else { budget as u128 };
    guarded(|| {
        census_out(
            census::count_nondiag(n as usize, h, budget, workers.max(1) as usize),
            out,
        )
    })
}

/// Single event count of a census result; fails on histogram results.
///
/// # Safety
/// `res` must be a live handle; `out` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn mc_census_result_count(
    res: *const McCensusResult,
    out: *mut u64,
) -> McStatus {
    if res.is_null() || out.is_null() {
        return McStatus::InvalidArgument;
    }
    match (*res).inner.count() {
        Some(c) => {
            *out = c;
            McStatus::Ok
        }
        None => McStatus::InvalidArgument,
    }
}

/// Full JSON rendering of a census result (counters, visit count, timing).
/// The returned string is owned by the caller; free with `mc_string_free`.
///
/// # Safety
/// `res` must be a live handle; `out` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn mc_census_result_json(
    res: *const McCensusResult,
    out: *mut *mut c_char,
) -> McStatus {
    if res.is_null() || out.is_null() {
        return McStatus::InvalidArgument;
    }
    let json = (*res).inner.to_json().to_string();
    string_out(json, out)
}

/// Exact R_2(d, H) by the closed-form counter, as a decimal string.
///
/// # Safety
/// `out` must be a valid slot; free the string with `mc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn mc_r2_count(d: i64, h: i64, out: *mut *mut c_char) -> McStatus {
    if out.is_null() {
        return McStatus::InvalidArgument;
    }
    guarded(|| match quadstat::r2_count(d, h) {
        Ok(c) => string_out(c.to_string(), out),
        Err(e) => status_of(&e),
    })
}

/// Exact P_2(H; f) for a monic quadratic given as comma-separated
/// coefficients, constant term first (for example "1,-2,1").
///
/// # Safety
/// `f` must be a valid NUL-terminated string; `out` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn mc_p2_count(
    f: *const c_char,
    h: i64,
    out: *mut *mut c_char,
) -> McStatus {
    let Some(f) = cstr_arg(f) else {
        return McStatus::InvalidArgument;
    };
    if out.is_null() {
        return McStatus::InvalidArgument;
    }
    guarded(|| {
        let poly = match IntPoly::parse(f) {
            Ok(p) => p,
            Err(e) => return status_of(&e),
        };
        match quadstat::p2_count(&poly, h) {
            Ok(c) => string_out(c.to_string(), out),
            Err(e) => status_of(&e),
        }
    })
}

/// Exact witness-family cardinality at (n, H), as a decimal string.
///
/// # Safety
/// `out` must be a valid slot; free the string with `mc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn mc_witness_count(n: u32, h: i64, out: *mut *mut c_char) -> McStatus {
    if out.is_null() {
        return McStatus::InvalidArgument;
    }
    guarded(|| match witness::witness_count(n as usize, h) {
        Ok(c) => string_out(c.to_string(), out),
        Err(e) => status_of(&e),
    })
}

/// The exponent gain Delta_n.
///
/// # Safety
/// `out` must be a valid slot.
#[no_mangle]
pub unsafe extern "C" fn mc_delta_n(n: u64, out: *mut i64) -> McStatus {
    if out.is_null() {
        return McStatus::InvalidArgument;
    }
    match asympt::delta_n(n) {
        Ok(d) => {
            *out = d;
            McStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Discriminant of an integer matrix given in the compact text form
/// "n:e11,e12,...,enn", as a decimal string.
///
/// # Safety
/// `matrix` must be a valid NUL-terminated string; `out` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn mc_discr_matrix(
    matrix: *const c_char,
    out: *mut *mut c_char,
) -> McStatus {
    let Some(text) = cstr_arg(matrix) else {
        return McStatus::InvalidArgument;
    };
    if out.is_null() {
        return McStatus::InvalidArgument;
    }
    guarded(|| match IntMatrix::parse_compact(text) {
        Ok(m) => string_out(m.discr_matrix().to_string(), out),
        Err(e) => status_of(&e),
    })
}

/// Brute-force Carlitz count of monic non-squarefree degree-n polynomials
/// over F_p.
///
/// # Safety
/// `out` must be a valid slot.
#[no_mangle]
pub unsafe extern "C" fn mc_carlitz_count(p: u32, n: u32, out: *mut u64) -> McStatus {
    if out.is_null() {
        return McStatus::InvalidArgument;
    }
    guarded(|| {
        let field = match PrimeField::new(p) {
            Ok(f) => f,
            Err(e) => return status_of(&e),
        };
        match ffcount::carlitz_count(field, n as usize) {
            Ok(c) => {
                *out = c;
                McStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}
