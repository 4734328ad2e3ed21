//! C interface to the series engine.
//!
//! The surface follows the usual conventions for embedding: an opaque
//! handle created by [`poincare_compute`] and released by
//! [`poincare_free`], integer status codes, and strings allocated here
//! that the caller returns through [`poincare_string_free`]. Every entry
//! point traps panics and reports them as `POINCARE_ERR_PANIC` instead
//! of unwinding across the boundary.

use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use poincare_series::alpha::SolverConfig;
use poincare_series::cli::{compute_entry, EntryOutcome};
use poincare_series::oracle::{self, Certification};

/// The call succeeded.
pub const POINCARE_OK: i32 = 0;
/// The computation ran but a mathematical check failed.
pub const POINCARE_ERR_MATH: i32 = 1;
/// An argument was out of range or a required pointer was null.
pub const POINCARE_ERR_ARGUMENT: i32 = 2;
/// An internal invariant was violated; the handle is unusable.
pub const POINCARE_ERR_PANIC: i32 = 3;

/// Largest degree the interface accepts.
pub const POINCARE_MAX_DEGREE: u32 = 30;

/// A computed series for one degree. Opaque; create with
/// `poincare_compute`, release with `poincare_free`.
pub struct PoincareSeries {
    outcome: EntryOutcome,
}

fn trap(body: impl FnOnce() -> i32) -> i32 {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(POINCARE_ERR_PANIC)
}

unsafe fn hand_out(text: String, out: *mut *mut c_char) -> i32 {
    match CString::new(text) {
        Ok(s) => {
            *out = s.into_raw();
            POINCARE_OK
        }
        Err(_) => POINCARE_ERR_PANIC,
    }
}

/// Compute the series for binary forms of degree `n` and store a handle
/// in `*out`. The seed fixes every random choice; equal seeds give
/// byte-identical results. Returns `POINCARE_OK`, or an error code with
/// `*out` untouched.
#[no_mangle]
pub unsafe extern "C" fn poincare_compute(
    n: u32,
    seed: u64,
    out: *mut *mut PoincareSeries,
) -> i32 {
    if out.is_null() || n < 3 || n > POINCARE_MAX_DEGREE {
        return POINCARE_ERR_ARGUMENT;
    }
    trap(|| {
        let config = SolverConfig {
            seed,
            ..SolverConfig::default()
        };
        match compute_entry(n, &config, None) {
            Ok(outcome) => {
                let handle = Box::new(PoincareSeries { outcome });
                unsafe { *out = Box::into_raw(handle) };
                POINCARE_OK
            }
            Err(_) => POINCARE_ERR_MATH,
        }
    })
}

/// Release a handle. Null is accepted and ignored.
#[no_mangle]
pub unsafe extern "C" fn poincare_free(series: *mut PoincareSeries) {
    if !series.is_null() {
        drop(unsafe { Box::from_raw(series) });
    }
}

/// The degree the handle was computed for, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn poincare_degree(series: *const PoincareSeries) -> u32 {
    if series.is_null() {
        return 0;
    }
    unsafe { &*series }.outcome.entry.n
}

/// Number of stored numerator coefficients: the polynomial is
/// palindromic, so only the first half up to the middle is kept.
/// Returns 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn poincare_half_len(series: *const PoincareSeries) -> usize {
    if series.is_null() {
        return 0;
    }
    unsafe { &*series }.outcome.entry.half.len()
}

/// Write numerator coefficient `index` as a decimal string to `*out`.
/// Coefficients grow past what fits in a C integer type for larger
/// degrees, so they travel as text. Free with `poincare_string_free`.
#[no_mangle]
pub unsafe extern "C" fn poincare_half_coeff(
    series: *const PoincareSeries,
    index: usize,
    out: *mut *mut c_char,
) -> i32 {
    if series.is_null() || out.is_null() {
        return POINCARE_ERR_ARGUMENT;
    }
    trap(|| {
        let half = &unsafe { &*series }.outcome.entry.half;
        match half.get(index) {
            Some(coeff) => unsafe { hand_out(coeff.to_string(), out) },
            None => POINCARE_ERR_ARGUMENT,
        }
    })
}

/// Write the two-line text rendering (numerator coefficients, then the
/// factored denominator) to `*out`. Free with `poincare_string_free`.
#[no_mangle]
pub unsafe extern "C" fn poincare_text(
    series: *const PoincareSeries,
    out: *mut *mut c_char,
) -> i32 {
    if series.is_null() || out.is_null() {
        return POINCARE_ERR_ARGUMENT;
    }
    trap(|| {
        let entry = &unsafe { &*series }.outcome.entry;
        let text = format!("{}\n{}\n", entry.text_line(), entry.denominator_line());
        unsafe { hand_out(text, out) }
    })
}

/// Write the JSON rendering of the entry to `*out`. Integers that do
/// not fit in 53 bits appear as decimal strings. Free with
/// `poincare_string_free`.
#[no_mangle]
pub unsafe extern "C" fn poincare_json(
    series: *const PoincareSeries,
    out: *mut *mut c_char,
) -> i32 {
    if series.is_null() || out.is_null() {
        return POINCARE_ERR_ARGUMENT;
    }
    trap(|| {
        let entry = &unsafe { &*series }.outcome.entry;
        unsafe { hand_out(format!("{:#}", entry.to_json()), out) }
    })
}

/// Compare the Taylor expansion of the stored series against
/// independently counted invariant dimensions, far enough to pin the
/// rational function down. Returns `POINCARE_OK` when every coefficient
/// matches. On a mismatch returns `POINCARE_ERR_MATH` and, when
/// `first_mismatch` is non-null, stores the first offending degree
/// there; on success stores -1.
#[no_mangle]
pub unsafe extern "C" fn poincare_certify(
    series: *const PoincareSeries,
    first_mismatch: *mut i64,
) -> i32 {
    if series.is_null() {
        return POINCARE_ERR_ARGUMENT;
    }
    trap(|| {
        let verdict = oracle::certify(&unsafe { &*series }.outcome.series);
        match verdict {
            Certification::Certified { .. } => {
                if !first_mismatch.is_null() {
                    unsafe { *first_mismatch = -1 };
                }
                POINCARE_OK
            }
            Certification::Mismatch { k, .. } => {
                if !first_mismatch.is_null() {
                    unsafe { *first_mismatch = k as i64 };
                }
                POINCARE_ERR_MATH
            }
        }
    })
}

/// Free a string returned by this library. Null is accepted and ignored.
#[no_mangle]
pub unsafe extern "C" fn poincare_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn poincare_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
