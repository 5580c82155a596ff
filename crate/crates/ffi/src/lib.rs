//! C ABI over `jacobi-lobatto`.
//!
//! Rules are returned as opaque `JlRule` handles that must be released with
//! [`jl_rule_free`]. Every fallible function returns a [`JlStatus`] and writes
//! its result through an out-pointer; out-pointers are left untouched on error.

use std::ffi::{c_char, c_void};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use jacobi_lobatto::{gauss_rule, lobatto_rule, Error, JacobiExponents, QuadratureRule};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JlStatus {
    Ok = 0,
    /// Exponents not above -1, zero size, or another rejected argument.
    InvalidArgument = 1,
    NullPointer = 2,
    /// The eigenvalue iteration did not converge.
    NoConvergence = 3,
    /// The integrand returned NaN or an infinity.
    NonFinite = 4,
    /// Caller's buffer is shorter than `jl_rule_len`.
    BufferTooSmall = 5,
    /// A Rust panic was caught at the boundary.
    Internal = 6,
}

/// Opaque quadrature rule.
pub struct JlRule {
    rule: QuadratureRule,
}

/// Integrand callback: `f(t, user_data)`.
pub type JlIntegrand = Option<unsafe extern "C" fn(t: f64, user_data: *mut c_void) -> f64>;

fn status_of(e: &Error) -> JlStatus {
    match e {
        Error::NoConvergence { .. } => JlStatus::NoConvergence,
        Error::NonFiniteIntegrand { .. } => JlStatus::NonFinite,
        _ => JlStatus::InvalidArgument,
    }
}

fn guard<F: FnOnce() -> JlStatus>(f: F) -> JlStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(JlStatus::Internal)
}

fn make_rule(alpha: f64, beta: f64, n: usize, lobatto: bool, out: *mut *mut JlRule) -> JlStatus {
    if out.is_null() {
        return JlStatus::NullPointer;
    }
    guard(|| {
        let built = JacobiExponents::new(alpha, beta).and_then(|e| {
            if lobatto {
                lobatto_rule(e, n).map(|r| r.into_rule())
            } else {
                gauss_rule(e, n)
            }
        });
        match built {
            Ok(rule) => {
                // SAFETY: `out` checked non-null above.
                unsafe { *out = Box::into_raw(Box::new(JlRule { rule })) };
                JlStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Builds the `m`-point Gauss-Jacobi rule.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn jl_rule_gauss(
    alpha: f64,
    beta: f64,
    m: usize,
    out: *mut *mut JlRule,
) -> JlStatus {
    make_rule(alpha, beta, m, false, out)
}

/// Builds the Gauss-Jacobi-Lobatto rule with `n` interior nodes (`n + 2` in total).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn jl_rule_lobatto(
    alpha: f64,
    beta: f64,
    n: usize,
    out: *mut *mut JlRule,
) -> JlStatus {
    make_rule(alpha, beta, n, true, out)
}

/// Releases a rule. Null is ignored.
///
/// # Safety
/// `rule` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn jl_rule_free(rule: *mut JlRule) {
    if !rule.is_null() {
        drop(Box::from_raw(rule));
    }
}

/// Number of nodes, or 0 for a null handle.
///
/// # Safety
/// `rule` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn jl_rule_len(rule: *const JlRule) -> usize {
    rule.as_ref().map_or(0, |r| r.rule.len())
}

/// Polynomial degree integrated exactly, or 0 for a null handle.
///
/// # Safety
/// `rule` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn jl_rule_exactness_degree(rule: *const JlRule) -> usize {
    rule.as_ref().map_or(0, |r| r.rule.exactness_degree())
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, cap: usize) -> JlStatus {
    if buf.is_null() {
        return JlStatus::NullPointer;
    }
    if cap < src.len() {
        return JlStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    JlStatus::Ok
}

/// Copies the ascending nodes into `buf[0..len]`.
///
/// # Safety
/// `rule` must be a live handle and `buf` valid for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn jl_rule_nodes(rule: *const JlRule, buf: *mut f64, cap: usize) -> JlStatus {
    match rule.as_ref() {
        Some(r) => copy_out(r.rule.nodes(), buf, cap),
        None => JlStatus::NullPointer,
    }
}

/// Copies the weights into `buf[0..len]`.
///
/// # Safety
/// `rule` must be a live handle and `buf` valid for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn jl_rule_weights(
    rule: *const JlRule,
    buf: *mut f64,
    cap: usize,
) -> JlStatus {
    match rule.as_ref() {
        Some(r) => copy_out(r.rule.weights(), buf, cap),
        None => JlStatus::NullPointer,
    }
}

/// Applies the rule to `f`, writing the sum to `out`.
///
/// # Safety
/// `rule` must be a live handle, `out` writable, and `f` safe to call with `user_data`.
#[no_mangle]
pub unsafe extern "C" fn jl_rule_integrate(
    rule: *const JlRule,
    f: JlIntegrand,
    user_data: *mut c_void,
    out: *mut f64,
) -> JlStatus {
    let (Some(r), Some(f)) = (rule.as_ref(), f) else {
        return JlStatus::NullPointer;
    };
    if out.is_null() {
        return JlStatus::NullPointer;
    }
    guard(|| match r.rule.integrate(|t| f(t, user_data)) {
        Ok(v) => {
            *out = v;
            JlStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Zeroth moment of the weight `(1-t)^alpha (1+t)^beta`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jl_zeroth_moment(alpha: f64, beta: f64, out: *mut f64) -> JlStatus {
    if out.is_null() {
        return JlStatus::NullPointer;
    }
    match JacobiExponents::new(alpha, beta) {
        Ok(e) => {
            *out = e.zeroth_moment();
            JlStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn jl_status_message(status: JlStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        JlStatus::Ok => b"ok\0",
        JlStatus::InvalidArgument => b"invalid argument\0",
        JlStatus::NullPointer => b"null pointer\0",
        JlStatus::NoConvergence => b"eigenvalue iteration did not converge\0",
        JlStatus::NonFinite => b"integrand returned a non-finite value\0",
        JlStatus::BufferTooSmall => b"buffer too small\0",
        JlStatus::Internal => b"internal error\0",
    };
    s.as_ptr().cast()
}
