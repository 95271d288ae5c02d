//! C ABI over `cyclogap`.
//!
//! Every fallible function returns a [`CgStatus`]; on failure a message for
//! the calling thread is available from [`cg_last_error`]. Objects are opaque
//! handles owned by the caller and released with the matching `*_free`.
//! Panics never cross the boundary; they surface as `CG_STATUS_INTERNAL`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cyclogap::blockgap::{self, make_params, Check, GapReport, VerificationReport};
use cyclogap::cyclotomic;
use cyclogap::{Error, IntPoly};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CgStatus {
    Ok = 0,
    NullPointer = 1,
    /// Zero or otherwise out-of-domain argument.
    InvalidArgument = 2,
    CapExceeded = 3,
    Overflow = 4,
    NotSquarefree = 5,
    NotOdd = 6,
    NotPrime = 7,
    PrimeNotLarger = 8,
    /// Caller buffer too short; the required length was written back.
    BufferTooSmall = 9,
    /// Arithmetic failure that should not happen for valid inputs.
    Arithmetic = 10,
    Internal = 11,
}

impl From<&Error> for CgStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NonPositive | Error::IndexOutOfRange { .. } | Error::ZeroPolynomial => CgStatus::InvalidArgument,
            Error::CapExceeded { .. } => CgStatus::CapExceeded,
            Error::Overflow => CgStatus::Overflow,
            Error::NotSquarefree(_) => CgStatus::NotSquarefree,
            Error::NotOdd(_) => CgStatus::NotOdd,
            Error::NotPrime(_) => CgStatus::NotPrime,
            Error::PrimeNotLarger { .. } => CgStatus::PrimeNotLarger,
            _ => CgStatus::Arithmetic,
        }
    }
}

/// Which gap table of a block report to read.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CgTable {
    WithinM = 0,
    WithinR = 1,
    BetweenM = 2,
    BetweenR = 3,
    BetweenP = 4,
}

/// Integer polynomial handle.
pub struct CgPoly(IntPoly);

/// Block gap tables for one `(m, p)`.
pub struct CgGapReport(GapReport);

/// Outcome of every block check for one `(m, p)`.
pub struct CgVerification(VerificationReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: CgStatus, msg: impl Into<String>) -> CgStatus {
    set_error(msg.into());
    status
}

fn guard(f: impl FnOnce() -> Result<(), CgStatus>) -> CgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CgStatus::Ok,
        Ok(Err(s)) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            fail(CgStatus::Internal, msg)
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, CgStatus>;
}

impl<T> OrStatus<T> for cyclogap::Result<T> {
    fn or_status(self) -> Result<T, CgStatus> {
        self.map_err(|e| fail(CgStatus::from(&e), e.to_string()))
    }
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, CgStatus> {
    p.as_mut().ok_or_else(|| fail(CgStatus::NullPointer, "null output pointer"))
}

unsafe fn in_ref<'a, T>(p: *const T) -> Result<&'a T, CgStatus> {
    p.as_ref().ok_or_else(|| fail(CgStatus::NullPointer, "null handle"))
}

unsafe fn copy_out(src: &[usize], buf: *mut usize, len: usize, needed: *mut usize) -> Result<(), CgStatus> {
    *out_ref(needed)? = src.len();
    if len < src.len() {
        return Err(fail(CgStatus::BufferTooSmall, format!("need {} entries", src.len())));
    }
    if !src.is_empty() {
        if buf.is_null() {
            return Err(fail(CgStatus::NullPointer, "null buffer"));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    }
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn cg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

unsafe fn new_poly(out: *mut *mut CgPoly, poly: IntPoly) -> Result<(), CgStatus> {
    *out_ref(out)? = Box::into_raw(Box::new(CgPoly(poly)));
    Ok(())
}

/// The n-th cyclotomic polynomial.
#[no_mangle]
pub unsafe extern "C" fn cg_phi(n: u64, out: *mut *mut CgPoly) -> CgStatus {
    guard(|| new_poly(out, cyclotomic::phi_poly_oracle(n).or_status()?))
}

/// The n-th inverse cyclotomic polynomial.
#[no_mangle]
pub unsafe extern "C" fn cg_psi(n: u64, out: *mut *mut CgPoly) -> CgStatus {
    guard(|| new_poly(out, cyclotomic::psi_poly(n).or_status()?))
}

/// `Phi_mp` built from its representative blocks.
#[no_mangle]
pub unsafe extern "C" fn cg_assemble_phi_mp(m: u64, p: u64, out: *mut *mut CgPoly) -> CgStatus {
    guard(|| {
        let params = make_params(m, p).or_status()?;
        new_poly(out, blockgap::assemble_phi_mp(&params).or_status()?)
    })
}

/// Builds a polynomial from `len` ascending coefficients.
#[no_mangle]
pub unsafe extern "C" fn cg_poly_from_coeffs(coeffs: *const i64, len: usize, out: *mut *mut CgPoly) -> CgStatus {
    guard(|| {
        let slice = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(in_ref(coeffs)?, len)
        };
        new_poly(out, IntPoly::from_coeffs(slice.to_vec()))
    })
}

#[no_mangle]
pub unsafe extern "C" fn cg_poly_free(poly: *mut CgPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Number of stored coefficients (degree + 1; 0 for the zero polynomial).
#[no_mangle]
pub unsafe extern "C" fn cg_poly_len(poly: *const CgPoly) -> usize {
    poly.as_ref().map_or(0, |p| p.0.coeffs().len())
}

/// Copies the ascending coefficients into `buf`, which must hold
/// `cg_poly_len` entries.
#[no_mangle]
pub unsafe extern "C" fn cg_poly_coeffs(poly: *const CgPoly, buf: *mut i64, len: usize) -> CgStatus {
    guard(|| {
        let c = in_ref(poly)?.0.coeffs();
        if len < c.len() {
            return Err(fail(CgStatus::BufferTooSmall, format!("need {} entries", c.len())));
        }
        if !c.is_empty() {
            ptr::copy_nonoverlapping(c.as_ptr(), out_ref(buf)?, c.len());
        }
        Ok(())
    })
}

/// Maximum gap between consecutive exponents; fails on the zero polynomial.
#[no_mangle]
pub unsafe extern "C" fn cg_poly_max_gap(poly: *const CgPoly, out: *mut usize) -> CgStatus {
    guard(|| {
        *out_ref(out)? = in_ref(poly)?.0.max_gap().or_status()?;
        Ok(())
    })
}

/// Maximum gap of the n-th cyclotomic polynomial.
#[no_mangle]
pub unsafe extern "C" fn cg_gap(n: u64, out: *mut usize) -> CgStatus {
    guard(|| {
        *out_ref(out)? = cyclotomic::gap_phi(n).or_status()?;
        Ok(())
    })
}

/// Maximum gap of `Phi_mp` from the block gap tables.
#[no_mangle]
pub unsafe extern "C" fn cg_max_gap_via_blocks(m: u64, p: u64, out: *mut usize) -> CgStatus {
    guard(|| {
        let params = make_params(m, p).or_status()?;
        *out_ref(out)? = blockgap::max_gap_via_blocks(&params).or_status()?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn cg_block_gap_report(m: u64, p: u64, out: *mut *mut CgGapReport) -> CgStatus {
    guard(|| {
        let params = make_params(m, p).or_status()?;
        let report = blockgap::block_gap_report(&params).or_status()?;
        *out_ref(out)? = Box::into_raw(Box::new(CgGapReport(report)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn cg_gap_report_free(report: *mut CgGapReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

#[no_mangle]
pub unsafe extern "C" fn cg_gap_report_gap(report: *const CgGapReport, out: *mut usize) -> CgStatus {
    guard(|| {
        *out_ref(out)? = in_ref(report)?.0.gap;
        Ok(())
    })
}

/// Copies one gap table (one entry per p-block). `needed` always receives
/// the table length; pass `len = 0` to query it.
#[no_mangle]
pub unsafe extern "C" fn cg_gap_report_table(
    report: *const CgGapReport,
    table: CgTable,
    buf: *mut usize,
    len: usize,
    needed: *mut usize,
) -> CgStatus {
    guard(|| {
        let r = &in_ref(report)?.0;
        let src = match table {
            CgTable::WithinM => &r.within_m,
            CgTable::WithinR => &r.within_r,
            CgTable::BetweenM => &r.between_m,
            CgTable::BetweenR => &r.between_r,
            CgTable::BetweenP => &r.between_p,
        };
        copy_out(src, buf, len, needed)
    })
}

/// Runs every block check for `(m, p)`. A failing check is not an error:
/// the call succeeds and the handle records the failure.
#[no_mangle]
pub unsafe extern "C" fn cg_verify_instance(m: u64, p: u64, out: *mut *mut CgVerification) -> CgStatus {
    guard(|| {
        let params = make_params(m, p).or_status()?;
        let report = blockgap::verify_instance(&params).or_status()?;
        *out_ref(out)? = Box::into_raw(Box::new(CgVerification(report)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn cg_verification_free(v: *mut CgVerification) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// 1 if every check passed, 0 otherwise (also 0 for NULL).
#[no_mangle]
pub unsafe extern "C" fn cg_verification_all_passed(v: *const CgVerification) -> i32 {
    v.as_ref().map_or(0, |v| i32::from(v.0.all_passed()))
}

/// Number of checks; indices `0..count` are valid for the accessors below.
#[no_mangle]
pub extern "C" fn cg_check_count() -> usize {
    Check::ALL.len()
}

/// Static NUL-terminated name of check `index`, or NULL if out of range.
#[no_mangle]
pub extern "C" fn cg_check_name(index: usize) -> *const c_char {
    static NAMES: std::sync::OnceLock<Vec<CString>> = std::sync::OnceLock::new();
    let names = NAMES.get_or_init(|| Check::ALL.iter().map(|c| CString::new(c.name()).unwrap()).collect());
    names.get(index).map_or(ptr::null(), |c| c.as_ptr())
}

/// Writes 1 to `passed` if check `index` passed, else 0.
#[no_mangle]
pub unsafe extern "C" fn cg_verification_check(v: *const CgVerification, index: usize, passed: *mut i32) -> CgStatus {
    guard(|| {
        let v = &in_ref(v)?.0;
        let check = *Check::ALL
            .get(index)
            .ok_or_else(|| fail(CgStatus::InvalidArgument, format!("check index {index} out of range")))?;
        *out_ref(passed)? = i32::from(v.outcome(check).passed);
        Ok(())
    })
}

/// The full report as JSON; free with [`cg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cg_verification_to_json(v: *const CgVerification, out: *mut *mut c_char) -> CgStatus {
    guard(|| {
        let json = serde_json::to_string(&in_ref(v)?.0).map_err(|e| fail(CgStatus::Internal, e.to_string()))?;
        *out_ref(out)? = CString::new(json).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn cg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Renders a polynomial in ascending order; free with [`cg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cg_poly_to_string(poly: *const CgPoly, out: *mut *mut c_char) -> CgStatus {
    guard(|| {
        let s = in_ref(poly)?.0.to_string();
        *out_ref(out)? = CString::new(s).expect("no NUL").into_raw();
        Ok(())
    })
}
