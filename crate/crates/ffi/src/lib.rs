//! C ABI over `catlogic`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`*_from_json` and
//! released by the matching `*_free`. Every fallible call returns a [`CatlogicStatus`];
//! on failure [`catlogic_last_error`] describes what went wrong on the calling thread.
//! Strings returned by the library must be released with [`catlogic_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use catlogic::fincat::{FinCategory, RawCategory};
use catlogic::limits::classify;
use catlogic::modpp::{pp_implies, FiniteRing, LinearPp};
use catlogic::oracle::oracle_suite;
use catlogic::report::RunReport;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatlogicStatus {
    Ok = 0,
    /// The call ran but a check it performed came out negative.
    CheckFailed = 1,
    InvalidInput = 2,
    NullPointer = 3,
    /// A bug inside the library; the message is in `catlogic_last_error`.
    Panic = 4,
}

/// A validated finite category.
pub struct CatlogicCategory(FinCategory);

/// A finite ring.
pub struct CatlogicRing(FiniteRing);

/// Exactness verdicts for a category.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CatlogicClassification {
    pub is_lex: bool,
    pub is_regular: bool,
    pub is_exact: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn guarded(f: impl FnOnce() -> Result<CatlogicStatus, (CatlogicStatus, String)>) -> CatlogicStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p.downcast_ref::<&str>().map(|s| s.to_string()).or_else(|| p.downcast_ref::<String>().cloned());
            set_error(msg.unwrap_or_else(|| "panic".into()));
            CatlogicStatus::Panic
        }
    }
}

fn null() -> (CatlogicStatus, String) {
    (CatlogicStatus::NullPointer, "null pointer argument".into())
}

fn invalid(msg: impl ToString) -> (CatlogicStatus, String) {
    (CatlogicStatus::InvalidInput, msg.to_string())
}

/// # Safety
/// `p` is null or a NUL-terminated string valid for reads.
unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, (CatlogicStatus, String)> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid("string is not UTF-8"))
}

/// Message for the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn catlogic_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn catlogic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a category in the JSON table format.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn catlogic_category_from_json(json: *const c_char, out: *mut *mut CatlogicCategory) -> CatlogicStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null());
        }
        let raw: RawCategory = serde_json::from_str(text(json)?).map_err(invalid)?;
        let c = raw.build().map_err(invalid)?;
        *out = Box::into_raw(Box::new(CatlogicCategory(c)));
        Ok(CatlogicStatus::Ok)
    })
}

/// # Safety
/// `c` is null or a handle from `catlogic_category_from_json` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn catlogic_category_free(c: *mut CatlogicCategory) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `c` is a live category handle or null.
#[no_mangle]
pub unsafe extern "C" fn catlogic_category_num_objects(c: *const CatlogicCategory) -> usize {
    c.as_ref().map_or(0, |c| c.0.num_objects())
}

/// # Safety
/// `c` is a live category handle or null.
#[no_mangle]
pub unsafe extern "C" fn catlogic_category_num_morphisms(c: *const CatlogicCategory) -> usize {
    c.as_ref().map_or(0, |c| c.0.num_morphisms())
}

/// Decides lex, regular and exact.
///
/// # Safety
/// `c` is a live category handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn catlogic_category_classify(c: *const CatlogicCategory, out: *mut CatlogicClassification) -> CatlogicStatus {
    guarded(|| {
        let (c, out) = match (c.as_ref(), out.as_mut()) {
            (Some(c), Some(o)) => (c, o),
            _ => return Err(null()),
        };
        let k = classify(&c.0);
        *out = CatlogicClassification { is_lex: k.is_lex, is_regular: k.is_regular, is_exact: k.is_exact };
        Ok(CatlogicStatus::Ok)
    })
}

/// A ring by name: `zN` for 1 ≤ N ≤ 256, or `f2x2`.
///
/// # Safety
/// `name` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn catlogic_ring_new(name: *const c_char, out: *mut *mut CatlogicRing) -> CatlogicStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null());
        }
        let r = FiniteRing::by_name(text(name)?).map_err(invalid)?;
        *out = Box::into_raw(Box::new(CatlogicRing(r)));
        Ok(CatlogicStatus::Ok)
    })
}

/// # Safety
/// `r` is null or a handle from `catlogic_ring_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn catlogic_ring_free(r: *mut CatlogicRing) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` is a live ring handle or null.
#[no_mangle]
pub unsafe extern "C" fn catlogic_ring_size(r: *const CatlogicRing) -> usize {
    r.as_ref().map_or(0, |r| r.0.size())
}

/// Writes whether `phi` implies `psi` in every module. Formulas use the human syntax
/// (`E y: x = 2*y`) or the matrix syntax (`pp n=1 m=1 rows=[[1,-2]]`); `psi` shares the
/// free variables of `phi`.
///
/// # Safety
/// `r` is a live ring handle, the formulas are NUL-terminated and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn catlogic_pp_implies(
    r: *const CatlogicRing,
    phi: *const c_char,
    psi: *const c_char,
    out: *mut bool,
) -> CatlogicStatus {
    guarded(|| {
        let (r, out) = match (r.as_ref(), out.as_mut()) {
            (Some(r), Some(o)) => (&r.0, o),
            _ => return Err(null()),
        };
        let (a, names) = LinearPp::parse(r, text(phi)?, None).map_err(invalid)?;
        let (b, _) = LinearPp::parse(r, text(psi)?, Some(&names)).map_err(invalid)?;
        *out = pp_implies(r, &a, &b).map_err(invalid)?;
        Ok(CatlogicStatus::Ok)
    })
}

/// Runs the oracle suite and hands back its JSON report in `*out_json`. Returns
/// `CATLOGIC_STATUS_CHECK_FAILED` when some check disagreed.
///
/// # Safety
/// `out_json` is writable; release the string with `catlogic_string_free`.
#[no_mangle]
pub unsafe extern "C" fn catlogic_oracle_suite(seed: u64, budget: usize, out_json: *mut *mut c_char) -> CatlogicStatus {
    guarded(|| {
        if out_json.is_null() {
            return Err(null());
        }
        let checks = oracle_suite(seed, budget);
        let command = vec!["catlogic_oracle_suite".to_string(), seed.to_string(), budget.to_string()];
        let report = RunReport::new(command, checks, serde_json::json!({ "seed": seed, "budget": budget }));
        let s = CString::new(report.to_json()).map_err(invalid)?;
        *out_json = s.into_raw();
        Ok(if report.passed { CatlogicStatus::Ok } else { CatlogicStatus::CheckFailed })
    })
}
