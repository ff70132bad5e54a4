//! C ABI over `cyclewalk`.
//!
//! Walks and results are opaque handles. Every fallible call returns a [`CwStatus`]; on failure
//! the message is available from [`cw_last_error`] on the same thread. Results are JSON
//! documents with the same shapes the CLI emits for `--format json`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cyclewalk::error::Error;
use cyclewalk::period::decide_period;
use cyclewalk::spectral::{full_charpoly, sector_charpoly};
use cyclewalk::walk::{Family, WalkSpec};
use cyclewalk::zeta::walk_zeta;
use serde::Serialize;

/// Family code for the M-type walk (coin `(2/L)J - I`).
pub const CW_FAMILY_M: u32 = 0;
/// Family code for the F-type walk (coin `(2/L)J - P`).
pub const CW_FAMILY_F: u32 = 1;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CwStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Arguments outside the domain of the computation (bad family, even `L`, `N < 2`, ...).
    InvalidArgument = 2,
    /// An internal consistency check failed.
    Internal = 3,
    /// The library panicked; the panic was caught at the boundary.
    Panic = 4,
}

/// Opaque walk handle.
pub struct CwWalk {
    spec: WalkSpec,
}

/// Opaque JSON result handle.
pub struct CwDocument {
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(e: &Error) -> CwStatus {
    if e.is_internal() {
        CwStatus::Internal
    } else {
        CwStatus::InvalidArgument
    }
}

/// Runs `body` behind a panic guard and records any failure message.
fn guarded(body: impl FnOnce() -> Result<(), (CwStatus, String)>) -> CwStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CwStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(format!("panic: {message}"));
            CwStatus::Panic
        }
    }
}

fn domain(e: Error) -> (CwStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CwStatus, String) {
    (CwStatus::NullArgument, format!("{what} is null"))
}

/// # Safety
/// `walk` must be null or a live handle from [`cw_walk_new`].
unsafe fn walk_ref<'a>(walk: *const CwWalk) -> Result<&'a CwWalk, (CwStatus, String)> {
    walk.as_ref().ok_or_else(|| null("walk"))
}

/// # Safety
/// `out` must be null or valid for a pointer write.
unsafe fn emit<T: Serialize>(value: &T, out: *mut *mut CwDocument) -> Result<(), (CwStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let text = serde_json::to_string(value).map_err(|e| (CwStatus::Internal, e.to_string()))?;
    let json = CString::new(text).map_err(|e| (CwStatus::Internal, e.to_string()))?;
    *out = Box::into_raw(Box::new(CwDocument { json }));
    Ok(())
}

/// Creates a walk. `family` is [`CW_FAMILY_M`] or [`CW_FAMILY_F`].
///
/// # Safety
/// `out` must be valid for a pointer write. On success `*out` owns a handle to be released
/// with [`cw_walk_free`]; on failure it is set to null.
#[no_mangle]
pub unsafe extern "C" fn cw_walk_new(
    family: u32,
    states: u32,
    vertices: u32,
    out: *mut *mut CwWalk,
) -> CwStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let family = match family {
            CW_FAMILY_M => Family::M,
            CW_FAMILY_F => Family::F,
            other => {
                return Err((CwStatus::InvalidArgument, format!("unknown family code {other}")))
            }
        };
        let spec = WalkSpec::new(family, states, vertices).map_err(domain)?;
        *out = Box::into_raw(Box::new(CwWalk { spec }));
        Ok(())
    })
}

/// Releases a walk. Null is ignored.
///
/// # Safety
/// `walk` must be null or a handle from [`cw_walk_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cw_walk_free(walk: *mut CwWalk) {
    if !walk.is_null() {
        drop(Box::from_raw(walk));
    }
}

/// Dimension `L * N` of the evolution operator, or 0 for a null handle.
///
/// # Safety
/// `walk` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cw_walk_dimension(walk: *const CwWalk) -> usize {
    walk.as_ref().map_or(0, |w| w.spec.dimension())
}

/// Decides the period. Writes `T` to `*period`, or 0 when the walk is not periodic.
///
/// # Safety
/// `walk` must be a live handle and `period` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cw_period(walk: *const CwWalk, period: *mut u64) -> CwStatus {
    guarded(|| {
        let w = walk_ref(walk)?;
        if period.is_null() {
            return Err(null("period"));
        }
        let r = decide_period(&w.spec).map_err(domain)?;
        *period = r.period().unwrap_or(0);
        Ok(())
    })
}

/// Full period result (verdict, certificate) as JSON.
///
/// # Safety
/// `walk` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn cw_period_report(walk: *const CwWalk, out: *mut *mut CwDocument) -> CwStatus {
    guarded(|| {
        let w = walk_ref(walk)?;
        let r = decide_period(&w.spec).map_err(domain)?;
        emit(&r, out)
    })
}

/// Characteristic polynomial of `U` with all momentum sectors, as JSON.
///
/// # Safety
/// `walk` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn cw_charpoly(walk: *const CwWalk, out: *mut *mut CwDocument) -> CwStatus {
    guarded(|| {
        let w = walk_ref(walk)?;
        let bundle = full_charpoly(&w.spec).map_err(domain)?;
        emit(&bundle, out)
    })
}

/// Characteristic polynomial of sector `k` (`0 <= k < N`), as JSON.
///
/// # Safety
/// `walk` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn cw_sector_charpoly(
    walk: *const CwWalk,
    sector: u32,
    out: *mut *mut CwDocument,
) -> CwStatus {
    guarded(|| {
        let w = walk_ref(walk)?;
        let f = sector_charpoly(&w.spec, sector).map_err(domain)?;
        emit(&f, out)
    })
}

/// Walk zeta function `1 / det(I - uU)`, as JSON.
///
/// # Safety
/// `walk` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn cw_zeta(walk: *const CwWalk, out: *mut *mut CwDocument) -> CwStatus {
    guarded(|| {
        let w = walk_ref(walk)?;
        let z = walk_zeta(&w.spec).map_err(domain)?;
        emit(&z, out)
    })
}

/// NUL-terminated JSON text owned by `doc`, or null for a null handle.
///
/// # Safety
/// `doc` must be null or a live document. The pointer is valid until the document is freed.
#[no_mangle]
pub unsafe extern "C" fn cw_document_json(doc: *const CwDocument) -> *const c_char {
    doc.as_ref().map_or(ptr::null(), |d| d.json.as_ptr())
}

/// Releases a document. Null is ignored.
///
/// # Safety
/// `doc` must be null or a document not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cw_document_free(doc: *mut CwDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Message for the most recent failure on this thread, or null after a successful call.
///
/// The pointer is valid until the next `cw_*` call on the same thread.
#[no_mangle]
pub extern "C" fn cw_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cw_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version has no interior nul"),
    };
    VERSION.as_ptr()
}
