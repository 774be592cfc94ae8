//! C ABI over `normlines`.
//!
//! Matrices live behind opaque handles built from decimal strings (`p` or
//! `p/q`). Every function returns an [`NlStatus`]; on failure the message is
//! available from [`nl_last_error`] on the same thread. Strings handed out by
//! the library must be released with [`nl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use normlines::analyzer2d::existence_condition;
use normlines::analyzer3d::{existence3, Axis};
use normlines::cli::{analyze2_report, analyze3_report, cmd_torus};
use normlines::linalg::parse_rational;
use normlines::{Error, RatMatrix2, RatMatrix3};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Degenerate = 5,
    Internal = 6,
    Panic = 7,
}

/// A 2x2 rational matrix.
pub struct NlMatrix2 {
    inner: RatMatrix2,
}

/// A 3x3 rational matrix.
pub struct NlMatrix3 {
    inner: RatMatrix3,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(NlStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) | Error::NotInteger(_) => NlStatus::Parse,
            Error::AllPivotsDegenerate | Error::ZeroPivot(_) | Error::Degenerate(_) => {
                NlStatus::Degenerate
            }
            Error::Io(_) => NlStatus::Internal,
            _ => NlStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(NlStatus::NullPointer, format!("{what} is null"))
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> NlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NlStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            NlStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null("entry"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(NlStatus::InvalidUtf8, "entry is not valid UTF-8".into()))
}

unsafe fn read_entries(
    entries: *const *const c_char,
    len: usize,
) -> Result<Vec<normlines::Rational>, Failure> {
    if entries.is_null() {
        return Err(null("entries"));
    }
    std::slice::from_raw_parts(entries, len)
        .iter()
        .map(|&p| Ok(parse_rational(read_str(p)?)?))
        .collect()
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(NlStatus::Internal, "interior NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Builds a 2x2 matrix from 4 row-major entry strings.
///
/// # Safety
/// `entries` must point to 4 valid NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_matrix2_new(
    entries: *const *const c_char,
    out: *mut *mut NlMatrix2,
) -> NlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inner = RatMatrix2::from_slice(&read_entries(entries, 4)?)?;
        *out = Box::into_raw(Box::new(NlMatrix2 { inner }));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from [`nl_matrix2_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nl_matrix2_free(m: *mut NlMatrix2) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Builds a 3x3 matrix from 9 row-major entry strings.
///
/// # Safety
/// `entries` must point to 9 valid NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_matrix3_new(
    entries: *const *const c_char,
    out: *mut *mut NlMatrix3,
) -> NlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inner = RatMatrix3::from_slice(&read_entries(entries, 9)?)?;
        *out = Box::into_raw(Box::new(NlMatrix3 { inner }));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from [`nl_matrix3_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nl_matrix3_free(m: *mut NlMatrix3) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Whether some line through the origin keeps its length under `m`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_matrix2_has_lines(m: *const NlMatrix2, out: *mut bool) -> NlStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = existence_condition(&m.inner);
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_matrix3_has_lines(m: *const NlMatrix3, out: *mut bool) -> NlStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = existence3(&m.inner);
        Ok(())
    })
}

/// Full 2x2 analysis as canonical JSON. Free the result with [`nl_string_free`].
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_analyze2_json(m: *const NlMatrix2, out: *mut *mut c_char) -> NlStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, analyze2_report(&m.inner).to_json())
    })
}

/// Full 3x3 analysis as canonical JSON. `pivot` is `'x'`, `'y'`, `'z'` or 0
/// for the default choice.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_analyze3_json(
    m: *const NlMatrix3,
    bound: u32,
    pivot: c_char,
    out: *mut *mut c_char,
) -> NlStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let axis = match pivot as u8 {
            0 => None,
            c => Some(Axis::parse(&(c as char).to_string())?),
        };
        write_string(out, analyze3_report(&m.inner, bound, axis)?.to_json())
    })
}

/// Powers and eigen-iterates of `[[q+1, q], [q, q-1]]` as canonical JSON.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nl_torus_json(q: i64, n: u64, out: *mut *mut c_char) -> NlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, cmd_torus(&q.to_string(), n)?.to_json())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn nl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
