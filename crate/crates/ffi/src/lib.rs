//! C ABI for the centerline resolver.
//!
//! Every fallible function returns a [`CenterlineStatus`]; on failure a
//! description is available from [`centerline_last_error`] on the same
//! thread. Handles are opaque and must be released with their `_free`
//! function. Strings returned to the caller are released with
//! [`centerline_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use centerline::corpus_io::write_report_tsv;
use centerline::evaluation::score;
use centerline::model::Document;
use centerline::{parse_document, resolve_document, ResolutionConfig, ResolutionReport, Strategy};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterlineStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    ResolveError = 5,
    Panic = 6,
}

/// Values accepted for the `strategy` argument of [`centerline_resolve`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterlineStrategy {
    Functional = 0,
    Linear = 1,
    InterFirst = 2,
    IntraFirst = 3,
}

/// Enforce semantic type agreement.
pub const CENTERLINE_SEMANTICS: u32 = 1;
/// Turn off clause-mate exclusion for pronouns.
pub const CENTERLINE_NO_BINDING: u32 = 2;
/// Carry gold entities forward after each resolution.
pub const CENTERLINE_CHAIN_CORRECT: u32 = 4;

const KNOWN_FLAGS: u32 = CENTERLINE_SEMANTICS | CENTERLINE_NO_BINDING | CENTERLINE_CHAIN_CORRECT;

/// Parsed, validated document.
pub struct CenterlineDocument {
    doc: Document,
}

/// Result of one resolution pass.
pub struct CenterlineReport {
    report: ResolutionReport,
    correct: usize,
    total: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn fail(status: CenterlineStatus, msg: impl Into<String>) -> CenterlineStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> CenterlineStatus) -> CenterlineStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => {
            if status == CenterlineStatus::Ok {
                set_error("");
            }
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(CenterlineStatus::Panic, format!("panic: {msg}"))
        }
    }
}

fn strategy_from(raw: u32) -> Option<Strategy> {
    Some(match raw {
        0 => Strategy::Functional,
        1 => Strategy::Linear,
        2 => Strategy::InterFirst,
        3 => Strategy::IntraFirst,
        _ => return None,
    })
}

/// Parses a document from NUL-terminated UTF-8 text. On success `*out`
/// receives a new handle.
#[no_mangle]
pub unsafe extern "C" fn centerline_document_parse(
    text: *const c_char,
    out: *mut *mut CenterlineDocument,
) -> CenterlineStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(CenterlineStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            return fail(CenterlineStatus::InvalidUtf8, "input is not valid UTF-8");
        };
        match parse_document(text).into_result() {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(CenterlineDocument { doc }));
                CenterlineStatus::Ok
            }
            Err(diags) => {
                let msg: Vec<String> = diags.iter().map(ToString::to_string).collect();
                fail(CenterlineStatus::ParseError, msg.join("\n"))
            }
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn centerline_document_free(doc: *mut CenterlineDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Number of anaphoric markables in the document.
#[no_mangle]
pub unsafe extern "C" fn centerline_document_anaphor_count(
    doc: *const CenterlineDocument,
    out: *mut usize,
) -> CenterlineStatus {
    guard(|| {
        if doc.is_null() || out.is_null() {
            return fail(CenterlineStatus::NullPointer, "null argument");
        }
        *out = (*doc).doc.anaphors().count();
        CenterlineStatus::Ok
    })
}

/// Resolves every anaphor of `doc`. `strategy` is a [`CenterlineStrategy`]
/// value and `flags` a combination of the `CENTERLINE_*` flag constants.
#[no_mangle]
pub unsafe extern "C" fn centerline_resolve(
    doc: *const CenterlineDocument,
    strategy: u32,
    flags: u32,
    out: *mut *mut CenterlineReport,
) -> CenterlineStatus {
    guard(|| {
        if doc.is_null() || out.is_null() {
            return fail(CenterlineStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let Some(strategy) = strategy_from(strategy) else {
            return fail(
                CenterlineStatus::InvalidArgument,
                format!("unknown strategy {strategy}"),
            );
        };
        if flags & !KNOWN_FLAGS != 0 {
            return fail(
                CenterlineStatus::InvalidArgument,
                format!("unknown flags {flags:#x}"),
            );
        }
        let cfg = ResolutionConfig::new(strategy)
            .with_semantics(flags & CENTERLINE_SEMANTICS != 0)
            .with_binding(flags & CENTERLINE_NO_BINDING == 0)
            .with_chain_correction(flags & CENTERLINE_CHAIN_CORRECT != 0);
        let doc = &(*doc).doc;
        let report = match resolve_document(doc, &cfg) {
            Ok(r) => r,
            Err(e) => return fail(CenterlineStatus::ResolveError, e.to_string()),
        };
        let row = match score(&report, doc) {
            Ok(r) => r,
            Err(e) => return fail(CenterlineStatus::ResolveError, e.to_string()),
        };
        let correct = row.cell(strategy).map_or(0, |c| c.correct);
        *out = Box::into_raw(Box::new(CenterlineReport {
            report,
            correct,
            total: row.n,
        }));
        CenterlineStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn centerline_report_free(report: *mut CenterlineReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Correctly resolved anaphors and all anaphors of the report.
#[no_mangle]
pub unsafe extern "C" fn centerline_report_score(
    report: *const CenterlineReport,
    correct: *mut usize,
    total: *mut usize,
) -> CenterlineStatus {
    guard(|| {
        if report.is_null() || correct.is_null() || total.is_null() {
            return fail(CenterlineStatus::NullPointer, "null argument");
        }
        *correct = (*report).correct;
        *total = (*report).total;
        CenterlineStatus::Ok
    })
}

/// One tab-separated line per anaphor. Release with
/// [`centerline_string_free`].
#[no_mangle]
pub unsafe extern "C" fn centerline_report_tsv(
    report: *const CenterlineReport,
    out: *mut *mut c_char,
) -> CenterlineStatus {
    guard(|| {
        if report.is_null() || out.is_null() {
            return fail(CenterlineStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        match CString::new(write_report_tsv(&(*report).report)) {
            Ok(s) => {
                *out = s.into_raw();
                CenterlineStatus::Ok
            }
            Err(_) => fail(
                CenterlineStatus::InvalidArgument,
                "report contains a NUL byte",
            ),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn centerline_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the most recent failure on this thread, or an empty string.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn centerline_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn centerline_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
