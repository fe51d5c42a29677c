//! C interface to the `qtkring` library.
//!
//! Inputs are UTF-8 JSON strings in the same schemas the CLI reads. Strings
//! returned through `char **` out-parameters are owned by the caller and
//! must be released with `qtk_string_free`. Handles are released with their
//! `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qtkring::cli::{
    bott_samelson_report, compare_report, kring_report, parse_json, validate_report, CommandError, KRingOptions,
};
use qtkring::format::{parse_rational_list, BottFile, CartanFile, KRingReport, LambdaFile, PolytopeFile};
use qtkring::polyring::DEFAULT_BUDGET;
use qtkring::polytope::{PolytopeError, SimplePolytope};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QtkStatus {
    Ok = 0,
    /// A computation ran but one of its checks failed.
    CheckFailed = 1,
    /// Malformed or inconsistent input.
    InputError = 2,
    NullPointer = 3,
    /// An internal panic was caught at the boundary.
    Panic = 4,
}

/// Result of a K-ring computation.
pub struct QtkKRing {
    report: KRingReport,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(e: CommandError) -> QtkStatus {
    set_error(e.message());
    match e {
        CommandError::Input(_) => QtkStatus::InputError,
        CommandError::Failed(_) => QtkStatus::CheckFailed,
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, CommandError> {
    if p.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(p).to_str().map(Some).map_err(|_| CommandError::Input(format!("{what} is not valid UTF-8")))
}

unsafe fn required<'a>(p: *const c_char, what: &str) -> Result<&'a str, QtkStatus> {
    match read_str(p, what) {
        Ok(Some(s)) => Ok(s),
        Ok(None) => {
            set_error(&format!("{what} is null"));
            Err(QtkStatus::NullPointer)
        }
        Err(e) => Err(fail(e)),
    }
}

fn guard(f: impl FnOnce() -> QtkStatus) -> QtkStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            QtkStatus::Panic
        }
    }
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no interior nul").into_raw()
}

fn budget_or_default(budget: u64) -> usize {
    if budget == 0 {
        DEFAULT_BUDGET
    } else {
        usize::try_from(budget).unwrap_or(usize::MAX)
    }
}

fn parse_polytope(text: &str) -> Result<SimplePolytope, CommandError> {
    Ok(parse_json::<PolytopeFile>(text, "polytope")?.to_polytope()?)
}

/// Computes the K-ring report. `r` and `functional` are optional
/// comma-separated rationals (pass NULL for the defaults); `budget` 0 uses
/// the default. On success `*out` receives a handle. A report whose checks
/// fail is still returned, with status `QTK_STATUS_CHECK_FAILED`.
///
/// # Safety
/// String arguments must be NUL-terminated or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qtk_kring_compute(
    polytope_json: *const c_char,
    lambda_json: *const c_char,
    r: *const c_char,
    functional: *const c_char,
    budget: u64,
    out: *mut *mut QtkKRing,
) -> QtkStatus {
    guard(|| {
        if out.is_null() {
            set_error("out is null");
            return QtkStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let (pj, lj) = match (required(polytope_json, "polytope_json"), required(lambda_json, "lambda_json")) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let result = (|| {
            let p = parse_polytope(pj)?;
            let l = parse_json::<LambdaFile>(lj, "lambda")?.to_charmap();
            let list = |s: Option<&str>, what: &str| {
                s.map(|s| parse_rational_list(s).map_err(|e| CommandError::Input(format!("{what}: {e}")))).transpose()
            };
            let opts = KRingOptions {
                r: list(read_str(r, "r")?, "r")?,
                functional: list(read_str(functional, "functional")?, "functional")?,
                order: None,
                budget: Some(budget_or_default(budget)),
            };
            kring_report(&p, &l, &opts)
        })();
        match result {
            Ok(report) => {
                let code = report.exit_code();
                let json = CString::new(serde_json::to_string(&report).expect("reports serialize")).expect("no nul");
                *out = Box::into_raw(Box::new(QtkKRing { report, json }));
                if code == 0 {
                    QtkStatus::Ok
                } else {
                    set_error("a report check failed");
                    QtkStatus::CheckFailed
                }
            }
            Err(e) => fail(e),
        }
    })
}

/// Rank of the quotient, or 0 for a NULL handle.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qtk_kring_rank(h: *const QtkKRing) -> usize {
    h.as_ref().map_or(0, |h| h.report.rank)
}

/// Number of vertices of the polytope, or 0 for a NULL handle.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qtk_kring_vertex_count(h: *const QtkKRing) -> usize {
    h.as_ref().map_or(0, |h| h.report.vertex_count)
}

/// The report as compact JSON. Borrowed: valid until the handle is freed.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qtk_kring_report_json(h: *const QtkKRing) -> *const c_char {
    h.as_ref().map_or(ptr::null(), |h| h.json.as_ptr())
}

/// # Safety
/// `h` must be NULL or a handle from `qtk_kring_compute`, freed once.
#[no_mangle]
pub unsafe extern "C" fn qtk_kring_free(h: *mut QtkKRing) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Validates a polytope and characteristic map; `*report_json` receives the
/// report when `report_json` is not NULL.
///
/// # Safety
/// String arguments must be NUL-terminated; `report_json` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn qtk_validate(
    polytope_json: *const c_char,
    lambda_json: *const c_char,
    report_json: *mut *mut c_char,
) -> QtkStatus {
    guard(|| {
        if !report_json.is_null() {
            *report_json = ptr::null_mut();
        }
        let (pj, lj) = match (required(polytope_json, "polytope_json"), required(lambda_json, "lambda_json")) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let result = (|| {
            let pf = parse_json::<PolytopeFile>(pj, "polytope")?;
            let p = match pf.to_polytope() {
                Ok(full) => full,
                Err(PolytopeError::Invalid(_)) => SimplePolytope::unchecked(pf.dim, pf.facets, pf.vertices, None),
                Err(e) => return Err(e.into()),
            };
            let l = parse_json::<LambdaFile>(lj, "lambda")?.to_charmap();
            validate_report(&p, &l)
        })();
        match result {
            Ok(rep) => {
                let passed = rep.passed;
                if !report_json.is_null() {
                    *report_json = to_c(serde_json::to_string(&rep).expect("reports serialize"));
                }
                if passed {
                    QtkStatus::Ok
                } else {
                    set_error("validation failed");
                    QtkStatus::CheckFailed
                }
            }
            Err(e) => fail(e),
        }
    })
}

/// Cross-checks a Bott tower's Laurent presentation against the cube
/// pipeline. `*isomorphic` and `*report_json` are written when non-NULL.
///
/// # Safety
/// `bott_json` must be NUL-terminated; out-pointers NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn qtk_bott_compare(
    bott_json: *const c_char,
    budget: u64,
    isomorphic: *mut bool,
    report_json: *mut *mut c_char,
) -> QtkStatus {
    guard(|| {
        if !report_json.is_null() {
            *report_json = ptr::null_mut();
        }
        let text = match required(bott_json, "bott_json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let result = (|| {
            let c = parse_json::<BottFile>(text, "bott matrix")?.to_matrix()?;
            compare_report(&c, budget_or_default(budget))
        })();
        match result {
            Ok(rep) => {
                if !isomorphic.is_null() {
                    *isomorphic = rep.isomorphic;
                }
                let ok = rep.isomorphic;
                if !report_json.is_null() {
                    *report_json = to_c(serde_json::to_string(&rep).expect("reports serialize"));
                }
                if ok {
                    QtkStatus::Ok
                } else {
                    set_error("presentations are not isomorphic");
                    QtkStatus::CheckFailed
                }
            }
            Err(e) => fail(e),
        }
    })
}

/// Laurent presentation report for a Cartan matrix and word. `convention`
/// is `"row"`, `"col"` or NULL for the file's setting.
///
/// # Safety
/// String arguments must be NUL-terminated or NULL; `report_json` writable.
#[no_mangle]
pub unsafe extern "C" fn qtk_bott_samelson(
    cartan_json: *const c_char,
    convention: *const c_char,
    budget: u64,
    report_json: *mut *mut c_char,
) -> QtkStatus {
    guard(|| {
        if report_json.is_null() {
            set_error("report_json is null");
            return QtkStatus::NullPointer;
        }
        *report_json = ptr::null_mut();
        let text = match required(cartan_json, "cartan_json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let result = (|| {
            let conv = read_str(convention, "convention")?
                .map(|s| s.parse().map_err(|e: qtkring::bott::BottError| CommandError::Input(e.to_string())))
                .transpose()?;
            let cw = parse_json::<CartanFile>(text, "cartan word")?.to_word(conv)?;
            bott_samelson_report(&cw, budget_or_default(budget))
        })();
        match result {
            Ok(rep) => {
                let code = rep.exit_code();
                *report_json = to_c(serde_json::to_string(&rep).expect("reports serialize"));
                if code == 0 {
                    QtkStatus::Ok
                } else {
                    set_error("a report check failed");
                    QtkStatus::CheckFailed
                }
            }
            Err(e) => fail(e),
        }
    })
}

/// Message for the last failing call on this thread, or NULL. Borrowed:
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn qtk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn qtk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, static.
#[no_mangle]
pub extern "C" fn qtk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
