use std::ffi::{CStr, CString};
use std::ptr;

use qtkring_ffi::*;

const TRIANGLE: &str = r#"{"dim":2,"facets":3,"vertices":[[1,2],[0,2],[0,1]],"coords":[[0,0],[1,0],[0,1]]}"#;
const TRIANGLE_LAMBDA: &str = r#"{"lambda":[[-1,-1],[1,0],[0,1]],"base_vertex":0}"#;
const SQUARE: &str = r#"{"dim":2,"facets":4,"vertices":[[0,2],[0,3],[1,2],[1,3]]}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> Option<String> {
    let p = qtk_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    qtk_string_free(s);
    out
}

#[test]
fn kring_handle_round_trip() {
    let (p, l) = (c(TRIANGLE), c(TRIANGLE_LAMBDA));
    let mut h = ptr::null_mut();
    let st = unsafe { qtk_kring_compute(p.as_ptr(), l.as_ptr(), ptr::null(), ptr::null(), 0, &mut h) };
    assert_eq!(st, QtkStatus::Ok);
    assert!(last_error().is_none());
    unsafe {
        assert_eq!(qtk_kring_rank(h), 3);
        assert_eq!(qtk_kring_vertex_count(h), 3);
        let json = CStr::from_ptr(qtk_kring_report_json(h)).to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(json).unwrap();
        assert_eq!(v["rank"], 3);
        assert_eq!(v["checks"]["projective_bundle_relation"], true);
        qtk_kring_free(h);
    }
}

#[test]
fn kring_with_coefficients() {
    let (p, l, r) = (c(TRIANGLE), c(TRIANGLE_LAMBDA), c("2,3"));
    let mut h = ptr::null_mut();
    let st = unsafe { qtk_kring_compute(p.as_ptr(), l.as_ptr(), r.as_ptr(), ptr::null(), 0, &mut h) };
    assert_eq!(st, QtkStatus::Ok);
    let json = unsafe { CStr::from_ptr(qtk_kring_report_json(h)) }.to_str().unwrap().to_owned();
    unsafe { qtk_kring_free(h) };
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["r"], serde_json::json!(["2", "3"]));
    assert_eq!(v["checks"]["projective_bundle_relation"], true);
}

#[test]
fn input_errors_set_last_error() {
    let (p, bad) = (c(TRIANGLE), c("{not json"));
    let mut h = ptr::null_mut();
    let st = unsafe { qtk_kring_compute(p.as_ptr(), bad.as_ptr(), ptr::null(), ptr::null(), 0, &mut h) };
    assert_eq!(st, QtkStatus::InputError);
    assert!(h.is_null());
    assert!(last_error().unwrap().contains("lambda"));

    let l = c(TRIANGLE_LAMBDA);
    let zero = c("0,1");
    let st = unsafe { qtk_kring_compute(p.as_ptr(), l.as_ptr(), zero.as_ptr(), ptr::null(), 0, &mut h) };
    assert_eq!(st, QtkStatus::InputError);

    let st = unsafe { qtk_kring_compute(ptr::null(), l.as_ptr(), ptr::null(), ptr::null(), 0, &mut h) };
    assert_eq!(st, QtkStatus::NullPointer);
    let st = unsafe { qtk_kring_compute(p.as_ptr(), l.as_ptr(), ptr::null(), ptr::null(), 0, ptr::null_mut()) };
    assert_eq!(st, QtkStatus::NullPointer);
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        assert_eq!(qtk_kring_rank(ptr::null()), 0);
        assert!(qtk_kring_report_json(ptr::null()).is_null());
        qtk_kring_free(ptr::null_mut());
        qtk_string_free(ptr::null_mut());
    }
}

#[test]
fn validate_reports_failures() {
    let (p, l) = (c(TRIANGLE), c(TRIANGLE_LAMBDA));
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { qtk_validate(p.as_ptr(), l.as_ptr(), &mut out) }, QtkStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&unsafe { take(out) }).unwrap();
    assert_eq!(v["passed"], true);

    // facets 0 and 2 meet at vertex {0,2} but carry the same vector
    let (sq, lam) = (c(SQUARE), c(r#"{"lambda":[[1,0],[0,1],[1,0],[0,1]]}"#));
    assert_eq!(unsafe { qtk_validate(sq.as_ptr(), lam.as_ptr(), &mut out) }, QtkStatus::CheckFailed);
    let v: serde_json::Value = serde_json::from_str(&unsafe { take(out) }).unwrap();
    assert_eq!(v["passed"], false);
    assert!(last_error().is_some());
}

#[test]
fn bott_compare_and_samelson() {
    let b = c(r#"{"n":2,"c":[[1,2,1]]}"#);
    let mut iso = false;
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { qtk_bott_compare(b.as_ptr(), 0, &mut iso, &mut out) }, QtkStatus::Ok);
    assert!(iso);
    let v: serde_json::Value = serde_json::from_str(&unsafe { take(out) }).unwrap();
    assert_eq!(v["pipeline_rank"], 4);

    let cw = c(r#"{"type":"A","rank":2,"word":[1,2]}"#);
    assert_eq!(unsafe { qtk_bott_samelson(cw.as_ptr(), ptr::null(), 0, &mut out) }, QtkStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&unsafe { take(out) }).unwrap();
    assert_eq!(v["rank"], 4);

    let bad = c("diagonal");
    assert_eq!(unsafe { qtk_bott_samelson(cw.as_ptr(), bad.as_ptr(), 0, &mut out) }, QtkStatus::InputError);
    assert!(out.is_null());
}

#[test]
fn version_and_header() {
    let v = unsafe { CStr::from_ptr(qtk_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qtkring.h")).unwrap();
    for sym in ["qtk_kring_compute", "qtk_validate", "qtk_bott_compare", "qtk_string_free", "QTK_STATUS_PANIC"] {
        assert!(header.contains(sym), "{sym} missing from header");
    }
}
