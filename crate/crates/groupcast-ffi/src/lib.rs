//! C ABI for the rate-region toolkit.
//!
//! Handles are opaque pointers owned by this library; every `gc_*_parse` or
//! generator call that returns a pointer hands ownership to the caller, who
//! must release it with the matching `gc_*_free`. Strings returned by
//! `*_to_json` functions are NUL-terminated, UTF-8, and released with
//! [`gc_string_free`]. Fallible calls either return null (pointer-returning
//! functions) or a [`GcStatus`]; in both cases [`gc_last_error_message`]
//! holds a thread-local description until the next failure on that thread.
//!
//! All payloads are the same JSON documents the CLI reads and writes:
//! networks, H-representations, V-representations, and verification reports.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use groupcast::geometry::{enumerate_vertices, minimize, HPolytope};
use groupcast::network::CombinationNetwork;
use groupcast::regions::{generate_for_network, RegionKind};
use groupcast::verify::{fme_pipeline, verify_capacity, VerificationReport};
use groupcast::{io, Error};

/// Status codes for fallible calls.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    SchemaError = 3,
    DomainError = 4,
    CapabilityExceeded = 5,
    Unbounded = 6,
    InternalError = 7,
}

/// Region selector mirroring the library's catalog.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GcRegionKind {
    InnerBound = 0,
    SplitRate9D = 1,
    NetworkInnerBound = 2,
    Capacity = 3,
    ThreeDegraded = 4,
    TwoDegraded = 5,
    BinningInnerBound = 6,
    BinningSplit11D = 7,
}

impl From<GcRegionKind> for RegionKind {
    fn from(kind: GcRegionKind) -> RegionKind {
        match kind {
            GcRegionKind::InnerBound => RegionKind::InnerBound,
            GcRegionKind::SplitRate9D => RegionKind::SplitRate9D,
            GcRegionKind::NetworkInnerBound => RegionKind::NetworkInnerBound,
            GcRegionKind::Capacity => RegionKind::Capacity,
            GcRegionKind::ThreeDegraded => RegionKind::ThreeDegraded,
            GcRegionKind::TwoDegraded => RegionKind::TwoDegraded,
            GcRegionKind::BinningInnerBound => RegionKind::BinningInnerBound,
            GcRegionKind::BinningSplit11D => RegionKind::BinningSplit11D,
        }
    }
}

/// Opaque combination network handle.
pub struct GcNetwork(CombinationNetwork);
/// Opaque H-polytope handle.
pub struct GcPolytope(HPolytope);
/// Opaque verification report handle.
pub struct GcReport(VerificationReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("invalid error text").expect("static text"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn status_of(err: &Error) -> GcStatus {
    match err {
        Error::Schema(_) => GcStatus::SchemaError,
        Error::Domain(_) | Error::InvalidFamily(_) => GcStatus::DomainError,
        Error::Capability(_) => GcStatus::CapabilityExceeded,
        Error::Unbounded(_) => GcStatus::Unbounded,
        Error::Internal(_) | Error::Io(_) => GcStatus::InternalError,
    }
}

fn record(err: Error) -> GcStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

/// Runs a fallible body with panic containment; panics become
/// `InternalError`.
fn guarded<T, F: FnOnce() -> Result<T, GcStatus>>(f: F) -> Result<T, GcStatus> {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(result) => result,
        Err(_) => {
            set_error("internal panic".into());
            Err(GcStatus::InternalError)
        }
    }
}

unsafe fn utf8_arg<'a>(ptr: *const c_char) -> Result<&'a str, GcStatus> {
    if ptr.is_null() {
        set_error("null string argument".into());
        return Err(GcStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        GcStatus::InvalidUtf8
    })
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("NUL bytes stripped")
        .into_raw()
}

unsafe fn deref<'a, T>(ptr: *const T) -> Result<&'a T, GcStatus> {
    if ptr.is_null() {
        set_error("null handle".into());
        return Err(GcStatus::NullPointer);
    }
    Ok(&*ptr)
}

/// Most recent error message on this thread, or null if none was recorded.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(msg) => msg.as_ptr(),
        None => ptr::null(),
    })
}

/// Parses a network from its JSON form. Returns null on error.
///
/// # Safety
/// `json` must be a valid NUL-terminated string pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_network_parse(json: *const c_char) -> *mut GcNetwork {
    let result = guarded(|| {
        let text = utf8_arg(json)?;
        io::network_from_json(text).map_err(record)
    });
    match result {
        Ok(net) => Box::into_raw(Box::new(GcNetwork(net))),
        Err(_) => ptr::null_mut(),
    }
}

/// # Safety
/// `net` must come from [`gc_network_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gc_network_free(net: *mut GcNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Receiver count of the network, or 0 on a null handle.
///
/// # Safety
/// `net` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gc_network_k(net: *const GcNetwork) -> u32 {
    match deref(net) {
        Ok(net) => net.0.k() as u32,
        Err(_) => 0,
    }
}

/// Network serialized back to JSON; free with [`gc_string_free`].
///
/// # Safety
/// `net` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gc_network_to_json(net: *const GcNetwork) -> *mut c_char {
    match guarded(|| deref(net).map(|n| io::network_to_json(&n.0))) {
        Ok(json) => into_c_string(json),
        Err(_) => ptr::null_mut(),
    }
}

/// Generates a region for the network; the result is minimized when
/// `reduce` is nonzero. Returns null on error.
///
/// # Safety
/// `net` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gc_region(
    net: *const GcNetwork,
    kind: GcRegionKind,
    reduce: i32,
) -> *mut GcPolytope {
    let result = guarded(|| {
        let net = deref(net)?;
        let region = generate_for_network(kind.into(), &net.0).map_err(record)?;
        Ok(if reduce != 0 {
            minimize(&region)
        } else {
            region
        })
    });
    match result {
        Ok(poly) => Box::into_raw(Box::new(GcPolytope(poly))),
        Err(_) => ptr::null_mut(),
    }
}

/// # Safety
/// `poly` must come from [`gc_region`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gc_polytope_free(poly: *mut GcPolytope) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Number of variables, or 0 on a null handle.
///
/// # Safety
/// `poly` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gc_polytope_dim(poly: *const GcPolytope) -> u32 {
    deref(poly).map(|p| p.0.dim() as u32).unwrap_or(0)
}

/// Number of rows, or 0 on a null handle.
///
/// # Safety
/// `poly` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gc_polytope_rows(poly: *const GcPolytope) -> u32 {
    deref(poly).map(|p| p.0.rows().len() as u32).unwrap_or(0)
}

/// H-representation JSON; free with [`gc_string_free`].
///
/// # Safety
/// `poly` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gc_polytope_to_json(poly: *const GcPolytope) -> *mut c_char {
    match guarded(|| deref(poly).map(|p| io::hrep_to_json(&p.0))) {
        Ok(json) => into_c_string(json),
        Err(_) => ptr::null_mut(),
    }
}

/// Enumerates vertices into a V-representation JSON string placed in `out`.
/// Fails with `CapabilityExceeded` above dimension 6 and `Unbounded` for
/// unbounded polyhedra.
///
/// # Safety
/// `poly` must be a live handle or null; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_polytope_vertices_json(
    poly: *const GcPolytope,
    out: *mut *mut c_char,
) -> GcStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return GcStatus::NullPointer;
    }
    match guarded(|| {
        let poly = deref(poly)?;
        let vertices = enumerate_vertices(&poly.0).map_err(record)?;
        Ok(io::vrep_to_json(&vertices))
    }) {
        Ok(json) => {
            *out = into_c_string(json);
            GcStatus::Ok
        }
        Err(status) => {
            *out = ptr::null_mut();
            status
        }
    }
}

/// Runs the capacity verification pipeline. Returns null on error; a
/// completed run with failing checks still returns a report.
///
/// # Safety
/// `net` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gc_verify_capacity(net: *const GcNetwork, seed: u64) -> *mut GcReport {
    let result = guarded(|| {
        let net = deref(net)?;
        verify_capacity(&net.0, Some(seed)).map_err(record)
    });
    match result {
        Ok(report) => Box::into_raw(Box::new(GcReport(report))),
        Err(_) => ptr::null_mut(),
    }
}

/// Runs the split-rate projection pipeline at the network's uniform coding
/// distribution. Returns null on error.
///
/// # Safety
/// `net` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gc_fme_pipeline(
    net: *const GcNetwork,
    check_intermediates: i32,
    seed: u64,
) -> *mut GcReport {
    let result = guarded(|| {
        let net = deref(net)?;
        let v = net.0.optimal_valuation().map_err(record)?;
        fme_pipeline(&v, check_intermediates != 0, Some(seed)).map_err(record)
    });
    match result {
        Ok(out) => Box::into_raw(Box::new(GcReport(out.report))),
        Err(_) => ptr::null_mut(),
    }
}

/// 1 if every check passed, 0 if some failed, -1 on a null handle.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gc_report_pass(report: *const GcReport) -> i32 {
    match deref(report) {
        Ok(report) => report.0.pass as i32,
        Err(_) => -1,
    }
}

/// Report JSON; free with [`gc_string_free`].
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gc_report_to_json(report: *const GcReport) -> *mut c_char {
    match guarded(|| deref(report).map(|r| r.0.to_json())) {
        Ok(json) => into_c_string(json),
        Err(_) => ptr::null_mut(),
    }
}

/// # Safety
/// `report` must come from a `gc_*` call and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gc_report_free(report: *mut GcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Releases a string returned by any `*_to_json` function.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cstring(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    fn unit_k3_json() -> CString {
        cstring(
            r#"{"K": 3, "capacities": {"1": "1", "2": "1", "3": "1",
                "12": "1", "13": "1", "23": "1", "123": "1"}}"#,
        )
    }

    unsafe fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let text = CStr::from_ptr(ptr).to_str().unwrap().to_string();
        gc_string_free(ptr);
        text
    }

    #[test]
    fn parse_generate_verify_round_trip() {
        unsafe {
            let net = gc_network_parse(unit_k3_json().as_ptr());
            assert!(!net.is_null());
            assert_eq!(gc_network_k(net), 3);

            let poly = gc_region(net, GcRegionKind::Capacity, 1);
            assert!(!poly.is_null());
            assert_eq!(gc_polytope_dim(poly), 4);
            assert_eq!(gc_polytope_rows(poly), 5);
            let json = take_string(gc_polytope_to_json(poly));
            assert!(json.contains("\"variables\""));

            let mut vjson: *mut c_char = ptr::null_mut();
            assert_eq!(gc_polytope_vertices_json(poly, &mut vjson), GcStatus::Ok);
            let vtext = take_string(vjson);
            assert!(vtext.contains('['));

            let report = gc_verify_capacity(net, 11);
            assert!(!report.is_null());
            assert_eq!(gc_report_pass(report), 1);
            let rjson = take_string(gc_report_to_json(report));
            assert!(rjson.contains("outer_contains_inner"));

            gc_report_free(report);
            gc_polytope_free(poly);
            gc_network_free(net);
        }
    }

    #[test]
    fn fme_report_through_ffi() {
        unsafe {
            let net = gc_network_parse(unit_k3_json().as_ptr());
            let report = gc_fme_pipeline(net, 1, 0);
            assert!(!report.is_null());
            assert_eq!(gc_report_pass(report), 1);
            gc_report_free(report);
            gc_network_free(net);
        }
    }

    #[test]
    fn errors_set_status_and_message() {
        unsafe {
            let bad = gc_network_parse(cstring("{ not json").as_ptr());
            assert!(bad.is_null());
            let msg = gc_last_error_message();
            assert!(!msg.is_null());
            assert!(CStr::from_ptr(msg).to_str().unwrap().contains("schema"));

            assert!(gc_network_parse(ptr::null()).is_null());
            assert_eq!(gc_network_k(ptr::null()), 0);
            assert_eq!(gc_report_pass(ptr::null()), -1);
        }
    }

    #[test]
    fn vertex_capability_error_surfaces() {
        unsafe {
            let net = gc_network_parse(unit_k3_json().as_ptr());
            let poly = gc_region(net, GcRegionKind::BinningSplit11D, 0);
            assert!(!poly.is_null());
            assert_eq!(gc_polytope_dim(poly), 11);
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                gc_polytope_vertices_json(poly, &mut out),
                GcStatus::CapabilityExceeded
            );
            assert!(out.is_null());
            gc_polytope_free(poly);
            gc_network_free(net);
        }
    }
}
