//! C ABI over the report builders: parse a JSON document into an opaque
//! handle, run subcommand-equivalent reports, get JSON strings back.
//! Report bytes are identical to the command-line tool's output for the
//! same input and parameters.
//!
//! Conventions: every function returns an [`OverdetStatus`]; `out_json`
//! always receives a NUL-terminated UTF-8 string owned by the caller and
//! released with [`overdet_string_free`] — the report on `Ok`,
//! `ProbeGrowing`, and `ProbeVacuous`, an error message on everything
//! else. Null checks happen before anything is dereferenced, and panics
//! are caught at the boundary.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use overdet::error::Error;
use overdet::parse::{parse_document, parse_weight, InputDoc};
use overdet::report::{
    finalize, pl_probe_report, pw_check_report, render_json, resolve_report,
    variety_report, weights_report, ReportBundle, ReportOptions,
};

/// Result of every API call. `Ok`, `InputError`, `ProbeGrowing`,
/// `ProbeVacuous`, and `ResourceCap` match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverdetStatus {
    Ok = 0,
    InputError = 1,
    ProbeGrowing = 2,
    ProbeVacuous = 3,
    ResourceCap = 4,
    NullPointer = 5,
    InvalidUtf8 = 6,
    Panicked = 7,
}

/// Parsed input document; created by [`overdet_document_parse`], released
/// by [`overdet_document_free`]. The struct is opaque to C.
pub struct OverdetDocument {
    text: String,
    doc: InputDoc,
}

fn status_of(err: &Error) -> OverdetStatus {
    match err.exit_code() {
        4 => OverdetStatus::ResourceCap,
        _ => OverdetStatus::InputError,
    }
}

fn exit_status(code: i32) -> OverdetStatus {
    match code {
        0 => OverdetStatus::Ok,
        2 => OverdetStatus::ProbeGrowing,
        3 => OverdetStatus::ProbeVacuous,
        4 => OverdetStatus::ResourceCap,
        _ => OverdetStatus::InputError,
    }
}

fn into_c_string(s: String) -> *mut c_char {
    match CString::new(s) {
        Ok(c) => c.into_raw(),
        Err(_) => CString::new("report contained an interior NUL byte")
            .expect("static message has no NUL")
            .into_raw(),
    }
}

unsafe fn write_out(out_json: *mut *mut c_char, s: String) {
    if !out_json.is_null() {
        *out_json = into_c_string(s);
    }
}

unsafe fn read_utf8<'a>(ptr: *const c_char) -> Result<&'a str, OverdetStatus> {
    if ptr.is_null() {
        return Err(OverdetStatus::NullPointer);
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| OverdetStatus::InvalidUtf8)
}

unsafe fn run_report<F>(
    out_json: *mut *mut c_char,
    subcommand: &str,
    input_text: &str,
    build: F,
) -> OverdetStatus
where
    F: FnOnce() -> Result<ReportBundle, Error>,
{
    if out_json.is_null() {
        return OverdetStatus::NullPointer;
    }
    let outcome = catch_unwind(AssertUnwindSafe(build));
    match outcome {
        Ok(Ok(bundle)) => {
            let rendered = render_json(&finalize(subcommand, input_text, &bundle));
            write_out(out_json, rendered);
            exit_status(bundle.exit_code)
        }
        Ok(Err(err)) => {
            write_out(out_json, err.to_string());
            status_of(&err)
        }
        Err(_) => {
            write_out(out_json, "internal panic; this is a bug".to_string());
            OverdetStatus::Panicked
        }
    }
}

/// Parses an input document. On success `*out_doc` owns the handle; on
/// failure `*out_doc` is null and the return status says why (parse error
/// details are not carried across this call — run the same text through
/// the command-line tool for the full message).
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out_doc` must be a valid
/// pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn overdet_document_parse(
    json: *const c_char,
    lenient: bool,
    out_doc: *mut *mut OverdetDocument,
) -> OverdetStatus {
    if out_doc.is_null() {
        return OverdetStatus::NullPointer;
    }
    *out_doc = std::ptr::null_mut();
    let text = match read_utf8(json) {
        Ok(t) => t.to_string(),
        Err(status) => return status,
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| parse_document(&text, lenient)));
    match outcome {
        Ok(Ok(doc)) => {
            *out_doc = Box::into_raw(Box::new(OverdetDocument { text, doc }));
            OverdetStatus::Ok
        }
        Ok(Err(err)) => status_of(&err),
        Err(_) => OverdetStatus::Panicked,
    }
}

/// Releases a document handle. Null is a no-op; a handle must not be used
/// after this call.
///
/// # Safety
/// `doc` must be null or a pointer from [`overdet_document_parse`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn overdet_document_free(doc: *mut OverdetDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Releases a string returned through any `out_json` parameter.
///
/// # Safety
/// `s` must be null or a string pointer returned by this library that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn overdet_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Static version string; do not free.
#[no_mangle]
pub extern "C" fn overdet_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Free resolution, integrability conditions, and annihilator report.
///
/// # Safety
/// `doc` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn overdet_resolve(
    doc: *const OverdetDocument,
    out_json: *mut *mut c_char,
) -> OverdetStatus {
    let Some(doc) = doc.as_ref() else {
        return OverdetStatus::NullPointer;
    };
    run_report(out_json, "resolve", &doc.text, || resolve_report(&doc.doc))
}

/// Factorization and Puiseux branch report for the document's curve.
///
/// # Safety
/// `doc` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn overdet_variety(
    doc: *const OverdetDocument,
    puiseux_order: u32,
    out_json: *mut *mut c_char,
) -> OverdetStatus {
    let Some(doc) = doc.as_ref() else {
        return OverdetStatus::NullPointer;
    };
    let opts = ReportOptions {
        puiseux_order,
        ..ReportOptions::default()
    };
    run_report(out_json, "variety", &doc.text, || {
        variety_report(&doc.doc, &opts)
    })
}

/// Axiom and subadditivity report for the document's weights.
///
/// # Safety
/// `doc` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn overdet_weights(
    doc: *const OverdetDocument,
    out_json: *mut *mut c_char,
) -> OverdetStatus {
    let Some(doc) = doc.as_ref() else {
        return OverdetStatus::NullPointer;
    };
    run_report(out_json, "weights", &doc.text, || weights_report(&doc.doc))
}

/// Support-width decay experiment. `weight_json` may be null to use the
/// gevrey weight with exponent 1/s; otherwise it is a weight object or a
/// document whose first weight is used.
///
/// # Safety
/// `weight_json` must be null or NUL-terminated; `out_json` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn overdet_pw_check(
    weight_json: *const c_char,
    s: u32,
    epsilon: f64,
    factors: usize,
    out_json: *mut *mut c_char,
) -> OverdetStatus {
    let text = if weight_json.is_null() {
        String::new()
    } else {
        match read_utf8(weight_json) {
            Ok(t) => t.to_string(),
            Err(status) => return status,
        }
    };
    let opts = ReportOptions {
        s,
        epsilon,
        factors,
        ..ReportOptions::default()
    };
    run_report(out_json, "pw-check", &text, || {
        let weight = if text.is_empty() {
            None
        } else {
            Some(parse_weight(&text)?)
        };
        pw_check_report(weight.as_ref(), &opts)
    })
}

/// Finite-radius growth-transfer probe on the document's curve. The status
/// mirrors the probe verdict: `ProbeGrowing` and `ProbeVacuous` still carry
/// the full report in `out_json`.
///
/// # Safety
/// `doc` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn overdet_pl_probe(
    doc: *const OverdetDocument,
    rmax: f64,
    alpha: u32,
    radii: usize,
    angles: usize,
    seed: u64,
    out_json: *mut *mut c_char,
) -> OverdetStatus {
    let Some(doc) = doc.as_ref() else {
        return OverdetStatus::NullPointer;
    };
    let opts = ReportOptions {
        rmax,
        alpha,
        radii,
        angles,
        seed,
        ..ReportOptions::default()
    };
    run_report(out_json, "pl-probe", &doc.text, || {
        pl_probe_report(&doc.doc, &opts)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::ptr;

    const GRADIENT: &str =
        r#"{"variables": ["z1", "z2"], "matrix": [["z1"], ["z2"]]}"#;

    unsafe fn parse(text: &str) -> *mut OverdetDocument {
        let c = CString::new(text).unwrap();
        let mut doc = ptr::null_mut();
        let status = overdet_document_parse(c.as_ptr(), false, &mut doc);
        assert_eq!(status, OverdetStatus::Ok);
        assert!(!doc.is_null());
        doc
    }

    unsafe fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let s = CStr::from_ptr(ptr).to_str().unwrap().to_string();
        overdet_string_free(ptr);
        s
    }

    #[test]
    fn resolve_matches_the_library_report_bytes() {
        unsafe {
            let doc = parse(GRADIENT);
            let mut out = ptr::null_mut();
            let status = overdet_resolve(doc, &mut out);
            assert_eq!(status, OverdetStatus::Ok);
            let via_ffi = take_string(out);
            overdet_document_free(doc);

            let parsed = parse_document(GRADIENT, false).unwrap();
            let bundle = resolve_report(&parsed).unwrap();
            let direct = render_json(&finalize("resolve", GRADIENT, &bundle));
            assert_eq!(via_ffi, direct);
        }
    }

    #[test]
    fn null_arguments_are_rejected_not_dereferenced() {
        unsafe {
            let mut out = ptr::null_mut();
            assert_eq!(
                overdet_resolve(ptr::null(), &mut out),
                OverdetStatus::NullPointer
            );
            let doc = parse(GRADIENT);
            assert_eq!(
                overdet_resolve(doc, ptr::null_mut()),
                OverdetStatus::NullPointer
            );
            let mut out_doc = ptr::null_mut();
            assert_eq!(
                overdet_document_parse(ptr::null(), false, &mut out_doc),
                OverdetStatus::NullPointer
            );
            overdet_document_free(doc);
            overdet_document_free(ptr::null_mut());
            overdet_string_free(ptr::null_mut());
        }
    }

    #[test]
    fn bad_documents_come_back_as_input_errors() {
        unsafe {
            let c = CString::new("{\"variables\": [\"z1\"], \"curvature\": 1}").unwrap();
            let mut doc = ptr::null_mut();
            let status = overdet_document_parse(c.as_ptr(), false, &mut doc);
            assert_eq!(status, OverdetStatus::InputError);
            assert!(doc.is_null());
        }
    }

    #[test]
    fn weights_error_message_travels_through_out_json() {
        unsafe {
            let doc = parse(r#"{"variables": ["z1", "z2"]}"#);
            let mut out = ptr::null_mut();
            let status = overdet_weights(doc, &mut out);
            assert_eq!(status, OverdetStatus::InputError);
            let message = take_string(out);
            assert!(message.contains("weights"), "{message}");
            overdet_document_free(doc);
        }
    }

    #[test]
    fn pw_check_runs_without_a_document() {
        unsafe {
            let mut out = ptr::null_mut();
            let status = overdet_pw_check(ptr::null(), 2, 1.0, 200, &mut out);
            assert_eq!(status, OverdetStatus::Ok);
            let report = take_string(out);
            assert!(report.contains("fitted_p"), "{report}");
        }
    }

    #[test]
    fn version_is_a_static_string() {
        unsafe {
            let v = CStr::from_ptr(overdet_version()).to_str().unwrap();
            assert_eq!(v, env!("CARGO_PKG_VERSION"));
        }
    }
}
