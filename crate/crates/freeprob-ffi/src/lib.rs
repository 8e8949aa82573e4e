//! C ABI over the scenario runner. Reports are opaque handles; strings
//! returned by `fp_*` functions are heap allocations released through
//! `fp_string_free`. A failing check is a report property, not an FFI
//! error: `fp_run_scenario` returns `Ok` whenever a report was produced.

use freeprob::report::Report;
use freeprob::scenario::{bundled_scenario, parse_scenario};
use freeprob::suites::{run_scenario, RunConfig};
use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Outcome of an FFI call. Anything but `Ok` leaves a message retrievable
/// through `fp_last_error_message`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// The scenario could not be parsed or executed: malformed JSON,
    /// unknown fields, unsupported schema version, invalid parameters.
    SchemaViolation = 3,
    InternalPanic = 4,
}

/// Optional overrides applied on top of scenario-supplied values. Each
/// `has_*` flag gates the field next to it; pass NULL to use defaults.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct FpConfig {
    pub has_seed: bool,
    pub seed: u64,
    pub has_tol: bool,
    pub tol: f64,
    pub has_depth: bool,
    pub depth: usize,
    pub has_trials: bool,
    pub trials: u64,
}

/// Completed run of one scenario. Opaque; query through `fp_report_*`.
pub struct FpReport(Report);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(sanitized).expect("nul bytes stripped"));
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

unsafe fn config_from(ptr: *const FpConfig) -> RunConfig {
    if ptr.is_null() {
        return RunConfig::default();
    }
    let c = &*ptr;
    RunConfig {
        seed: c.has_seed.then_some(c.seed),
        tol: c.has_tol.then_some(c.tol),
        depth: c.has_depth.then_some(c.depth),
        trials: c.has_trials.then_some(c.trials),
    }
}

fn export_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(std::ptr::null_mut(), CString::into_raw)
}

/// Library version as a static string. Never freed by the caller.
#[no_mangle]
pub extern "C" fn fp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message describing the most recent failure on this thread, or NULL.
/// Valid until the next `fp_*` call on the same thread; never freed by
/// the caller.
#[no_mangle]
pub extern "C" fn fp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

/// Parse and execute a scenario given as a JSON document.
///
/// On `Ok`, `*out_report` owns a report handle that must be released with
/// `fp_report_free`. The report may still describe failing checks; inspect
/// `fp_report_passed`. On any other status `*out_report` is NULL.
///
/// # Safety
/// `scenario_json` must point to a NUL-terminated string and `out_report`
/// to writable pointer storage; `config` is either NULL or a valid
/// `FpConfig`.
#[no_mangle]
pub unsafe extern "C" fn fp_run_scenario(
    scenario_json: *const c_char,
    config: *const FpConfig,
    out_report: *mut *mut FpReport,
) -> FpStatus {
    if scenario_json.is_null() || out_report.is_null() {
        set_error("scenario_json and out_report must be non-null");
        return FpStatus::NullArgument;
    }
    *out_report = std::ptr::null_mut();
    let text = match CStr::from_ptr(scenario_json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("scenario_json is not valid UTF-8");
            return FpStatus::InvalidUtf8;
        }
    };
    let run_config = config_from(config);
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        let scenario = parse_scenario(text)?;
        run_scenario(&scenario, text.as_bytes(), &run_config)
    }));
    match outcome {
        Ok(Ok(report)) => {
            clear_error();
            *out_report = Box::into_raw(Box::new(FpReport(report)));
            FpStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            FpStatus::SchemaViolation
        }
        Err(_) => {
            set_error("internal panic while running scenario");
            FpStatus::InternalPanic
        }
    }
}

/// 1 if every check in the report passed, 0 otherwise, -1 on NULL.
///
/// # Safety
/// `report` is NULL or a handle from `fp_run_scenario` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fp_report_passed(report: *const FpReport) -> c_int {
    match report.as_ref() {
        Some(r) => c_int::from(r.0.passed),
        None => -1,
    }
}

/// Number of checks in the report, or -1 on NULL.
///
/// # Safety
/// `report` is NULL or a handle from `fp_run_scenario` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fp_report_check_count(report: *const FpReport) -> i64 {
    match report.as_ref() {
        Some(r) => r.0.checks.len() as i64,
        None => -1,
    }
}

/// Report serialized as JSON. Caller frees with `fp_string_free`; NULL on
/// NULL input.
///
/// # Safety
/// `report` is NULL or a handle from `fp_run_scenario` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fp_report_to_json(report: *const FpReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => export_string(r.0.to_json()),
        None => std::ptr::null_mut(),
    }
}

/// Human-readable summary table, one line per check. Caller frees with
/// `fp_string_free`; NULL on NULL input.
///
/// # Safety
/// `report` is NULL or a handle from `fp_run_scenario` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fp_report_render_text(report: *const FpReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => export_string(r.0.render_text()),
        None => std::ptr::null_mut(),
    }
}

/// Release a report handle. NULL is ignored.
///
/// # Safety
/// `report` is NULL or a handle from `fp_run_scenario` not freed before.
#[no_mangle]
pub unsafe extern "C" fn fp_report_free(report: *mut FpReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// JSON text of a bundled scenario by name, or NULL if the name is
/// unknown. Caller frees with `fp_string_free`.
///
/// # Safety
/// `name` is NULL or points to a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fp_bundled_scenario(name: *const c_char) -> *mut c_char {
    if name.is_null() {
        return std::ptr::null_mut();
    }
    let Ok(name) = CStr::from_ptr(name).to_str() else {
        return std::ptr::null_mut();
    };
    match bundled_scenario(name) {
        Some(text) => export_string(text.to_string()),
        None => std::ptr::null_mut(),
    }
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` was returned by an `fp_*` function documented as caller-freed and
/// has not been freed before.
#[no_mangle]
pub unsafe extern "C" fn fp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
