//! C ABI over `ocea`: configure and run one optimization, read back the
//! final archive and metric trace, and call the indicator functions.
//!
//! Handles are opaque and owned by the caller, who frees them with the
//! matching `*_free`. Every function returns an [`OceaStatus`] (or a sentinel
//! documented on it); on failure [`ocea_last_error_message`] describes the
//! cause. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ocea::engine::{run, Algorithm, RunTrace};
use ocea::harness::Params;
use ocea::Error;

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OceaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownName = 3,
    Unsupported = 4,
    Evaluation = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Problem, algorithm and parameters of one run.
pub struct OceaConfig {
    problem: String,
    algorithm: Algorithm,
    params: Params,
    seed: u64,
    cadence: usize,
}

/// Final archive and metric trace of a finished run.
pub struct OceaResult {
    trace: RunTrace,
    n: usize,
    m: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).unwrap_or_default());
}

fn fail(status: OceaStatus, message: impl Into<String>) -> OceaStatus {
    set_error(message);
    status
}

fn status_of(error: &Error) -> OceaStatus {
    match error {
        Error::UnknownName { .. } => OceaStatus::UnknownName,
        Error::Unsupported(_) => OceaStatus::Unsupported,
        Error::Evaluation { .. } => OceaStatus::Evaluation,
        _ => OceaStatus::InvalidArgument,
    }
}

fn guard(body: impl FnOnce() -> OceaStatus) -> OceaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => {
            if status == OceaStatus::Ok {
                set_error("");
            }
            status
        }
        Err(_) => fail(OceaStatus::Panic, "internal panic"),
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, OceaStatus> {
    if p.is_null() {
        return Err(fail(OceaStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        fail(
            OceaStatus::InvalidArgument,
            format!("{what} is not valid UTF-8"),
        )
    })
}

unsafe fn rows<'a>(
    data: *const f64,
    count: usize,
    width: usize,
    what: &str,
) -> Result<Vec<&'a [f64]>, OceaStatus> {
    if data.is_null() {
        return Err(fail(OceaStatus::NullPointer, format!("{what} is null")));
    }
    if width == 0 {
        return Err(fail(
            OceaStatus::InvalidArgument,
            "objective count must be positive",
        ));
    }
    let flat = std::slice::from_raw_parts(data, count * width);
    Ok(flat.chunks_exact(width).collect())
}

/// Creates a configuration for `problem` (a registered name such as
/// "ZDT1") and `algorithm` ("ocea" or "nsga2") with default parameters.
///
/// # Safety
/// `problem` and `algorithm` must be NUL-terminated strings; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ocea_config_new(
    problem: *const c_char,
    algorithm: *const c_char,
    out: *mut *mut OceaConfig,
) -> OceaStatus {
    guard(|| {
        if out.is_null() {
            return fail(OceaStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let (problem, algorithm) = match (text(problem, "problem"), text(algorithm, "algorithm")) {
            (Ok(p), Ok(a)) => (p, a),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let algorithm = match Algorithm::parse(algorithm) {
            Ok(a) => a,
            Err(e) => return fail(status_of(&e), e.to_string()),
        };
        let params = Params::default();
        if let Err(e) = params.resolve(algorithm, problem) {
            return fail(status_of(&e), e.to_string());
        }
        *out = Box::into_raw(Box::new(OceaConfig {
            problem: problem.to_string(),
            algorithm,
            params,
            seed: 0,
            cadence: 1,
        }));
        OceaStatus::Ok
    })
}

/// Sets a numeric parameter: population, generations, k_max, beta, f, cr,
/// pm, eta_m, dimension or cadence. Integer keys reject fractions. The whole
/// configuration is revalidated; on failure it is left unchanged.
///
/// # Safety
/// `config` must come from [`ocea_config_new`]; `key` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ocea_config_set(
    config: *mut OceaConfig,
    key: *const c_char,
    value: f64,
) -> OceaStatus {
    guard(|| {
        let Some(config) = config.as_mut() else {
            return fail(OceaStatus::NullPointer, "config is null");
        };
        let key = match text(key, "key") {
            Ok(k) => k,
            Err(s) => return s,
        };
        if key == "cadence" {
            if value < 0.0 || value.fract() != 0.0 {
                return fail(
                    OceaStatus::InvalidArgument,
                    format!("cadence must be a non-negative integer, got {value}"),
                );
            }
            config.cadence = value as usize;
            return OceaStatus::Ok;
        }
        let mut params = config.params.clone();
        if let Err(e) = params.set(key, value) {
            return fail(status_of(&e), e.to_string());
        }
        if let Err(e) = params.resolve(config.algorithm, &config.problem) {
            return fail(status_of(&e), e.to_string());
        }
        config.params = params;
        OceaStatus::Ok
    })
}

/// # Safety
/// `config` must come from [`ocea_config_new`].
#[no_mangle]
pub unsafe extern "C" fn ocea_config_set_seed(config: *mut OceaConfig, seed: u64) -> OceaStatus {
    guard(|| match config.as_mut() {
        Some(c) => {
            c.seed = seed;
            OceaStatus::Ok
        }
        None => fail(OceaStatus::NullPointer, "config is null"),
    })
}

/// # Safety
/// `config` must come from [`ocea_config_new`] or be null; it must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ocea_config_free(config: *mut OceaConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Runs the configured optimization to completion.
///
/// # Safety
/// `config` must come from [`ocea_config_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ocea_run(
    config: *const OceaConfig,
    out: *mut *mut OceaResult,
) -> OceaStatus {
    guard(|| {
        if out.is_null() {
            return fail(OceaStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let Some(config) = config.as_ref() else {
            return fail(OceaStatus::NullPointer, "config is null");
        };
        let (problem, mut run_config) =
            match config.params.resolve(config.algorithm, &config.problem) {
                Ok(r) => r,
                Err(e) => return fail(status_of(&e), e.to_string()),
            };
        run_config.seed = config.seed;
        run_config.trace.cadence = config.cadence;
        match run(&run_config, &problem) {
            Ok(trace) => {
                *out = Box::into_raw(Box::new(OceaResult {
                    trace,
                    n: problem.n(),
                    m: problem.m(),
                }));
                OceaStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Archive size; 0 for a null handle.
///
/// # Safety
/// `result` must come from [`ocea_run`] or be null.
#[no_mangle]
pub unsafe extern "C" fn ocea_result_len(result: *const OceaResult) -> usize {
    result.as_ref().map_or(0, |r| r.trace.final_archive.len())
}

/// Objective count; 0 for a null handle.
///
/// # Safety
/// `result` must come from [`ocea_run`] or be null.
#[no_mangle]
pub unsafe extern "C" fn ocea_result_objectives(result: *const OceaResult) -> usize {
    result.as_ref().map_or(0, |r| r.m)
}

/// Decision-vector length; 0 for a null handle.
///
/// # Safety
/// `result` must come from [`ocea_run`] or be null.
#[no_mangle]
pub unsafe extern "C" fn ocea_result_variables(result: *const OceaResult) -> usize {
    result.as_ref().map_or(0, |r| r.n)
}

/// Number of recorded trace rows; 0 for a null handle.
///
/// # Safety
/// `result` must come from [`ocea_run`] or be null.
#[no_mangle]
pub unsafe extern "C" fn ocea_result_trace_len(result: *const OceaResult) -> usize {
    result.as_ref().map_or(0, |r| r.trace.reports.len())
}

unsafe fn copy_out(
    values: impl ExactSizeIterator<Item = f64>,
    out: *mut f64,
    capacity: usize,
) -> OceaStatus {
    if out.is_null() {
        return fail(OceaStatus::NullPointer, "out is null");
    }
    let needed = values.len();
    if capacity < needed {
        return fail(
            OceaStatus::BufferTooSmall,
            format!("buffer holds {capacity} values, {needed} needed"),
        );
    }
    for (i, v) in values.enumerate() {
        *out.add(i) = v;
    }
    OceaStatus::Ok
}

/// Copies the archive's objective vectors, row-major (`len * objectives`).
///
/// # Safety
/// `result` must come from [`ocea_run`]; `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn ocea_result_front(
    result: *const OceaResult,
    out: *mut f64,
    capacity: usize,
) -> OceaStatus {
    guard(|| match result.as_ref() {
        Some(r) => {
            let values: Vec<f64> = r
                .trace
                .final_archive
                .iter()
                .flat_map(|s| s.f.iter().copied())
                .collect();
            copy_out(values.into_iter(), out, capacity)
        }
        None => fail(OceaStatus::NullPointer, "result is null"),
    })
}

/// Copies the archive's decision vectors, row-major (`len * variables`).
///
/// # Safety
/// `result` must come from [`ocea_run`]; `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn ocea_result_decisions(
    result: *const OceaResult,
    out: *mut f64,
    capacity: usize,
) -> OceaStatus {
    guard(|| match result.as_ref() {
        Some(r) => {
            let values: Vec<f64> = r
                .trace
                .final_archive
                .iter()
                .flat_map(|s| s.x.iter().copied())
                .collect();
            copy_out(values.into_iter(), out, capacity)
        }
        None => fail(OceaStatus::NullPointer, "result is null"),
    })
}

/// Copies the metric trace as rows of `generation, igd, hv, wall_time`
/// (`trace_len * 4` doubles).
///
/// # Safety
/// `result` must come from [`ocea_run`]; `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn ocea_result_trace(
    result: *const OceaResult,
    out: *mut f64,
    capacity: usize,
) -> OceaStatus {
    guard(|| match result.as_ref() {
        Some(r) => {
            let values: Vec<f64> = r
                .trace
                .reports
                .iter()
                .flat_map(|m| [m.generation as f64, m.igd, m.hv, m.wall_time])
                .collect();
            copy_out(values.into_iter(), out, capacity)
        }
        None => fail(OceaStatus::NullPointer, "result is null"),
    })
}

/// # Safety
/// `result` must come from [`ocea_run`] or be null; it must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn ocea_result_free(result: *mut OceaResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Hypervolume of `count` points of `m` objectives (row-major) against
/// `reference`. Supports two and three objectives.
///
/// # Safety
/// `points` must hold `count * m` doubles, `reference` `m` doubles; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn ocea_hypervolume(
    points: *const f64,
    count: usize,
    m: usize,
    reference: *const f64,
    out: *mut f64,
) -> OceaStatus {
    guard(|| {
        if out.is_null() || reference.is_null() {
            return fail(OceaStatus::NullPointer, "reference or out is null");
        }
        let pts = match rows(points, count, m, "points") {
            Ok(p) => p,
            Err(s) => return s,
        };
        let r = std::slice::from_raw_parts(reference, m);
        match ocea::selection::hypervolume(&pts, r) {
            Ok(v) => {
                *out = v;
                OceaStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// IGD of `count` approximation points against `reference_count` reference
/// points, both row-major with `m` objectives.
///
/// # Safety
/// The arrays must hold `count * m` and `reference_count * m` doubles; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn ocea_igd(
    approx: *const f64,
    count: usize,
    reference: *const f64,
    reference_count: usize,
    m: usize,
    out: *mut f64,
) -> OceaStatus {
    guard(|| {
        if out.is_null() {
            return fail(OceaStatus::NullPointer, "out is null");
        }
        let (a, r) = match (
            rows(approx, count, m, "approx"),
            rows(reference, reference_count, m, "reference"),
        ) {
            (Ok(a), Ok(r)) => (a, r),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match ocea::metrics::igd_points(&a, &r) {
            Ok(v) => {
                *out = v;
                OceaStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// 1 if `a` Pareto-dominates `b` (minimization), 0 if not, -1 on a null
/// pointer.
///
/// # Safety
/// `a` and `b` must hold `m` doubles each.
#[no_mangle]
pub unsafe extern "C" fn ocea_dominates(a: *const f64, b: *const f64, m: usize) -> c_int {
    if a.is_null() || b.is_null() {
        set_error("a or b is null");
        return -1;
    }
    let (a, b) = (
        std::slice::from_raw_parts(a, m),
        std::slice::from_raw_parts(b, m),
    );
    c_int::from(ocea::domain::dominates(a, b))
}

/// Message of the last failure on this thread; empty after a success. The
/// pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ocea_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ocea_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
