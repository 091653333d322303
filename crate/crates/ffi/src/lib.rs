// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
//! C ABI over the hls-forge flow.
//!
//! Graphs and synthesis results are opaque handles released with their
//! `_free` function. Strings returned to the caller are heap-allocated and
//! released with [`hf_string_free`]. Every entry point returns an
//! [`HfStatus`]; on failure, [`hf_last_error`] describes the cause.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hls_forge::flow::{synthesize, Design, ExitClass, Outcome, SynthOptions};
use hls_forge::ir::{gen_fft_with, gen_toy, parse_sfg, render_sfg, FftOptions, Sfg};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HfStatus {
    Ok = 0,
    /// A document failed to parse or check.
    Parse = 1,
    /// The constraints admit no timing, or the scheduler ran out of margin.
    TimingInfeasible = 2,
    /// A zero-margin operation could not get a memory port.
    MemoryConflict = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    InvalidArgument = 6,
    Panic = 7,
}

/// A signal flow graph.
pub struct HfSfg {
    sfg: Sfg,
}

/// Outcome of one synthesis run.
pub struct HfResult {
    status: HfStatus,
    latency: i64,
    report_json: String,
    schedule_json: String,
    gantt: String,
    diagnostic: String,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn guard(f: impl FnOnce() -> HfStatus) -> HfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => {
            if status == HfStatus::Ok {
                set_error("");
            }
            status
        }
        Err(_) => {
            set_error("internal panic");
            HfStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, HfStatus> {
    if p.is_null() {
        set_error(format!("`{what}` is null"));
        return Err(HfStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("`{what}` is not valid UTF-8"));
        HfStatus::InvalidUtf8
    })
}

fn into_c(s: &str) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn store<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

fn sfg_handle(out: *mut *mut HfSfg, sfg: Result<Sfg, String>) -> HfStatus {
    if out.is_null() {
        set_error("`out` is null");
        return HfStatus::NullPointer;
    }
    match sfg {
        Ok(sfg) => {
            unsafe { store(out, HfSfg { sfg }) };
            HfStatus::Ok
        }
        Err(msg) => {
            unsafe { *out = ptr::null_mut() };
            set_error(msg);
            HfStatus::Parse
        }
    }
}

/// Message for the last failed call on this thread; empty after a
/// successful one. Owned by the library, valid until the next call.
#[no_mangle]
pub extern "C" fn hf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a graph in the textual SFG format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hf_sfg_parse(text: *const c_char, out: *mut *mut HfSfg) -> HfStatus {
    guard(|| {
        let src = match unsafe { self::text(text, "text") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        sfg_handle(out, parse_sfg(src).map_err(|e| e.to_string()))
    })
}

/// The three-input toy graph.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hf_sfg_gen_toy(out: *mut *mut HfSfg) -> HfStatus {
    guard(|| sfg_handle(out, Ok(gen_toy())))
}

/// Radix-2 FFT of `n` points; `fold` elides trivial twiddles.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hf_sfg_gen_fft(n: u32, fold: bool, out: *mut *mut HfSfg) -> HfStatus {
    guard(|| {
        let sfg = gen_fft_with(
            n,
            FftOptions {
                fold_trivial_twiddles: fold,
            },
        );
        match sfg {
            Ok(sfg) => sfg_handle(out, Ok(sfg)),
            Err(e) => {
                let status = sfg_handle(out, Err(e.to_string()));
                if status == HfStatus::Parse {
                    HfStatus::InvalidArgument
                } else {
                    status
                }
            }
        }
    })
}

/// Number of nodes, 0 for a null handle.
///
/// # Safety
/// `sfg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hf_sfg_node_count(sfg: *const HfSfg) -> usize {
    sfg.as_ref().map_or(0, |h| h.sfg.len())
}

/// Number of edges, 0 for a null handle.
///
/// # Safety
/// `sfg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hf_sfg_edge_count(sfg: *const HfSfg) -> usize {
    sfg.as_ref().map_or(0, |h| h.sfg.edges().len())
}

/// Canonical text of the graph; free with [`hf_string_free`]. Null for a
/// null handle.
///
/// # Safety
/// `sfg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hf_sfg_render(sfg: *const HfSfg) -> *mut c_char {
    match sfg.as_ref() {
        Some(h) => into_c(&render_sfg(&h.sfg)),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `sfg` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hf_sfg_free(sfg: *mut HfSfg) {
    if !sfg.is_null() {
        drop(Box::from_raw(sfg));
    }
}

/// Schedules `sfg` under the I/O constraints `io`, the memory mapping `map`
/// and the operator library `lib_json` (null for unit latencies).
/// A negative `latency_override` keeps the declared bounds.
///
/// On `Ok`, `TimingInfeasible` and `MemoryConflict`, `*out` receives a result
/// handle; infeasible results carry only the diagnostic. On other statuses
/// `*out` is null.
///
/// # Safety
/// `sfg` must be a live handle, `io` and `map` NUL-terminated strings,
/// `lib_json` null or NUL-terminated, and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hf_synthesize(
    sfg: *const HfSfg,
    io: *const c_char,
    map: *const c_char,
    lib_json: *const c_char,
    latency_override: i64,
    out: *mut *mut HfResult,
) -> HfStatus {
    guard(|| {
        if out.is_null() {
            set_error("`out` is null");
            return HfStatus::NullPointer;
        }
        unsafe { *out = ptr::null_mut() };
        let Some(handle) = (unsafe { sfg.as_ref() }) else {
            set_error("`sfg` is null");
            return HfStatus::NullPointer;
        };
        let inputs = unsafe {
            (|| {
                let io = text(io, "io")?;
                let map = text(map, "map")?;
                let lib = if lib_json.is_null() {
                    None
                } else {
                    Some(text(lib_json, "lib_json")?)
                };
                Ok::<_, HfStatus>((io, map, lib))
            })()
        };
        let (io, map, lib) = match inputs {
            Ok(v) => v,
            Err(status) => return status,
        };
        let design = match Design::from_sfg(handle.sfg.clone(), io, map, lib) {
            Ok(d) => d,
            Err(e) => {
                set_error(e.to_string());
                return HfStatus::Parse;
            }
        };
        let opts = SynthOptions {
            latency: (latency_override >= 0).then_some(latency_override),
            horizon: None,
        };
        let outcome = match synthesize(&design, opts) {
            Ok(o) => o,
            Err(e) => {
                set_error(e.to_string());
                return HfStatus::Parse;
            }
        };
        let status = match outcome.class() {
            ExitClass::Ok => HfStatus::Ok,
            ExitClass::Timing => HfStatus::TimingInfeasible,
            ExitClass::MemoryConflict => HfStatus::MemoryConflict,
            ExitClass::InputError => HfStatus::Parse,
        };
        let result = match &outcome {
            Outcome::Scheduled(s) => HfResult {
                status,
                latency: s.schedule.latency,
                report_json: s.report.to_json(),
                schedule_json: s.schedule.to_json(),
                gantt: s.gantt(),
                diagnostic: String::new(),
            },
            failed => {
                set_error(failed.diagnostic());
                HfResult {
                    status,
                    latency: -1,
                    report_json: String::new(),
                    schedule_json: String::new(),
                    gantt: String::new(),
                    diagnostic: failed.diagnostic(),
                }
            }
        };
        unsafe { store(out, result) };
        status
    })
}

/// Status the result was produced with; `NullPointer` for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hf_result_status(result: *const HfResult) -> HfStatus {
    result.as_ref().map_or(HfStatus::NullPointer, |r| r.status)
}

/// Schedule latency in cycles, or -1 when nothing was scheduled.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hf_result_latency(result: *const HfResult) -> i64 {
    result.as_ref().map_or(-1, |r| r.latency)
}

/// Architecture report as JSON; empty when nothing was scheduled. Free with
/// [`hf_string_free`].
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hf_result_report_json(result: *const HfResult) -> *mut c_char {
    result.as_ref().map_or(ptr::null_mut(), |r| into_c(&r.report_json))
}

/// Full schedule as JSON. Free with [`hf_string_free`].
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hf_result_schedule_json(result: *const HfResult) -> *mut c_char {
    result.as_ref().map_or(ptr::null_mut(), |r| into_c(&r.schedule_json))
}

/// Text Gantt trace. Free with [`hf_string_free`].
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hf_result_gantt(result: *const HfResult) -> *mut c_char {
    result.as_ref().map_or(ptr::null_mut(), |r| into_c(&r.gantt))
}

/// Failure explanation; empty on success. Free with [`hf_string_free`].
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hf_result_diagnostic(result: *const HfResult) -> *mut c_char {
    result.as_ref().map_or(ptr::null_mut(), |r| into_c(&r.diagnostic))
}

/// # Safety
/// `result` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hf_result_free(result: *mut HfResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
