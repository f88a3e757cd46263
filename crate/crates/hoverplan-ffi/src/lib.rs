//! C ABI over the planner: opaque handles, integer status codes, and a
//! thread-local last-error message. Every entry point catches panics and
//! reports them as a status instead of unwinding across the boundary.

// Pointer contracts live in each function's doc comment, which cbindgen
// copies into the C header; a Rust-style `# Safety` section would only add
// noise there.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use libc::{c_char, size_t};

use hoverplan::config::{parse_config, ExperimentConfig};
use hoverplan::experiment::{export_results, run_experiment, RunRecord};
use hoverplan::Scenario;

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoverplanStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input was rejected; hoverplan_last_error has the reason.
    InvalidArgument = 3,
    /// The operation failed; hoverplan_last_error has the reason.
    RuntimeError = 4,
    /// An index argument was out of range.
    OutOfRange = 5,
    /// The library caught a panic; hoverplan_last_error has the message.
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let clean: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(clean).expect("NULs removed"));
}

fn fail(status: HoverplanStatus, msg: &str) -> HoverplanStatus {
    set_last_error(msg);
    status
}

/// Run `body` with panics converted to `HoverplanStatus::Panic`.
fn guarded(body: impl FnOnce() -> HoverplanStatus) -> HoverplanStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic with non-string payload".to_string());
            fail(HoverplanStatus::Panic, &msg)
        }
    }
}

/// Parsed experiment configuration (opaque).
pub struct HoverplanConfig {
    config: ExperimentConfig,
}

/// Finished experiment: run records plus everything exports need (opaque).
pub struct HoverplanResults {
    records: Vec<RunRecord>,
    scenario: Scenario,
    config_hash: String,
    placement_seed: u64,
}

unsafe fn cstr_arg<'a>(ptr: *const c_char) -> Result<&'a str, HoverplanStatus> {
    if ptr.is_null() {
        return Err(HoverplanStatus::NullArgument);
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| HoverplanStatus::InvalidUtf8)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hoverplan_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `cap` bytes). Returns the full length including the NUL, so a
/// return value larger than `cap` means the copy was truncated.
#[no_mangle]
pub unsafe extern "C" fn hoverplan_last_error(buf: *mut c_char, cap: size_t) -> size_t {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap);
            unsafe { std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n) };
            unsafe { *buf.add(n - 1) = 0 };
        }
        bytes.len()
    })
}

/// Parse and validate a TOML configuration. On success `*out` owns a new
/// handle that must be released with hoverplan_config_free.
#[no_mangle]
pub unsafe extern "C" fn hoverplan_config_parse(
    toml_text: *const c_char,
    out: *mut *mut HoverplanConfig,
) -> HoverplanStatus {
    guarded(|| {
        if out.is_null() {
            return HoverplanStatus::NullArgument;
        }
        let text = match unsafe { cstr_arg(toml_text) } {
            Ok(t) => t,
            Err(status) => return fail(status, "toml_text is not a valid string"),
        };
        match parse_config(text) {
            Ok(config) => {
                unsafe { *out = Box::into_raw(Box::new(HoverplanConfig { config })) };
                HoverplanStatus::Ok
            }
            Err(e) => fail(HoverplanStatus::InvalidArgument, &e.to_string()),
        }
    })
}

/// Create the default configuration (the reference experiment).
#[no_mangle]
pub unsafe extern "C" fn hoverplan_config_default(out: *mut *mut HoverplanConfig) -> HoverplanStatus {
    guarded(|| {
        if out.is_null() {
            return HoverplanStatus::NullArgument;
        }
        match parse_config("") {
            Ok(config) => {
                unsafe { *out = Box::into_raw(Box::new(HoverplanConfig { config })) };
                HoverplanStatus::Ok
            }
            Err(e) => fail(HoverplanStatus::RuntimeError, &e.to_string()),
        }
    })
}

/// Override the master seed of a parsed configuration.
#[no_mangle]
pub unsafe extern "C" fn hoverplan_config_set_master_seed(
    cfg: *mut HoverplanConfig,
    master_seed: u64,
) -> HoverplanStatus {
    guarded(|| {
        let Some(cfg) = (unsafe { cfg.as_mut() }) else {
            return HoverplanStatus::NullArgument;
        };
        cfg.config.experiment.master_seed = master_seed;
        HoverplanStatus::Ok
    })
}

/// Release a configuration handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn hoverplan_config_free(cfg: *mut HoverplanConfig) {
    if !cfg.is_null() {
        drop(unsafe { Box::from_raw(cfg) });
    }
}

/// Run the configured experiment. On success `*out` owns a new results
/// handle that must be released with hoverplan_results_free.
#[no_mangle]
pub unsafe extern "C" fn hoverplan_run(
    cfg: *const HoverplanConfig,
    out: *mut *mut HoverplanResults,
) -> HoverplanStatus {
    guarded(|| {
        if out.is_null() {
            return HoverplanStatus::NullArgument;
        }
        let Some(handle) = (unsafe { cfg.as_ref() }) else {
            return HoverplanStatus::NullArgument;
        };
        let config = &handle.config;
        let build = || -> hoverplan::error::Result<HoverplanResults> {
            let scenario = config.build_scenario()?;
            let algorithms = config.algo_configs()?;
            let records = run_experiment(
                &scenario,
                &algorithms,
                config.experiment.runs,
                config.experiment.master_seed,
            )?;
            Ok(HoverplanResults {
                records,
                scenario,
                config_hash: config.config_hash()?,
                placement_seed: config.scenario.placement_seed,
            })
        };
        match build() {
            Ok(results) => {
                unsafe { *out = Box::into_raw(Box::new(results)) };
                HoverplanStatus::Ok
            }
            Err(e) => fail(HoverplanStatus::RuntimeError, &e.to_string()),
        }
    })
}

/// Release a results handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn hoverplan_results_free(res: *mut HoverplanResults) {
    if !res.is_null() {
        drop(unsafe { Box::from_raw(res) });
    }
}

/// Number of run records (algorithms x runs).
#[no_mangle]
pub unsafe extern "C" fn hoverplan_results_run_count(
    res: *const HoverplanResults,
    out: *mut size_t,
) -> HoverplanStatus {
    guarded(|| {
        let (Some(res), Some(out)) = (unsafe { res.as_ref() }, unsafe { out.as_mut() }) else {
            return HoverplanStatus::NullArgument;
        };
        *out = res.records.len();
        HoverplanStatus::Ok
    })
}

/// Copy record `index`'s algorithm label into `buf` (NUL-terminated,
/// truncated to `cap`). Returns the status; the label is never longer than
/// 256 bytes.
#[no_mangle]
pub unsafe extern "C" fn hoverplan_results_algorithm(
    res: *const HoverplanResults,
    index: size_t,
    buf: *mut c_char,
    cap: size_t,
) -> HoverplanStatus {
    guarded(|| {
        let Some(res) = (unsafe { res.as_ref() }) else {
            return HoverplanStatus::NullArgument;
        };
        if buf.is_null() || cap == 0 {
            return HoverplanStatus::NullArgument;
        }
        let Some(rec) = res.records.get(index) else {
            return HoverplanStatus::OutOfRange;
        };
        let bytes = rec.algorithm.as_bytes();
        let n = bytes.len().min(cap - 1);
        unsafe { std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n) };
        unsafe { *buf.add(n) = 0 };
        HoverplanStatus::Ok
    })
}

/// Run number (1-based) and per-run seed of record `index`.
#[no_mangle]
pub unsafe extern "C" fn hoverplan_results_run_info(
    res: *const HoverplanResults,
    index: size_t,
    out_run: *mut u32,
    out_seed: *mut u64,
) -> HoverplanStatus {
    guarded(|| {
        let Some(res) = (unsafe { res.as_ref() }) else {
            return HoverplanStatus::NullArgument;
        };
        if out_run.is_null() || out_seed.is_null() {
            return HoverplanStatus::NullArgument;
        }
        let Some(rec) = res.records.get(index) else {
            return HoverplanStatus::OutOfRange;
        };
        unsafe {
            *out_run = rec.run as u32;
            *out_seed = rec.seed;
        }
        HoverplanStatus::Ok
    })
}

/// Number of archive solutions in record `index`.
#[no_mangle]
pub unsafe extern "C" fn hoverplan_results_front_len(
    res: *const HoverplanResults,
    index: size_t,
    out: *mut size_t,
) -> HoverplanStatus {
    guarded(|| {
        let Some(res) = (unsafe { res.as_ref() }) else {
            return HoverplanStatus::NullArgument;
        };
        if out.is_null() {
            return HoverplanStatus::NullArgument;
        }
        let Some(rec) = res.records.get(index) else {
            return HoverplanStatus::OutOfRange;
        };
        unsafe { *out = rec.output.archive.len() };
        HoverplanStatus::Ok
    })
}

/// Copy record `index`'s archive objectives into `buf` as consecutive
/// [rate_bps, device_energy_J, uav_energy_J] triples. `cap` counts f64
/// slots; `*written` receives the number of slots filled. Fails with
/// OutOfRange when the buffer cannot hold the whole front.
#[no_mangle]
pub unsafe extern "C" fn hoverplan_results_objectives(
    res: *const HoverplanResults,
    index: size_t,
    buf: *mut f64,
    cap: size_t,
    written: *mut size_t,
) -> HoverplanStatus {
    guarded(|| {
        let Some(res) = (unsafe { res.as_ref() }) else {
            return HoverplanStatus::NullArgument;
        };
        if buf.is_null() || written.is_null() {
            return HoverplanStatus::NullArgument;
        }
        let Some(rec) = res.records.get(index) else {
            return HoverplanStatus::OutOfRange;
        };
        let objs = rec.output.archive.objectives();
        let needed = objs.len() * 3;
        if cap < needed {
            return fail(
                HoverplanStatus::OutOfRange,
                &format!("buffer holds {cap} f64 slots, front needs {needed}"),
            );
        }
        for (i, o) in objs.iter().enumerate() {
            unsafe {
                *buf.add(3 * i) = o.min_rate_bps();
                *buf.add(3 * i + 1) = o.device_energy_j;
                *buf.add(3 * i + 2) = o.uav_energy_j;
            }
        }
        unsafe { *written = needed };
        HoverplanStatus::Ok
    })
}

/// Write the full result-file set (summary, archives, scatter, trajectories,
/// segments) into `out_dir`, creating it if needed.
#[no_mangle]
pub unsafe extern "C" fn hoverplan_results_export(
    res: *const HoverplanResults,
    out_dir: *const c_char,
) -> HoverplanStatus {
    guarded(|| {
        let Some(res) = (unsafe { res.as_ref() }) else {
            return HoverplanStatus::NullArgument;
        };
        let dir = match unsafe { cstr_arg(out_dir) } {
            Ok(d) => d,
            Err(status) => return fail(status, "out_dir is not a valid string"),
        };
        match export_results(&res.records, &res.scenario, &res.config_hash, res.placement_seed, Path::new(dir)) {
            Ok(()) => HoverplanStatus::Ok,
            Err(e) => fail(HoverplanStatus::RuntimeError, &e.to_string()),
        }
    })
}
