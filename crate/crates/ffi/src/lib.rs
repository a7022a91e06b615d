//! C ABI over the `pgbrrt` planners.
//!
//! Every fallible function returns a [`PgbStatus`]. On anything other than
//! `PGB_STATUS_OK` the message is available from [`pgb_last_error_message`]
//! on the same thread. Handles are opaque and must be released with their
//! matching `_free` function.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, size_t};
use pgbrrt::bench::RunDocument;
use pgbrrt::defaults::{ConfigOverrides, Defaults};
use pgbrrt::environment::ScenarioDocument;
use pgbrrt::planner::{run_planner, PlannerKind};
use pgbrrt::{Environment, PlanError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgbStatus {
    Ok = 0,
    /// The run finished without a solution. The run handle is still produced.
    NoPath = 1,
    NullPointer = 2,
    InvalidArgument = 3,
    DimensionMismatch = 4,
    DegenerateEnvironment = 5,
    Parse = 6,
    Validation = 7,
    Io = 8,
    BufferTooSmall = 9,
    Internal = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgbPlanner {
    RrtStar = 0,
    PRrtStar = 1,
    BRrtStar = 2,
    IbRrtStar = 3,
    PbRrtStar = 4,
    PibRrtStar = 5,
}

impl From<PgbPlanner> for PlannerKind {
    fn from(p: PgbPlanner) -> Self {
        match p {
            PgbPlanner::RrtStar => PlannerKind::RrtStar,
            PgbPlanner::PRrtStar => PlannerKind::PRrtStar,
            PgbPlanner::BRrtStar => PlannerKind::BRrtStar,
            PgbPlanner::IbRrtStar => PlannerKind::IbRrtStar,
            PgbPlanner::PbRrtStar => PlannerKind::PbRrtStar,
            PgbPlanner::PibRrtStar => PlannerKind::PibRrtStar,
        }
    }
}

/// Run options. Zero (or a negative `n_steps`) keeps the library default for
/// that field. Start from [`pgb_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PgbOptions {
    pub seed: u64,
    pub max_iterations: u64,
    pub gamma: f64,
    pub eps_steer: f64,
    pub k_p: f64,
    pub eps_pot: f64,
    pub d_obs_star: f64,
    pub n_steps: i32,
    pub stop_on_first: bool,
}

/// A validated scenario.
pub struct PgbEnvironment {
    env: Environment,
}

/// The outcome of one planner run.
pub struct PgbRun {
    doc: RunDocument,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    let c = CString::new(msg).expect("interior nul removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(e: &PlanError) -> PgbStatus {
    match e {
        PlanError::InvalidArgument(_) => PgbStatus::InvalidArgument,
        PlanError::DimensionMismatch { .. } => PgbStatus::DimensionMismatch,
        PlanError::DegenerateEnvironment { .. } => PgbStatus::DegenerateEnvironment,
        PlanError::EmptyTree => PgbStatus::Internal,
        PlanError::Parse(_) => PgbStatus::Parse,
        PlanError::Validation(_) => PgbStatus::Validation,
        PlanError::Io { .. } => PgbStatus::Io,
    }
}

fn fail(status: PgbStatus, msg: impl Into<String>) -> PgbStatus {
    set_error(msg);
    status
}

/// Runs `f`, mapping errors and panics to a status and the last-error slot.
fn guard(f: impl FnOnce() -> Result<PgbStatus, (PgbStatus, String)>) -> PgbStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, msg))) => fail(status, msg),
        Err(_) => fail(PgbStatus::Internal, "panic inside pgbrrt"),
    }
}

fn lib_err(e: PlanError) -> (PgbStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_err(name: &str) -> (PgbStatus, String) {
    (PgbStatus::NullPointer, format!("`{name}` is null"))
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, (PgbStatus, String)> {
    if p.is_null() {
        return Err(null_err(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (PgbStatus::InvalidArgument, format!("`{name}` is not UTF-8")))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn pgb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failing call on this thread, or NULL. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn pgb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn pgb_options_default() -> PgbOptions {
    PgbOptions {
        seed: 0,
        max_iterations: 0,
        gamma: 0.0,
        eps_steer: 0.0,
        k_p: 0.0,
        eps_pot: 0.0,
        d_obs_star: 0.0,
        n_steps: -1,
        stop_on_first: false,
    }
}

/// Parses a scenario from a JSON string.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pgb_environment_from_json(
    json: *const c_char,
    out: *mut *mut PgbEnvironment,
) -> PgbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let text = read_str(json, "json")?;
        let env = Environment::load_scenario(text).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(PgbEnvironment { env }));
        Ok(PgbStatus::Ok)
    })
}

/// Loads a scenario file.
///
/// # Safety
/// `path` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pgb_environment_from_file(
    path: *const c_char,
    out: *mut *mut PgbEnvironment,
) -> PgbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let path = read_str(path, "path")?;
        let env = Environment::load_scenario_file(path).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(PgbEnvironment { env }));
        Ok(PgbStatus::Ok)
    })
}

/// # Safety
/// `env` must be NULL or a handle from `pgb_environment_from_*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pgb_environment_free(env: *mut PgbEnvironment) {
    if !env.is_null() {
        drop(Box::from_raw(env));
    }
}

/// Configuration-space dimension, or 0 for a NULL handle.
///
/// # Safety
/// `env` must be NULL or a live environment handle.
#[no_mangle]
pub unsafe extern "C" fn pgb_environment_dimension(env: *const PgbEnvironment) -> size_t {
    env.as_ref().map_or(0, |e| e.env.dim())
}

fn overrides(o: &PgbOptions) -> ConfigOverrides {
    let pos = |v: f64| (v != 0.0).then_some(v);
    ConfigOverrides {
        gamma: pos(o.gamma),
        eps_steer: pos(o.eps_steer),
        max_iterations: (o.max_iterations > 0).then_some(o.max_iterations),
        k_p: pos(o.k_p),
        eps_pot: pos(o.eps_pot),
        n_steps: u32::try_from(o.n_steps).ok(),
        d_obs_star: pos(o.d_obs_star),
        stop_on_first: Some(o.stop_on_first),
        ..Default::default()
    }
}

/// Runs one planner. Defaults come from `PGBRRT_DEFAULTS` when set.
/// Returns `PGB_STATUS_NO_PATH` with a valid `*out` when no solution was
/// found. `options` may be NULL.
///
/// # Safety
/// `env` must be a live environment handle, `options` NULL or readable,
/// and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pgb_plan(
    env: *const PgbEnvironment,
    planner: PgbPlanner,
    options: *const PgbOptions,
    out: *mut *mut PgbRun,
) -> PgbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let env = &env.as_ref().ok_or_else(|| null_err("env"))?.env;
        let options = options
            .as_ref()
            .copied()
            .unwrap_or_else(|| pgb_options_default());
        let defaults = Defaults::load().map_err(lib_err)?;
        let cfg = defaults
            .resolve(planner.into(), env, options.seed, &overrides(&options))
            .map_err(lib_err)?;
        let result = run_planner(env, &cfg).map_err(lib_err)?;
        let failed = result.failed;
        let doc = RunDocument {
            version: pgbrrt::VERSION.to_string(),
            scenario: ScenarioDocument::from(env),
            config: cfg,
            result,
        };
        *out = Box::into_raw(Box::new(PgbRun { doc }));
        if failed {
            set_error("no path to the goal region was found");
            Ok(PgbStatus::NoPath)
        } else {
            Ok(PgbStatus::Ok)
        }
    })
}

/// # Safety
/// `run` must be NULL or a handle from [`pgb_plan`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pgb_run_free(run: *mut PgbRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Best path cost.
///
/// # Safety
/// `run` must be a live run handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pgb_run_cost(run: *const PgbRun, out: *mut f64) -> PgbStatus {
    guard(|| {
        let run = run.as_ref().ok_or_else(|| null_err("run"))?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        match run.doc.result.best_cost {
            Some(c) => {
                *out = c;
                Ok(PgbStatus::Ok)
            }
            None => Err((PgbStatus::NoPath, "run has no solution".into())),
        }
    })
}

/// Number of waypoints on the best path, 0 when there is none.
///
/// # Safety
/// `run` must be NULL or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn pgb_run_path_len(run: *const PgbRun) -> size_t {
    run.as_ref()
        .and_then(|r| r.doc.result.best_path.as_ref())
        .map_or(0, Vec::len)
}

/// Copies the best path into `buf` as `path_len * dimension` doubles,
/// waypoint-major. `len` is the capacity of `buf` in doubles.
///
/// # Safety
/// `run` must be a live run handle and `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn pgb_run_path_copy(
    run: *const PgbRun,
    buf: *mut f64,
    len: size_t,
) -> PgbStatus {
    guard(|| {
        let run = run.as_ref().ok_or_else(|| null_err("run"))?;
        let path = run
            .doc
            .result
            .best_path
            .as_ref()
            .ok_or_else(|| (PgbStatus::NoPath, "run has no solution".to_string()))?;
        let d = run.doc.scenario.dimension;
        let need = path.len() * d;
        if len < need {
            return Err((
                PgbStatus::BufferTooSmall,
                format!("buffer holds {len} doubles, path needs {need}"),
            ));
        }
        if buf.is_null() {
            return Err(null_err("buf"));
        }
        let dst = std::slice::from_raw_parts_mut(buf, need);
        for (chunk, z) in dst.chunks_exact_mut(d).zip(path) {
            chunk.copy_from_slice(z.coords());
        }
        Ok(PgbStatus::Ok)
    })
}

/// Iterations executed.
///
/// # Safety
/// `run` must be NULL or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn pgb_run_iterations(run: *const PgbRun) -> u64 {
    run.as_ref().map_or(0, |r| r.doc.result.total_iterations)
}

/// Iteration of the first solution, 0 when there is none.
///
/// # Safety
/// `run` must be NULL or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn pgb_run_first_solution_iteration(run: *const PgbRun) -> u64 {
    run.as_ref()
        .and_then(|r| r.doc.result.first_solution_iteration)
        .unwrap_or(0)
}

/// Rewires per iteration.
///
/// # Safety
/// `run` must be NULL or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn pgb_run_theta(run: *const PgbRun) -> f64 {
    run.as_ref().map_or(0.0, |r| r.doc.result.theta)
}

/// The run document (scenario, config and result) as JSON, the same as the
/// CLI `plan --out` file. Free with [`pgb_string_free`]. NULL on error.
///
/// # Safety
/// `run` must be a live run handle.
#[no_mangle]
pub unsafe extern "C" fn pgb_run_to_json(run: *const PgbRun) -> *mut c_char {
    clear_error();
    let Some(run) = run.as_ref() else {
        fail(PgbStatus::NullPointer, "`run` is null");
        return ptr::null_mut();
    };
    match catch_unwind(AssertUnwindSafe(|| run.doc.to_json())) {
        Ok(s) => CString::new(s).map_or(ptr::null_mut(), CString::into_raw),
        Err(_) => {
            fail(PgbStatus::Internal, "panic inside pgbrrt");
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pgb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
