//! C interface to `faultlattice`.
//!
//! Objects are opaque handles created by `fl_*` constructors and released by
//! the matching `*_free`. Every fallible call returns an [`FlStatus`]; on
//! failure [`fl_last_error_message`] describes the error for the calling
//! thread. Strings returned through out-parameters are freed with
//! [`fl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use faultlattice::lattice::{sample_grid, LatticeConfig, OccupancyGrid, VertexId};
use faultlattice::pipeline::{run_pipeline, PipelineOutput};
use faultlattice::quantum::{contract_to_hexagonal, graph_state_from_grid, verify_concentration, GraphState, MeasurementRecord};
use faultlattice::stats::{crossing_probability, gamma_epsilon, max_disjoint_crossings, BoundParams};
use faultlattice::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlStatus {
    Ok = 0,
    InvalidArgument = 1,
    /// The lattice does not have enough crossings for the concentration.
    NotApplicable = 2,
    InternalError = 3,
    NullPointer = 4,
}

/// An occupancy grid.
pub struct FlGrid {
    grid: OccupancyGrid,
}

/// The result of a full concentration: classical stage plus the contracted
/// graph state and measurement record.
pub struct FlConcentration {
    output: PipelineOutput,
    state: GraphState,
    record: MeasurementRecord,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: FlStatus, message: impl Into<String>) -> FlStatus {
    set_error(message);
    status
}

fn from_error(e: Error) -> FlStatus {
    let status = match &e {
        Error::NotApplicable(_) | Error::NoCrossing => FlStatus::NotApplicable,
        e if e.is_internal() => FlStatus::InternalError,
        _ => FlStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> FlStatus) -> FlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(FlStatus::InternalError, "panic inside faultlattice"),
    }
}

fn write_string(text: String, out: *mut *mut c_char) -> FlStatus {
    match CString::new(text) {
        Ok(s) => {
            // SAFETY: callers check `out` for null first
            unsafe { *out = s.into_raw() };
            FlStatus::Ok
        }
        Err(_) => fail(FlStatus::InternalError, "string contains a NUL byte"),
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Samples an `size x size` grid with occupation probability `p`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fl_grid_sample(size: usize, p: f64, seed: u64, out: *mut *mut FlGrid) -> FlStatus {
    if out.is_null() {
        return fail(FlStatus::NullPointer, "out is NULL");
    }
    guard(|| match LatticeConfig::new(size, p, seed) {
        Ok(config) => {
            *out = Box::into_raw(Box::new(FlGrid { grid: sample_grid(config) }));
            FlStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// Parses the text grid format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fl_grid_from_text(text: *const c_char, out: *mut *mut FlGrid) -> FlStatus {
    if text.is_null() || out.is_null() {
        return fail(FlStatus::NullPointer, "text or out is NULL");
    }
    guard(|| {
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            return fail(FlStatus::InvalidArgument, "grid text is not UTF-8");
        };
        match text.parse::<OccupancyGrid>() {
            Ok(grid) => {
                *out = Box::into_raw(Box::new(FlGrid { grid }));
                FlStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Serializes a grid to the text format.
///
/// # Safety
/// `grid` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fl_grid_to_text(grid: *const FlGrid, out: *mut *mut c_char) -> FlStatus {
    if grid.is_null() || out.is_null() {
        return fail(FlStatus::NullPointer, "grid or out is NULL");
    }
    guard(|| write_string((*grid).grid.to_text(), out))
}

/// # Safety
/// `grid` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn fl_grid_free(grid: *mut FlGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Side length, or 0 for NULL.
///
/// # Safety
/// `grid` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_grid_size(grid: *const FlGrid) -> usize {
    grid.as_ref().map_or(0, |g| g.grid.size())
}

/// Number of occupied sites, or 0 for NULL.
///
/// # Safety
/// `grid` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_grid_occupied_count(grid: *const FlGrid) -> usize {
    grid.as_ref().map_or(0, |g| g.grid.occupied_count())
}

/// Whether site `(row, col)` is occupied; row 0 is the bottom row.
///
/// # Safety
/// `grid` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fl_grid_is_occupied(grid: *const FlGrid, row: usize, col: usize, out: *mut bool) -> FlStatus {
    if grid.is_null() || out.is_null() {
        return fail(FlStatus::NullPointer, "grid or out is NULL");
    }
    let g = &(*grid).grid;
    if row >= g.size() || col >= g.size() {
        return fail(FlStatus::InvalidArgument, format!("site ({row}, {col}) outside a {0}x{0} grid", g.size()));
    }
    *out = g.is_occupied(VertexId::new(row, col));
    FlStatus::Ok
}

/// Runs the classical stage and the measurement contraction, with
/// measurement outcomes derived from `seed`.
///
/// # Safety
/// `grid` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fl_concentrate(grid: *const FlGrid, seed: u64, out: *mut *mut FlConcentration) -> FlStatus {
    if grid.is_null() || out.is_null() {
        return fail(FlStatus::NullPointer, "grid or out is NULL");
    }
    guard(|| {
        let grid = &(*grid).grid;
        let output = match run_pipeline(grid) {
            Ok(o) => o,
            Err(e) => return from_error(e),
        };
        match contract_to_hexagonal(graph_state_from_grid(grid), &output.subgraph, seed) {
            Ok((state, record)) => {
                *out = Box::into_raw(Box::new(FlConcentration { output, state, record }));
                FlStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Junction rows of the hexagonal lattice, or 0 for NULL.
///
/// # Safety
/// `c` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_concentration_rows(c: *const FlConcentration) -> usize {
    c.as_ref().map_or(0, |c| c.output.rows())
}

/// Junction columns of the hexagonal lattice, or 0 for NULL.
///
/// # Safety
/// `c` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_concentration_cols(c: *const FlConcentration) -> usize {
    c.as_ref().map_or(0, |c| c.output.cols())
}

/// Qubits left in the hexagonal graph state, or 0 for NULL.
///
/// # Safety
/// `c` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_concentration_qubit_count(c: *const FlConcentration) -> usize {
    c.as_ref().map_or(0, |c| c.state.graph().vertex_count())
}

/// Single-qubit measurements performed, or 0 for NULL.
///
/// # Safety
/// `c` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_concentration_measurement_count(c: *const FlConcentration) -> usize {
    c.as_ref().map_or(0, |c| c.record.len())
}

/// JSON with the identified subgraph, the final graph state and the
/// measurement record.
///
/// # Safety
/// `c` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fl_concentration_to_json(c: *const FlConcentration, out: *mut *mut c_char) -> FlStatus {
    if c.is_null() || out.is_null() {
        return fail(FlStatus::NullPointer, "concentration or out is NULL");
    }
    guard(|| {
        let c = &*c;
        let value = serde_json::json!({
            "subgraph": c.output.subgraph,
            "state": c.state,
            "measurements": c.record,
        });
        match serde_json::to_string(&value) {
            Ok(text) => write_string(text, out),
            Err(e) => fail(FlStatus::InternalError, e.to_string()),
        }
    })
}

/// # Safety
/// `c` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn fl_concentration_free(c: *mut FlConcentration) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Checks the concentration of `grid` against a stabilizer simulation.
/// Grids with more than 400 occupied sites are rejected.
///
/// # Safety
/// `grid` must be a live handle and `passed` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fl_verify(grid: *const FlGrid, seed: u64, passed: *mut bool) -> FlStatus {
    if grid.is_null() || passed.is_null() {
        return fail(FlStatus::NullPointer, "grid or passed is NULL");
    }
    guard(|| match verify_concentration(&(*grid).grid, seed) {
        Ok(ok) => {
            *passed = ok;
            FlStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// Maximum number of vertex-disjoint left-to-right crossings.
///
/// # Safety
/// `grid` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fl_max_disjoint_crossings(grid: *const FlGrid, out: *mut usize) -> FlStatus {
    if grid.is_null() || out.is_null() {
        return fail(FlStatus::NullPointer, "grid or out is NULL");
    }
    guard(|| {
        *out = max_disjoint_crossings(&(*grid).grid);
        FlStatus::Ok
    })
}

/// Monte Carlo estimate of the left-to-right crossing probability.
///
/// # Safety
/// `estimate` and `stderr` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fl_crossing_probability(
    size: usize,
    p: f64,
    trials: usize,
    seed: u64,
    estimate: *mut f64,
    stderr: *mut f64,
) -> FlStatus {
    if estimate.is_null() || stderr.is_null() {
        return fail(FlStatus::NullPointer, "estimate or stderr is NULL");
    }
    guard(|| match crossing_probability(size, p, trials, seed) {
        Ok(c) => {
            *estimate = c.estimate;
            *stderr = c.stderr;
            FlStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// `alpha - beta * ln(p / (p - p_c - eps))`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fl_gamma_epsilon(alpha: f64, beta: f64, p: f64, eps: f64, out: *mut f64) -> FlStatus {
    if out.is_null() {
        return fail(FlStatus::NullPointer, "out is NULL");
    }
    match gamma_epsilon(&BoundParams { alpha, beta, p, eps }) {
        Ok(g) => {
            *out = g;
            FlStatus::Ok
        }
        Err(e) => from_error(e),
    }
}
