//! C ABI for the `pwlham` solver.
//!
//! Systems and cycles are opaque handles created and released by this library.
//! Every fallible call returns a [`PwlStatus`]; on failure a description is
//! available from [`pwl_last_error`] on the same thread. Strings returned
//! through `char **` out-parameters must be released with [`pwl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pwlham::closure::{solve, ClosureOutcome};
use pwlham::cycle::{find_limit_cycle, CycleCertificate};
use pwlham::io::{parse_system, to_pretty_json};
use pwlham::poincare::{fixed_point, return_map_with_time, IntegratorOptions};
use pwlham::{InputError, LinearHamiltonianField, ModelError, PiecewiseSystem, PoincareError};

/// Opaque piecewise system.
pub struct PwlSystem {
    inner: PiecewiseSystem,
}

/// Opaque certified limit cycle.
pub struct PwlCycle {
    inner: CycleCertificate,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PwlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    DegenerateField = 3,
    NoCycle = 4,
    NumericalFailure = 5,
    LayoutMismatch = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PwlClosureKind {
    NoSolution = 0,
    UniqueCandidate = 1,
    Continuum = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("nul bytes removed"));
}

fn fail(status: PwlStatus, message: impl Into<String>) -> PwlStatus {
    set_error(message);
    status
}

/// Runs `f`, turning panics into [`PwlStatus::Panic`].
fn guard<F: FnOnce() -> PwlStatus>(f: F) -> PwlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => {
            if status == PwlStatus::Ok {
                set_error("");
            }
            status
        }
        Err(_) => fail(PwlStatus::Panic, "internal panic"),
    }
}

unsafe fn system_ref<'a>(system: *const PwlSystem) -> Result<&'a PiecewiseSystem, PwlStatus> {
    system
        .as_ref()
        .map(|s| &s.inner)
        .ok_or_else(|| fail(PwlStatus::NullPointer, "system handle is null"))
}

unsafe fn cycle_ref<'a>(cycle: *const PwlCycle) -> Result<&'a CycleCertificate, PwlStatus> {
    cycle
        .as_ref()
        .map(|c| &c.inner)
        .ok_or_else(|| fail(PwlStatus::NullPointer, "cycle handle is null"))
}

fn model_status(e: &ModelError) -> PwlStatus {
    match e {
        ModelError::DegenerateField { .. } => PwlStatus::DegenerateField,
        _ => PwlStatus::InvalidInput,
    }
}

fn poincare_status(e: &PoincareError) -> PwlStatus {
    match e {
        PoincareError::InvalidSettings(_) | PoincareError::BadBracket { .. } => {
            PwlStatus::InvalidInput
        }
        _ => PwlStatus::NumericalFailure,
    }
}

fn write_string(out: *mut *mut c_char, text: String) -> PwlStatus {
    let text = CString::new(text).expect("JSON has no nul bytes");
    unsafe { *out = text.into_raw() };
    PwlStatus::Ok
}

fn store_system(out: *mut *mut PwlSystem, inner: PiecewiseSystem) -> PwlStatus {
    unsafe { *out = Box::into_raw(Box::new(PwlSystem { inner })) };
    PwlStatus::Ok
}

/// Parses a JSON system definition.
///
/// # Safety
/// `json` must be a valid nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pwl_system_from_json(
    json: *const c_char,
    out: *mut *mut PwlSystem,
) -> PwlStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return fail(PwlStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(PwlStatus::InvalidInput, "input is not UTF-8");
        };
        match parse_system(text) {
            Ok(doc) => store_system(out, doc.system),
            Err(InputError::Model { field, source }) => {
                fail(model_status(&source), format!("{field}: {source}"))
            }
            Err(e) => fail(PwlStatus::InvalidInput, e.to_string()),
        }
    })
}

unsafe fn fields_from(
    coefficients: *const f64,
    zones: usize,
) -> Result<Vec<LinearHamiltonianField>, PwlStatus> {
    if coefficients.is_null() {
        return Err(fail(PwlStatus::NullPointer, "coefficient array is null"));
    }
    let c = std::slice::from_raw_parts(coefficients, 5 * zones);
    c.chunks_exact(5)
        .enumerate()
        .map(|(i, z)| {
            LinearHamiltonianField::new(z[0], z[1], z[2], z[3], z[4])
                .map_err(|e| fail(model_status(&e), format!("zone {i}: {e}")))
        })
        .collect()
}

/// Builds a two-zone system from 10 coefficients: `a, b, c, alpha, beta` for
/// the left zone, then for the right zone.
///
/// # Safety
/// `coefficients` must point to 10 doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pwl_system_new_two_zone(
    coefficients: *const f64,
    out: *mut *mut PwlSystem,
) -> PwlStatus {
    guard(|| {
        if out.is_null() {
            return fail(PwlStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        match fields_from(coefficients, 2) {
            Ok(f) => store_system(out, PiecewiseSystem::two_zone(f[0], f[1])),
            Err(status) => status,
        }
    })
}

/// Builds a three-zone system from 15 coefficients, zones left to right.
///
/// # Safety
/// `coefficients` must point to 15 doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pwl_system_new_three_zone(
    coefficients: *const f64,
    out: *mut *mut PwlSystem,
) -> PwlStatus {
    guard(|| {
        if out.is_null() {
            return fail(PwlStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        match fields_from(coefficients, 3) {
            Ok(f) => store_system(out, PiecewiseSystem::three_zone(f[0], f[1], f[2])),
            Err(status) => status,
        }
    })
}

/// # Safety
/// `system` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pwl_system_free(system: *mut PwlSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// # Safety
/// `system` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pwl_system_is_continuous(
    system: *const PwlSystem,
    out: *mut bool,
) -> PwlStatus {
    guard(|| {
        let sys = match system_ref(system) {
            Ok(s) => s,
            Err(status) => return status,
        };
        if out.is_null() {
            return fail(PwlStatus::NullPointer, "out is null");
        }
        *out = sys.is_continuous();
        PwlStatus::Ok
    })
}

/// Singularity types left to right, e.g. `"SCC"`. Free with [`pwl_string_free`].
///
/// # Safety
/// `system` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pwl_system_configuration(
    system: *const PwlSystem,
    out: *mut *mut c_char,
) -> PwlStatus {
    guard(|| {
        let sys = match system_ref(system) {
            Ok(s) => s,
            Err(status) => return status,
        };
        if out.is_null() {
            return fail(PwlStatus::NullPointer, "out is null");
        }
        write_string(out, sys.configuration())
    })
}

/// Solves the closure equations. `ordinates` receives `y0, y1, y2, y3` when
/// the kind is a unique candidate and is left untouched otherwise.
///
/// # Safety
/// `system` and `kind` must be valid; `ordinates` must hold 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn pwl_solve(
    system: *const PwlSystem,
    kind: *mut PwlClosureKind,
    ordinates: *mut f64,
) -> PwlStatus {
    guard(|| {
        let sys = match system_ref(system) {
            Ok(s) => s,
            Err(status) => return status,
        };
        if kind.is_null() || ordinates.is_null() {
            return fail(PwlStatus::NullPointer, "null argument");
        }
        *kind = match solve(sys) {
            ClosureOutcome::NoSolution { .. } => PwlClosureKind::NoSolution,
            ClosureOutcome::Continuum { .. } => PwlClosureKind::Continuum,
            ClosureOutcome::UniqueCycleCandidate { ordinates: ys, .. } => {
                std::slice::from_raw_parts_mut(ordinates, 4).copy_from_slice(&ys);
                PwlClosureKind::UniqueCandidate
            }
        };
        PwlStatus::Ok
    })
}

/// Finds and certifies the crossing limit cycle. Returns
/// [`PwlStatus::NoCycle`] with `*out` null when there is none.
///
/// # Safety
/// `system` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pwl_find_cycle(
    system: *const PwlSystem,
    out: *mut *mut PwlCycle,
) -> PwlStatus {
    guard(|| {
        let sys = match system_ref(system) {
            Ok(s) => s,
            Err(status) => return status,
        };
        if out.is_null() {
            return fail(PwlStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        match find_limit_cycle(sys) {
            Some(inner) => {
                *out = Box::into_raw(Box::new(PwlCycle { inner }));
                PwlStatus::Ok
            }
            None => fail(PwlStatus::NoCycle, "no crossing limit cycle"),
        }
    })
}

/// # Safety
/// `cycle` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pwl_cycle_free(cycle: *mut PwlCycle) {
    if !cycle.is_null() {
        drop(Box::from_raw(cycle));
    }
}

unsafe fn copy4(
    cycle: *const PwlCycle,
    out: *mut f64,
    pick: fn(&CycleCertificate) -> [f64; 4],
) -> PwlStatus {
    guard(|| {
        let c = match cycle_ref(cycle) {
            Ok(c) => c,
            Err(status) => return status,
        };
        if out.is_null() {
            return fail(PwlStatus::NullPointer, "out is null");
        }
        std::slice::from_raw_parts_mut(out, 4).copy_from_slice(&pick(c));
        PwlStatus::Ok
    })
}

/// `y0, y1, y2, y3`.
///
/// # Safety
/// `cycle` must be valid; `out` must hold 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn pwl_cycle_ordinates(cycle: *const PwlCycle, out: *mut f64) -> PwlStatus {
    copy4(cycle, out, |c| c.ordinates)
}

/// Flight times in the right, center, left and center zones.
///
/// # Safety
/// `cycle` must be valid; `out` must hold 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn pwl_cycle_flight_times(
    cycle: *const PwlCycle,
    out: *mut f64,
) -> PwlStatus {
    copy4(cycle, out, |c| c.flight_times)
}

/// # Safety
/// `cycle` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pwl_cycle_period(cycle: *const PwlCycle, out: *mut f64) -> PwlStatus {
    guard(|| {
        let c = match cycle_ref(cycle) {
            Ok(c) => c,
            Err(status) => return status,
        };
        if out.is_null() {
            return fail(PwlStatus::NullPointer, "out is null");
        }
        *out = c.period;
        PwlStatus::Ok
    })
}

/// Full certificate as JSON. Free with [`pwl_string_free`].
///
/// # Safety
/// `cycle` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pwl_cycle_to_json(
    cycle: *const PwlCycle,
    out: *mut *mut c_char,
) -> PwlStatus {
    guard(|| {
        let c = match cycle_ref(cycle) {
            Ok(c) => c,
            Err(status) => return status,
        };
        if out.is_null() {
            return fail(PwlStatus::NullPointer, "out is null");
        }
        write_string(out, to_pretty_json(c))
    })
}

fn options(tol: f64) -> IntegratorOptions {
    IntegratorOptions {
        tol,
        ..IntegratorOptions::default()
    }
}

/// First return to `x = 1` of the orbit leaving `(1, y)` into the right zone,
/// computed numerically with accuracy target `tol`.
///
/// # Safety
/// `system`, `out_y` and `out_time` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pwl_return_map(
    system: *const PwlSystem,
    y: f64,
    tol: f64,
    out_y: *mut f64,
    out_time: *mut f64,
) -> PwlStatus {
    guard(|| {
        let sys = match system_ref(system) {
            Ok(s) => s,
            Err(status) => return status,
        };
        if out_y.is_null() || out_time.is_null() {
            return fail(PwlStatus::NullPointer, "null argument");
        }
        match return_map_with_time(sys, y, &options(tol)) {
            Ok((py, t)) => {
                *out_y = py;
                *out_time = t;
                PwlStatus::Ok
            }
            Err(e) => fail(poincare_status(&e), e.to_string()),
        }
    })
}

/// Fixed point of the numerical return map in `[lo, hi]`.
///
/// # Safety
/// `system`, `out_y` and `out_period` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pwl_fixed_point(
    system: *const PwlSystem,
    lo: f64,
    hi: f64,
    tol: f64,
    out_y: *mut f64,
    out_period: *mut f64,
) -> PwlStatus {
    guard(|| {
        let sys = match system_ref(system) {
            Ok(s) => s,
            Err(status) => return status,
        };
        if out_y.is_null() || out_period.is_null() {
            return fail(PwlStatus::NullPointer, "null argument");
        }
        if sys.layout() != pwlham::ZoneLayout::ThreeZone {
            return fail(
                PwlStatus::LayoutMismatch,
                "return map needs a three-zone system",
            );
        }
        match fixed_point(sys, lo, hi, 1e-10, &options(tol)) {
            Ok(fp) => {
                *out_y = fp.y;
                *out_period = fp.period;
                PwlStatus::Ok
            }
            Err(e) => fail(poincare_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `s` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pwl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Description of the last failure on this thread; empty after a success.
/// The pointer stays valid until the next call into this library on the same
/// thread.
#[no_mangle]
pub extern "C" fn pwl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
