//! C ABI over the pauli-geodesic solvers.
//!
//! The surface follows the usual opaque-handle pattern: callers create a
//! `PgPhases` from raw phase or diagonal-unitary data, run a minimizer to
//! obtain a `PgResult`, and read scalars or copy vectors out of it. Every
//! fallible call returns a [`PgStatus`]; on failure a thread-local message
//! is retained and can be fetched with [`pg_last_error`] until the next
//! failing call on the same thread.
//!
//! The C header is generated into `include/pauli_geodesic.h` at build
//! time. All pointers must refer to live allocations of the documented
//! length; handles are freed exactly once with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::slice;

use pauli_geodesic::{
    expand, geodesic_length, minimize_bnb_with, minimize_brute, minimize_f2_closed_form,
    rounding_result, BnbOptions, GeoError, GeodesicResult, LatticeOffset, Metric, PhaseVector,
};

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An argument was out of range or semantically invalid.
    InvalidArgument = 2,
    /// A buffer or vector had the wrong length.
    DimensionMismatch = 3,
    /// An input value was NaN or infinite.
    NonFinite = 4,
    /// A diagonal entry strayed from unit modulus.
    NonUnitModulus = 5,
    /// The requested metric/solver combination is not supported.
    Unsupported = 6,
    /// The instance exceeds the requested solver's size limit.
    TooLarge = 7,
    /// An internal numerical guarantee failed.
    Numerical = 8,
}

/// Metric selector for [`pg_minimize`] and [`pg_geodesic_length`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgMetric {
    /// The unweighted quadratic metric (q = 1).
    F2 = 0,
    /// The weighted quadratic metric; pass the penalty in `q`.
    Fq = 1,
}

/// Solver selector for [`pg_minimize`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgSolver {
    /// Per-coordinate rounding; optimal for F2 only.
    Rounding = 0,
    /// Exhaustive scan, n <= 3.
    Brute = 1,
    /// Branch-and-bound enumeration, n <= 8.
    Bnb = 2,
}

/// Opaque phase-vector handle.
pub struct PgPhases {
    inner: PhaseVector,
}

/// Opaque minimization-result handle.
pub struct PgResult {
    inner: GeodesicResult,
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).ok();
    });
}

fn fail(status: PgStatus, message: &str) -> PgStatus {
    set_last_error(message);
    status
}

fn fail_null(what: &str) -> PgStatus {
    fail(PgStatus::NullArgument, &format!("{what} must not be null"))
}

fn status_of(e: &GeoError) -> PgStatus {
    match e {
        GeoError::DimensionMismatch { .. } | GeoError::NotPowerOfTwo { .. } => {
            PgStatus::DimensionMismatch
        }
        GeoError::NonFinite { .. } => PgStatus::NonFinite,
        GeoError::NonUnitModulus { .. } => PgStatus::NonUnitModulus,
        GeoError::InvalidSpec { .. } => PgStatus::Unsupported,
        GeoError::TooLarge { .. } => PgStatus::TooLarge,
        GeoError::Numerical { .. } => PgStatus::Numerical,
        GeoError::MaskOutOfRange { .. }
        | GeoError::WeightTooLow { .. }
        | GeoError::BadDimension { .. }
        | GeoError::EpsilonTooLarge { .. }
        | GeoError::DomainError { .. } => PgStatus::InvalidArgument,
    }
}

fn fail_with(e: GeoError) -> PgStatus {
    let status = status_of(&e);
    set_last_error(&e.to_string());
    status
}

/// Crate version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the most recent failure on this thread, or null. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pg_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Create a phase vector from `len = 2^n` radian values.
///
/// # Safety
/// `phases` must point to `len` readable doubles; `out` must be a valid
/// location for one pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_phases_new(
    n: usize,
    phases: *const f64,
    len: usize,
    out: *mut *mut PgPhases,
) -> PgStatus {
    if out.is_null() {
        return fail_null("out");
    }
    if phases.is_null() {
        return fail_null("phases");
    }
    let values = slice::from_raw_parts(phases, len).to_vec();
    match PhaseVector::new(n, values) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(PgPhases { inner }));
            PgStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}

/// Create a phase vector from the diagonal of a unitary, given as
/// `entries` interleaved (re, im) pairs — `2 * entries` doubles in all.
/// Entries must have unit modulus; phases come out canonical in
/// `[0, 2pi)`.
///
/// # Safety
/// `reim` must point to `2 * entries` readable doubles; `out` must be a
/// valid location for one pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_phases_from_unitary(
    reim: *const f64,
    entries: usize,
    out: *mut *mut PgPhases,
) -> PgStatus {
    if out.is_null() {
        return fail_null("out");
    }
    if reim.is_null() {
        return fail_null("reim");
    }
    let raw = slice::from_raw_parts(reim, 2 * entries);
    let diag: Vec<num_complex::Complex64> = raw
        .chunks_exact(2)
        .map(|pair| num_complex::Complex64::new(pair[0], pair[1]))
        .collect();
    match pauli_geodesic::transform::eigenphases_from_unitary(&diag) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(PgPhases { inner }));
            PgStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}

/// Destroy a phase handle; null is ignored.
///
/// # Safety
/// `phases` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn pg_phases_free(phases: *mut PgPhases) {
    if !phases.is_null() {
        drop(Box::from_raw(phases));
    }
}

/// Qubit count of a phase handle (0 on null).
///
/// # Safety
/// `phases` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pg_phases_qubits(phases: *const PgPhases) -> usize {
    phases.as_ref().map(|p| p.inner.n()).unwrap_or(0)
}

/// Vector length `N = 2^n` of a phase handle (0 on null).
///
/// # Safety
/// `phases` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pg_phases_len(phases: *const PgPhases) -> usize {
    phases.as_ref().map(|p| p.inner.len()).unwrap_or(0)
}

/// Write the Pauli coefficients of the phases into `out[0..len]`,
/// mask-indexed; `len` must equal the vector length.
///
/// # Safety
/// `phases` must be a live handle; `out` must point to `len` writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn pg_expand(
    phases: *const PgPhases,
    out: *mut f64,
    len: usize,
) -> PgStatus {
    let Some(p) = phases.as_ref() else {
        return fail_null("phases");
    };
    if out.is_null() {
        return fail_null("out");
    }
    if len != p.inner.len() {
        return fail(
            PgStatus::DimensionMismatch,
            &format!("expected buffer of {} coefficients, got {len}", p.inner.len()),
        );
    }
    let coeffs = expand(&p.inner);
    slice::from_raw_parts_mut(out, len).copy_from_slice(coeffs.coeffs());
    PgStatus::Ok
}

fn resolve_metric(metric: PgMetric, q: f64) -> Metric {
    match metric {
        PgMetric::F2 => Metric::F2,
        PgMetric::Fq => Metric::Fq { q },
    }
}

/// Minimize the geodesic length of `phases` over the offset lattice.
/// For `PG_METRIC_F2` the `q` argument is ignored. `workers` configures
/// the bnb solver (0 = all cores) and is ignored by the others.
///
/// # Safety
/// `phases` must be a live handle; `out` must be a valid location for one
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_minimize(
    phases: *const PgPhases,
    metric: PgMetric,
    q: f64,
    solver: PgSolver,
    workers: usize,
    out: *mut *mut PgResult,
) -> PgStatus {
    let Some(p) = phases.as_ref() else {
        return fail_null("phases");
    };
    if out.is_null() {
        return fail_null("out");
    }
    let metric = resolve_metric(metric, q);
    let result = match solver {
        PgSolver::Rounding => {
            if matches!(metric, Metric::F2) {
                Ok(minimize_f2_closed_form(&p.inner))
            } else {
                rounding_result(&p.inner, &metric)
            }
        }
        PgSolver::Brute => minimize_brute(&p.inner, &metric),
        PgSolver::Bnb => minimize_bnb_with(&p.inner, &metric, BnbOptions { workers }),
    };
    match result {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(PgResult { inner }));
            PgStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}

/// Destroy a result handle; null is ignored.
///
/// # Safety
/// `result` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn pg_result_free(result: *mut PgResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Minimal length found (NaN on null).
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pg_result_length(result: *const PgResult) -> f64 {
    result.as_ref().map(|r| r.inner.length).unwrap_or(f64::NAN)
}

/// Whether the solver certified global optimality (false on null).
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pg_result_optimal(result: *const PgResult) -> bool {
    result.as_ref().map(|r| r.inner.optimal).unwrap_or(false)
}

/// Vector length `N` of a result (0 on null).
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pg_result_len(result: *const PgResult) -> usize {
    result.as_ref().map(|r| r.inner.offset.len()).unwrap_or(0)
}

/// Copy the optimal integer offsets into `out[0..len]`.
///
/// # Safety
/// `result` must be a live handle; `out` must point to `len` writable
/// 64-bit integers.
#[no_mangle]
pub unsafe extern "C" fn pg_result_offsets(
    result: *const PgResult,
    out: *mut i64,
    len: usize,
) -> PgStatus {
    let Some(r) = result.as_ref() else {
        return fail_null("result");
    };
    if out.is_null() {
        return fail_null("out");
    }
    if len != r.inner.offset.len() {
        return fail(
            PgStatus::DimensionMismatch,
            &format!("expected buffer of {} offsets, got {len}", r.inner.offset.len()),
        );
    }
    slice::from_raw_parts_mut(out, len).copy_from_slice(r.inner.offset.ints());
    PgStatus::Ok
}

/// Copy the Pauli coefficients of the optimal Hamiltonian into
/// `out[0..len]`.
///
/// # Safety
/// `result` must be a live handle; `out` must point to `len` writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn pg_result_coeffs(
    result: *const PgResult,
    out: *mut f64,
    len: usize,
) -> PgStatus {
    let Some(r) = result.as_ref() else {
        return fail_null("result");
    };
    if out.is_null() {
        return fail_null("out");
    }
    if len != r.inner.coeffs.len() {
        return fail(
            PgStatus::DimensionMismatch,
            &format!("expected buffer of {} coefficients, got {len}", r.inner.coeffs.len()),
        );
    }
    slice::from_raw_parts_mut(out, len).copy_from_slice(r.inner.coeffs.coeffs());
    PgStatus::Ok
}

/// Length of the constant geodesic selected by an explicit offset vector,
/// without minimizing. `offsets` must hold `len` integers matching the
/// phase vector's length.
///
/// # Safety
/// `phases` must be a live handle; `offsets` must point to `len` readable
/// 64-bit integers; `length_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pg_geodesic_length(
    phases: *const PgPhases,
    offsets: *const i64,
    len: usize,
    metric: PgMetric,
    q: f64,
    length_out: *mut f64,
) -> PgStatus {
    let Some(p) = phases.as_ref() else {
        return fail_null("phases");
    };
    if offsets.is_null() {
        return fail_null("offsets");
    }
    if length_out.is_null() {
        return fail_null("length_out");
    }
    let j = LatticeOffset(slice::from_raw_parts(offsets, len).to_vec());
    match geodesic_length(&p.inner, &j, &resolve_metric(metric, q)) {
        Ok(value) => {
            *length_out = value;
            PgStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}
