#ifndef PAULI_GEODESIC_H
#define PAULI_GEODESIC_H

/* Generated by cbindgen from pauli-geodesic-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Metric selector for [`pg_minimize`] and [`pg_geodesic_length`].
typedef enum PgMetric {
  // The unweighted quadratic metric (q = 1).
  PG_METRIC_F2 = 0,
  // The weighted quadratic metric; pass the penalty in `q`.
  PG_METRIC_FQ = 1,
} PgMetric;

// Solver selector for [`pg_minimize`].
typedef enum PgSolver {
  // Per-coordinate rounding; optimal for F2 only.
  PG_SOLVER_ROUNDING = 0,
  // Exhaustive scan, n <= 3.
  PG_SOLVER_BRUTE = 1,
  // Branch-and-bound enumeration, n <= 8.
  PG_SOLVER_BNB = 2,
} PgSolver;

// Status codes returned by every fallible call.
typedef enum PgStatus {
  PG_STATUS_OK = 0,
  // A required pointer argument was null.
  PG_STATUS_NULL_ARGUMENT = 1,
  // An argument was out of range or semantically invalid.
  PG_STATUS_INVALID_ARGUMENT = 2,
  // A buffer or vector had the wrong length.
  PG_STATUS_DIMENSION_MISMATCH = 3,
  // An input value was NaN or infinite.
  PG_STATUS_NON_FINITE = 4,
  // A diagonal entry strayed from unit modulus.
  PG_STATUS_NON_UNIT_MODULUS = 5,
  // The requested metric/solver combination is not supported.
  PG_STATUS_UNSUPPORTED = 6,
  // The instance exceeds the requested solver's size limit.
  PG_STATUS_TOO_LARGE = 7,
  // An internal numerical guarantee failed.
  PG_STATUS_NUMERICAL = 8,
} PgStatus;

// Opaque phase-vector handle.
typedef struct PgPhases PgPhases;

// Opaque minimization-result handle.
typedef struct PgResult PgResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Crate version as a static NUL-terminated string.
const char *pg_version(void);

// Message of the most recent failure on this thread, or null. The
// pointer stays valid until the next failing call on the same thread.
const char *pg_last_error(void);

// Create a phase vector from `len = 2^n` radian values.
//
// # Safety
// `phases` must point to `len` readable doubles; `out` must be a valid
// location for one pointer.
enum PgStatus pg_phases_new(uintptr_t n,
                            const double *phases,
                            uintptr_t len,
                            struct PgPhases **out);

// Create a phase vector from the diagonal of a unitary, given as
// `entries` interleaved (re, im) pairs — `2 * entries` doubles in all.
// Entries must have unit modulus; phases come out canonical in
// `[0, 2pi)`.
//
// # Safety
// `reim` must point to `2 * entries` readable doubles; `out` must be a
// valid location for one pointer.
enum PgStatus pg_phases_from_unitary(const double *reim, uintptr_t entries, struct PgPhases **out);

// Destroy a phase handle; null is ignored.
//
// # Safety
// `phases` must have come from this library and not been freed before.
void pg_phases_free(struct PgPhases *phases);

// Qubit count of a phase handle (0 on null).
//
// # Safety
// `phases` must be a live handle or null.
uintptr_t pg_phases_qubits(const struct PgPhases *phases);

// Vector length `N = 2^n` of a phase handle (0 on null).
//
// # Safety
// `phases` must be a live handle or null.
uintptr_t pg_phases_len(const struct PgPhases *phases);

// Write the Pauli coefficients of the phases into `out[0..len]`,
// mask-indexed; `len` must equal the vector length.
//
// # Safety
// `phases` must be a live handle; `out` must point to `len` writable
// doubles.
enum PgStatus pg_expand(const struct PgPhases *phases, double *out, uintptr_t len);

// Minimize the geodesic length of `phases` over the offset lattice.
// For `PG_METRIC_F2` the `q` argument is ignored. `workers` configures
// the bnb solver (0 = all cores) and is ignored by the others.
//
// # Safety
// `phases` must be a live handle; `out` must be a valid location for one
// pointer.
enum PgStatus pg_minimize(const struct PgPhases *phases,
                          enum PgMetric metric,
                          double q,
                          enum PgSolver solver,
                          uintptr_t workers,
                          struct PgResult **out);

// Destroy a result handle; null is ignored.
//
// # Safety
// `result` must have come from this library and not been freed before.
void pg_result_free(struct PgResult *result);

// Minimal length found (NaN on null).
//
// # Safety
// `result` must be a live handle or null.
double pg_result_length(const struct PgResult *result);

// Whether the solver certified global optimality (false on null).
//
// # Safety
// `result` must be a live handle or null.
bool pg_result_optimal(const struct PgResult *result);

// Vector length `N` of a result (0 on null).
//
// # Safety
// `result` must be a live handle or null.
uintptr_t pg_result_len(const struct PgResult *result);

// Copy the optimal integer offsets into `out[0..len]`.
//
// # Safety
// `result` must be a live handle; `out` must point to `len` writable
// 64-bit integers.
enum PgStatus pg_result_offsets(const struct PgResult *result, int64_t *out, uintptr_t len);

// Copy the Pauli coefficients of the optimal Hamiltonian into
// `out[0..len]`.
//
// # Safety
// `result` must be a live handle; `out` must point to `len` writable
// doubles.
enum PgStatus pg_result_coeffs(const struct PgResult *result, double *out, uintptr_t len);

// Length of the constant geodesic selected by an explicit offset vector,
// without minimizing. `offsets` must hold `len` integers matching the
// phase vector's length.
//
// # Safety
// `phases` must be a live handle; `offsets` must point to `len` readable
// 64-bit integers; `length_out` must be writable.
enum PgStatus pg_geodesic_length(const struct PgPhases *phases,
                                 const int64_t *offsets,
                                 uintptr_t len,
                                 enum PgMetric metric,
                                 double q,
                                 double *length_out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PAULI_GEODESIC_H */
