//! Centralized numerical tolerances.
//!
//! Every comparison threshold used by the library and its verification
//! suites lives here, so tests and solvers agree on one set of numbers.

/// Transform roundtrip accuracy: `unexpand(expand(h))` must reproduce `h`
/// to this relative error. The Walsh-Hadamard butterflies accumulate
/// O(n) rounding steps on N = 2^n entries, far below 1e-12 for n <= 10.
pub const ROUNDTRIP_REL: f64 = 1e-12;

/// Parseval identity check: sum(lambda^2) vs sum(h^2)/N, relative.
pub const PARSEVAL_REL: f64 = 1e-9;

/// Absolute tolerance on geodesic lengths. Incumbents are replaced only
/// on improvement beyond this margin, and solver cross-checks compare at
/// this resolution, so tie-breaking stays deterministic.
pub const LENGTH_ABS: f64 = 1e-9;

/// How far a diagonal entry may deviate from unit modulus before the
/// phase extraction rejects it.
pub const UNIT_MODULUS: f64 = 1e-9;

/// Linearity / homogeneity checks on the transform and metrics.
pub const LINEARITY_ABS: f64 = 1e-12;

/// Residual magnitude below which a Pauli coefficient counts as zero
/// (single-mask purity checks on the family construction).
pub const COEFF_ZERO_ABS: f64 = 1e-14;
