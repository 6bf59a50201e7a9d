//! Minimal-length constant geodesics of diagonal unitaries under Pauli
//! metrics.
//!
//! A diagonal unitary `U = diag(e^{-i h_k})` is reached by the constant
//! curve `V(t) = e^{-iHt}` for any diagonal `H` whose phases differ from
//! `h` by integer multiples of `2pi`. The curve's length under the metric
//! `F_q` is computed from the Pauli coefficients of `H` (its Walsh-Hadamard
//! spectrum), with every weight >= 3 coefficient penalized by the factor
//! `q`. Finding the shortest such curve is a closest-vector problem over
//! the offset lattice, solved here exactly by three interchangeable
//! solvers, and the crate also ships the explicit phase family whose
//! minimal length grows like `q / N` — exponentially in the qubit count
//! once `q` is scheduled against `n`.
//!
//! Module map:
//!
//! * [`transform`] — phase vectors, Pauli masks, and the Walsh-Hadamard
//!   expansion between them;
//! * [`metrics`] — the `F_q` / `F_2` / `F_1` length functionals;
//! * [`lattice`] — geodesic lengths, the offset lattice, and the three
//!   minimizers (closed-form rounding, exhaustive scan, branch-and-bound);
//! * [`family`] — the extremal phase family, its optimality certificates,
//!   and the exponential-scaling schedule;
//! * [`io`] — JSON/CSV documents exchanged by the command-line tool;
//! * [`verify`] — seeded self-check suites with deterministic reports.

pub mod error;
pub mod family;
pub mod io;
pub mod lattice;
pub mod metrics;
pub mod tol;
pub mod transform;
pub mod verify;

pub use error::{GeoError, Result};
pub use lattice::{
    evaluate_curve, geodesic_length, minimize_bnb, minimize_bnb_with, minimize_brute,
    minimize_brute_boxed, minimize_f2_closed_form, projection_gap, projection_lower_bound,
    rounding_result, BnbOptions, GeodesicResult, LatticeOffset, SolverKind,
};
pub use metrics::{metric_value, F1Variant, Metric};
pub use transform::{expand, unexpand, CoeffVector, PauliMask, PhaseVector};
