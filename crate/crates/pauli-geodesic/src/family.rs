//! The explicit phase family with exponentially long minimal geodesics.
//!
//! For a mask `sigma` of Pauli weight >= 3, the Hamiltonian
//! `H0 = (pi/N) sigma` has phases `h_k = (pi/N)(-1)^popcount(k AND sigma)`
//! and a single Pauli coefficient `pi/N` at `sigma`. Every lattice offset
//! leaves that coefficient on the grid `pi/N + (2pi/N) Z`, whose distance
//! to zero is at least `pi/N`, so the minimal `F_q` length is exactly
//! `q pi / N` — met by `H0` itself. Scheduling `q = 4^n` turns this into
//! the length `pi 2^n`, exponential in the qubit count.
//!
//! A deterministic perturbation `h_k + epsilon (k+1)/N` splits the
//! two-valued spectrum into `N` distinct eigenphases while moving the
//! minimum by at most `q epsilon`, keeping the family generic in the
//! sense of having a unique diagonalization.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{GeoError, Result};
use crate::lattice::{minimize_bnb, minimize_brute, projection_lower_bound};
use crate::metrics::Metric;
use crate::tol;
use crate::transform::{PauliMask, PhaseVector};

/// Identifier of the deterministic eigenvalue-splitting rule.
pub const PERTURBATION_RULE: &str = "h_k + epsilon*(k+1)/N";

/// Smallest qubit count admitting a weight-3 mask.
const MIN_QUBITS: usize = 3;

/// A member of the extremal family: qubit count, defining mask, and the
/// magnitude of the deterministic spectrum-splitting perturbation.
#[derive(Debug, Clone, Copy)]
pub struct FamilyInstance {
    pub n: usize,
    pub sigma: PauliMask,
    pub epsilon: f64,
}

impl FamilyInstance {
    /// Validates the construction's preconditions: `n >= 3`, `sigma` of
    /// weight >= 3 within range, and a non-negative finite `epsilon`.
    pub fn new(n: usize, sigma: PauliMask, epsilon: f64) -> Result<Self> {
        if n < MIN_QUBITS {
            return Err(GeoError::BadDimension { n });
        }
        if !sigma.fits(n) {
            return Err(GeoError::MaskOutOfRange { mask: sigma.0, n });
        }
        if sigma.weight() < 3 {
            return Err(GeoError::WeightTooLow {
                weight: sigma.weight(),
            });
        }
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(GeoError::InvalidSpec {
                reason: format!("epsilon must be finite and non-negative, got {epsilon}"),
            });
        }
        Ok(Self { n, sigma, epsilon })
    }

    /// The unperturbed phases of this instance.
    pub fn h0(&self) -> PhaseVector {
        make_h0(self.n, self.sigma).expect("instance preconditions were validated")
    }

    /// The perturbed, canonicalized phases of this instance.
    pub fn phases(&self) -> Result<PhaseVector> {
        perturb(self)
    }
}

/// Default defining mask: the three lowest bits set.
pub fn default_sigma() -> PauliMask {
    PauliMask(0b111)
}

/// Phases of `H0 = (pi/N) sigma`: `h_k = (pi/N)(-1)^popcount(k AND sigma)`.
///
/// The result is not canonicalized — half the phases are negative — so
/// that its Pauli expansion is exactly the single coefficient `pi/N` at
/// `sigma`.
pub fn make_h0(n: usize, sigma: PauliMask) -> Result<PhaseVector> {
    if n < MIN_QUBITS {
        return Err(GeoError::BadDimension { n });
    }
    if !sigma.fits(n) {
        return Err(GeoError::MaskOutOfRange { mask: sigma.0, n });
    }
    if sigma.weight() < 3 {
        return Err(GeoError::WeightTooLow {
            weight: sigma.weight(),
        });
    }
    let big_n = 1usize << n;
    let amp = PI / big_n as f64;
    let phases = (0..big_n)
        .map(|k| {
            if (k & sigma.0).count_ones().is_multiple_of(2) {
                amp
            } else {
                -amp
            }
        })
        .collect();
    PhaseVector::new(n, phases)
}

/// `h_k + epsilon (k+1)/N`, canonicalized to `[0, 2pi)`.
///
/// For `epsilon in (0, pi/N)` all `N` phases are pairwise distinct: phases
/// sharing a sign of the base spectrum differ by a nonzero multiple of
/// `epsilon/N`, and the two sign groups stay separated because the
/// perturbation never bridges the `2pi/N` gap between them.
pub fn perturb(instance: &FamilyInstance) -> Result<PhaseVector> {
    let big_n = 1usize << instance.n;
    let limit = PI / big_n as f64;
    if instance.epsilon >= limit {
        return Err(GeoError::EpsilonTooLarge {
            epsilon: instance.epsilon,
            limit,
        });
    }
    let h0 = instance.h0();
    let phases = h0
        .phases()
        .iter()
        .enumerate()
        .map(|(k, &p)| p + instance.epsilon * (k + 1) as f64 / big_n as f64)
        .collect();
    Ok(PhaseVector::new(instance.n, phases)?.canonicalized())
}

/// One verified bound instance: the minimized length against `q pi / N`.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma2Row {
    pub q: f64,
    /// The certified lower bound `q pi / N`.
    pub bound: f64,
    /// Global minimum from the branch-and-bound solver.
    pub min_length: f64,
    /// Independent exhaustive-scan minimum, populated for `n <= 3`.
    pub brute_length: Option<f64>,
    /// Projection-grid lower bound recomputed from the instance.
    pub projection_bound: f64,
    pub offset: Vec<i64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma2Report {
    pub n: usize,
    pub sigma: usize,
    pub rows: Vec<Lemma2Row>,
    pub pass: bool,
}

/// Verifies that the minimal length of the unperturbed instance equals
/// the lower bound `q pi / N` for every listed `q >= 1`. Runs the exact
/// branch-and-bound solver, cross-checked against the exhaustive scan
/// when `n <= 3`.
pub fn verify_lemma2(n: usize, sigma: PauliMask, q_list: &[f64]) -> Result<Lemma2Report> {
    if n > crate::lattice::BNB_MAX_QUBITS {
        return Err(GeoError::TooLarge {
            solver: "bnb",
            reason: format!(
                "n = {n} exceeds the limit {}",
                crate::lattice::BNB_MAX_QUBITS
            ),
        });
    }
    let instance = FamilyInstance::new(n, sigma, 0.0)?;
    let h = instance.phases()?;
    let big_n = h.len() as f64;
    let mut rows = Vec::with_capacity(q_list.len());
    for &q in q_list {
        if !(q.is_finite() && q >= 1.0) {
            return Err(GeoError::InvalidSpec {
                reason: format!("bound verification requires q >= 1, got {q}"),
            });
        }
        let metric = Metric::Fq { q };
        let bound = q * PI / big_n;
        let result = minimize_bnb(&h, &metric)?;
        let brute_length = if n <= crate::lattice::BRUTE_MAX_QUBITS {
            Some(minimize_brute(&h, &metric)?.length)
        } else {
            None
        };
        let projection_bound = projection_lower_bound(&h, &metric)?;
        let pass = result.length >= bound - tol::LENGTH_ABS
            && (result.length - bound).abs() <= tol::LENGTH_ABS
            && brute_length
                .map(|b| (b - result.length).abs() <= tol::LENGTH_ABS)
                .unwrap_or(true);
        rows.push(Lemma2Row {
            q,
            bound,
            min_length: result.length,
            brute_length,
            projection_bound,
            offset: result.offset.0,
            pass,
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(Lemma2Report {
        n,
        sigma: sigma.0,
        rows,
        pass,
    })
}

/// One row of the exponential-growth demonstration at `q = 4^n`.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    pub big_n: usize,
    pub q: f64,
    pub min_length: f64,
    /// `q pi / N = pi 2^n`.
    pub expected: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    pub pass: bool,
}

fn scaling_row(n: usize) -> Result<ScalingRow> {
    let instance = FamilyInstance::new(n, default_sigma(), 0.0)?;
    let h = instance.phases()?;
    let big_n = 1usize << n;
    let q = 4f64.powi(n as i32);
    let result = minimize_bnb(&h, &Metric::Fq { q })?;
    let expected = PI * (1u64 << n) as f64;
    let pass = (result.length - expected).abs() <= tol::LENGTH_ABS * q;
    Ok(ScalingRow {
        n,
        big_n,
        q,
        min_length: result.length,
        expected,
        pass,
    })
}

/// Minimal lengths of the family under the schedule `q = 4^n`, one row
/// per requested qubit count (each within 3..=8). The minimized length
/// `q pi / N = pi 2^n` doubles with every qubit.
pub fn exponential_scaling_table(n_list: &[usize]) -> Result<ScalingReport> {
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if !(MIN_QUBITS..=crate::lattice::BNB_MAX_QUBITS).contains(&n) {
            return Err(GeoError::BadDimension { n });
        }
        rows.push(scaling_row(n)?);
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(ScalingReport { rows, pass })
}

/// Minimized length of the perturbed instance against the stability
/// bound `|min(perturbed) - min(H0)| <= q epsilon`.
#[derive(Debug, Clone, Serialize)]
pub struct PerturbationRow {
    pub q: f64,
    /// Minimum of the unperturbed instance (`q pi / N`).
    pub h0_min: f64,
    /// Minimum of the perturbed instance.
    pub min_length: f64,
    /// `q * epsilon`.
    pub stability_bound: f64,
    pub pass: bool,
}

/// Full per-instance report emitted by the command-line `family` command.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub n: usize,
    pub sigma: usize,
    pub epsilon: f64,
    pub perturbation_rule: &'static str,
    pub phases: Vec<f64>,
    pub distinct_phases: bool,
    pub lemma2: Lemma2Report,
    /// Present iff `epsilon > 0`.
    pub perturbation: Option<Vec<PerturbationRow>>,
    pub scaling: ScalingRow,
    pub pass: bool,
}

/// Builds the family report: the (possibly perturbed) phases, the bound
/// verification on the unperturbed instance, perturbation-stability rows
/// when `epsilon > 0`, and this `n`'s exponential-scaling row.
pub fn family_report(instance: &FamilyInstance, q_list: &[f64]) -> Result<FamilyReport> {
    let phases = instance.phases()?;
    let lemma2 = verify_lemma2(instance.n, instance.sigma, q_list)?;
    let scaling = scaling_row(instance.n)?;
    let big_n = phases.len() as f64;

    let perturbation = if instance.epsilon > 0.0 {
        let mut rows = Vec::with_capacity(q_list.len());
        for &q in q_list {
            let h0_min = q * PI / big_n;
            let result = minimize_bnb(&phases, &Metric::Fq { q })?;
            let stability_bound = q * instance.epsilon;
            let pass = (result.length - h0_min).abs() <= stability_bound + tol::LENGTH_ABS;
            rows.push(PerturbationRow {
                q,
                h0_min,
                min_length: result.length,
                stability_bound,
                pass,
            });
        }
        Some(rows)
    } else {
        None
    };

    let distinct_phases = phases.has_distinct_phases();
    let pass = lemma2.pass
        && scaling.pass
        && perturbation
            .as_ref()
            .map(|rows| rows.iter().all(|r| r.pass))
            .unwrap_or(true)
        && (instance.epsilon == 0.0 || distinct_phases);
    Ok(FamilyReport {
        n: instance.n,
        sigma: instance.sigma.0,
        epsilon: instance.epsilon,
        perturbation_rule: PERTURBATION_RULE,
        phases: phases.phases().to_vec(),
        distinct_phases,
        lemma2,
        perturbation,
        scaling,
        pass,
    })
}
