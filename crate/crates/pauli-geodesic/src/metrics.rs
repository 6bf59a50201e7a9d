//! The Pauli metrics F_q, F_2 and F_1 on coefficient vectors.
//!
//! Coefficients at masks of Pauli weight <= 2 (one- and two-body terms,
//! including the identity) enter unweighted; masks of weight >= 3 carry the
//! penalty factor `q` under F_q. F_2 is F_q at q = 1. F_1 sums absolute
//! values; the `LiteralSqrt` variant takes the square root of that sum,
//! the `PlainL1` variant does not.

use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::transform::{CoeffVector, PauliMask};

/// Weight at or above which a Pauli string counts as a many-body term.
pub const HIGH_WEIGHT_THRESHOLD: u32 = 3;

/// Which form of the F_1 metric to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum F1Variant {
    /// sqrt of the l1 sum, the form as printed.
    LiteralSqrt,
    /// Plain l1 sum.
    PlainL1,
}

/// Metric selector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Metric {
    /// Weighted two-norm with penalty `q` on weight >= 3 coefficients.
    Fq { q: f64 },
    /// F_q at q = 1.
    F2,
    /// l1-style metric; no weight split.
    F1 { variant: F1Variant },
}

impl Metric {
    pub fn validate(&self) -> Result<()> {
        if let Metric::Fq { q } = self {
            if !q.is_finite() || *q <= 0.0 {
                return Err(GeoError::InvalidSpec {
                    reason: format!("q must be a positive finite real, got {q}"),
                });
            }
        }
        Ok(())
    }

    /// Penalty factor on weight >= 3 coefficients, for the quadratic metrics.
    pub fn high_weight_factor(&self) -> Option<f64> {
        match self {
            Metric::Fq { q } => Some(*q),
            Metric::F2 => Some(1.0),
            Metric::F1 { .. } => None,
        }
    }
}

/// Evaluate the metric on a coefficient vector.
pub fn metric_value(c: &CoeffVector, metric: &Metric) -> Result<f64> {
    metric.validate()?;
    match metric {
        Metric::Fq { .. } | Metric::F2 => {
            let q = metric.high_weight_factor().unwrap();
            let (low_sq, high_sq) = split_squared_sums(c);
            Ok((low_sq + q * q * high_sq).sqrt())
        }
        Metric::F1 { variant } => {
            let sum: f64 = c.coeffs().iter().map(|x| x.abs()).sum();
            Ok(match variant {
                F1Variant::LiteralSqrt => sum.sqrt(),
                F1Variant::PlainL1 => sum,
            })
        }
    }
}

/// Sum of squared coefficients over weight <= 2 masks and weight >= 3 masks.
pub fn split_squared_sums(c: &CoeffVector) -> (f64, f64) {
    let mut low = 0.0;
    let mut high = 0.0;
    for (m, &x) in c.coeffs().iter().enumerate() {
        if (m as u64).count_ones() < HIGH_WEIGHT_THRESHOLD {
            low += x * x;
        } else {
            high += x * x;
        }
    }
    (low, high)
}

/// All masks below `2^n` split into weight <= 2 and weight >= 3 classes.
///
/// `|low| = 1 + n + n(n-1)/2`.
pub fn weight_partition(n: usize) -> (Vec<PauliMask>, Vec<PauliMask>) {
    let mut low = Vec::new();
    let mut high = Vec::new();
    for m in 0..1usize << n {
        if (m as u64).count_ones() < HIGH_WEIGHT_THRESHOLD {
            low.push(PauliMask(m));
        } else {
            high.push(PauliMask(m));
        }
    }
    (low, high)
}
