//! Documents exchanged by the command-line tool.
//!
//! Inputs are JSON with an explicit qubit count and exactly one of
//! `phases` (the native representation) or `diag` (unit-modulus complex
//! diagonal entries as `[re, im]` pairs). Phase inputs are taken verbatim
//! — expanding an already-centered Hamiltonian must not re-wrap it —
//! while diagonal entries are converted to canonical eigenphases in
//! `[0, 2pi)`.
//!
//! All reals in emitted JSON are rendered with 17 significant digits so
//! parsing a report reproduces the exact doubles that were computed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::lattice::{geodesic_length, GeodesicResult, LatticeOffset, SolverKind};
use crate::metrics::{metric_value, F1Variant, Metric};
use crate::tol;
use crate::transform::{eigenphases_from_unitary, CoeffVector, PhaseVector};

/// Largest accepted qubit count for parsed documents; keeps hostile
/// inputs from requesting astronomical allocations.
const MAX_INPUT_QUBITS: usize = 20;

/// A diagonal unitary, either as phases or as diagonal entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diag: Option<Vec<[f64; 2]>>,
}

impl InputDocument {
    pub fn from_phases(h: &PhaseVector) -> Self {
        Self {
            n: h.n(),
            phases: Some(h.phases().to_vec()),
            diag: None,
        }
    }

    /// Strict JSON parse; structural failures (malformed JSON, unknown
    /// fields, wrong types) surface here, semantic ones in [`Self::to_phases`].
    pub fn parse(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Validates the document invariants and produces the phase vector:
    /// verbatim for `phases`, canonical eigenphases for `diag`.
    pub fn to_phases(&self) -> Result<PhaseVector> {
        if self.n > MAX_INPUT_QUBITS {
            return Err(GeoError::InvalidSpec {
                reason: format!("n = {} exceeds the supported maximum {MAX_INPUT_QUBITS}", self.n),
            });
        }
        let expected = 1usize << self.n;
        match (&self.phases, &self.diag) {
            (Some(_), Some(_)) => Err(GeoError::InvalidSpec {
                reason: "document sets both `phases` and `diag`; exactly one is required".into(),
            }),
            (None, None) => Err(GeoError::InvalidSpec {
                reason: "document sets neither `phases` nor `diag`; exactly one is required".into(),
            }),
            (Some(p), None) => PhaseVector::new(self.n, p.clone()),
            (None, Some(d)) => {
                if d.len() != expected {
                    return Err(GeoError::DimensionMismatch {
                        expected,
                        actual: d.len(),
                    });
                }
                let entries: Vec<Complex64> =
                    d.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
                eigenphases_from_unitary(&entries)
            }
        }
    }
}

/// Outcome of a minimization, self-contained enough to re-verify.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultDocument {
    pub input: InputDocument,
    pub metric: Metric,
    pub solver: SolverKind,
    pub offset: Vec<i64>,
    pub length: f64,
    /// Pauli coefficients of the optimal Hamiltonian, mask-indexed.
    pub coeffs: Vec<f64>,
    /// The identity-mask coefficient, reported separately: it is a global
    /// phase with no gate cost, yet the metrics include it.
    pub identity_coefficient: f64,
    /// Length with the identity coefficient zeroed out.
    pub length_excluding_identity: f64,
    /// `sqrt(sum |c|)` at this optimum — an upper bound on the open
    /// F1-minimization problem, not its solution.
    pub f1_sqrt_upper_bound: f64,
    /// `sum |c|` at this optimum, likewise an upper bound.
    pub f1_l1_upper_bound: f64,
    pub optimal: bool,
    pub wall_ms: f64,
}

impl ResultDocument {
    pub fn new(
        input: InputDocument,
        metric: &Metric,
        result: &GeodesicResult,
        wall_ms: f64,
    ) -> Result<Self> {
        let mut no_identity = result.coeffs.clone();
        no_identity.coeffs_mut()[0] = 0.0;
        Ok(Self {
            input,
            metric: *metric,
            solver: result.solver,
            offset: result.offset.ints().to_vec(),
            length: result.length,
            coeffs: result.coeffs.coeffs().to_vec(),
            identity_coefficient: result.coeffs.coeffs()[0],
            length_excluding_identity: metric_value(&no_identity, metric)?,
            f1_sqrt_upper_bound: metric_value(
                &result.coeffs,
                &Metric::F1 {
                    variant: F1Variant::LiteralSqrt,
                },
            )?,
            f1_l1_upper_bound: metric_value(
                &result.coeffs,
                &Metric::F1 {
                    variant: F1Variant::PlainL1,
                },
            )?,
            optimal: result.optimal,
            wall_ms,
        })
    }

    /// Recomputes the length from the document's own input, offset, and
    /// metric; errors if it strays beyond [`tol::LENGTH_ABS`].
    pub fn self_check(&self) -> Result<()> {
        let h = self.input.to_phases()?;
        let recomputed =
            geodesic_length(&h, &LatticeOffset(self.offset.clone()), &self.metric)?;
        if (recomputed - self.length).abs() > tol::LENGTH_ABS {
            return Err(GeoError::Numerical {
                reason: format!(
                    "recorded length {:.17e} does not reproduce (got {recomputed:.17e})",
                    self.length
                ),
            });
        }
        Ok(())
    }
}

/// JSON formatter rendering every f64 with 17 significant digits.
struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes any report type to JSON with full-precision reals.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision);
    value
        .serialize(&mut ser)
        .expect("report types serialize infallibly");
    String::from_utf8(out).expect("serializer emits UTF-8")
}

/// Coefficient table as CSV: `mask,weight,coefficient`, masks ascending,
/// coefficients to 10 decimal places.
pub fn coeffs_csv(coeffs: &CoeffVector) -> String {
    let mut out = String::from("mask,weight,coefficient\n");
    for (m, &c) in coeffs.coeffs().iter().enumerate() {
        // Snap sub-rendering-precision values to a clean zero.
        let c = if c.abs() < 5e-11 { 0.0 } else { c };
        out.push_str(&format!("{m},{w},{c:.10}\n", w = (m as u64).count_ones()));
    }
    out
}

/// One timing measurement from the `bench` command.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub solver: SolverKind,
    pub n: usize,
    pub q: f64,
    pub run: usize,
    pub wall_ms: f64,
    pub length: f64,
}

/// Benchmark rows as CSV: `solver,n,q,run,wall_ms,length`.
pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("solver,n,q,run,wall_ms,length\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{:.3},{:.10}\n",
            r.solver, r.n, r.q, r.run, r.wall_ms, r.length
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{default_sigma, make_h0};
    use crate::lattice::minimize_bnb;
    use crate::transform::expand;
    use std::f64::consts::PI;

    #[test]
    fn phase_documents_pass_through_verbatim() {
        let doc = InputDocument::parse(r#"{"n": 1, "phases": [-0.5, 7.0]}"#).unwrap();
        let h = doc.to_phases().unwrap();
        assert_eq!(h.phases(), &[-0.5, 7.0]);
    }

    #[test]
    fn diag_documents_canonicalize() {
        // e^{-i h} with h = pi/2 stored as (0, -1); extraction returns pi/2
        let doc = InputDocument::parse(r#"{"n": 0, "diag": [[0.0, -1.0]]}"#).unwrap();
        let h = doc.to_phases().unwrap();
        assert!((h.phases()[0] - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn diag_documents_reject_non_unit_modulus() {
        let doc = InputDocument::parse(r#"{"n": 0, "diag": [[0.5, 0.0]]}"#).unwrap();
        assert!(matches!(
            doc.to_phases(),
            Err(GeoError::NonUnitModulus { .. })
        ));
    }

    #[test]
    fn exactly_one_payload_required() {
        let both = InputDocument {
            n: 0,
            phases: Some(vec![0.0]),
            diag: Some(vec![[1.0, 0.0]]),
        };
        assert!(matches!(both.to_phases(), Err(GeoError::InvalidSpec { .. })));
        let neither = InputDocument {
            n: 0,
            phases: None,
            diag: None,
        };
        assert!(matches!(
            neither.to_phases(),
            Err(GeoError::InvalidSpec { .. })
        ));
    }

    #[test]
    fn wrong_length_is_a_dimension_error() {
        let doc = InputDocument::parse(r#"{"n": 2, "phases": [0.0, 0.0]}"#).unwrap();
        assert!(matches!(
            doc.to_phases(),
            Err(GeoError::DimensionMismatch {
                expected: 4,
                actual: 2
            })
        ));
    }

    #[test]
    fn unknown_fields_fail_to_parse() {
        assert!(InputDocument::parse(r#"{"n": 1, "phases": [0, 0], "extra": 1}"#).is_err());
        assert!(InputDocument::parse("not json").is_err());
    }

    #[test]
    fn oversized_n_is_rejected() {
        let doc = InputDocument {
            n: 40,
            phases: Some(vec![]),
            diag: None,
        };
        assert!(matches!(doc.to_phases(), Err(GeoError::InvalidSpec { .. })));
    }

    #[test]
    fn json_reals_roundtrip_exactly() {
        #[derive(Serialize, Deserialize)]
        struct Probe {
            values: Vec<f64>,
        }
        let probe = Probe {
            values: vec![PI / 8.0, 1.0 / 3.0, 1e-300, 123456.789, 0.0],
        };
        let text = to_json(&probe);
        assert!(text.contains("3.9269908169872414e-1"));
        let back: Probe = serde_json::from_str(&text).unwrap();
        for (a, b) in probe.values.iter().zip(&back.values) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn coefficient_csv_renders_the_family_row() {
        let h = make_h0(3, default_sigma()).unwrap();
        let csv = coeffs_csv(&expand(&h));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "mask,weight,coefficient");
        assert_eq!(lines.len(), 9);
        assert_eq!(lines[8], "7,3,0.3926990817");
        assert_eq!(lines[1], "0,0,0.0000000000");
    }

    #[test]
    fn result_documents_self_check() {
        let h = make_h0(3, default_sigma()).unwrap();
        let metric = Metric::Fq { q: 100.0 };
        let r = minimize_bnb(&h, &metric).unwrap();
        let doc =
            ResultDocument::new(InputDocument::from_phases(&h), &metric, &r, 1.25).unwrap();
        doc.self_check().unwrap();
        assert!((doc.length - 100.0 * PI / 8.0).abs() < 1e-9);
        assert!((doc.f1_l1_upper_bound - PI / 8.0).abs() < 1e-9);
        assert!((doc.f1_sqrt_upper_bound - (PI / 8.0).sqrt()).abs() < 1e-9);
        assert_eq!(doc.identity_coefficient, doc.coeffs[0]);

        let text = to_json(&doc);
        let back: ResultDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.length.to_bits(), doc.length.to_bits());
        back.self_check().unwrap();
    }

    #[test]
    fn tampered_documents_fail_self_check() {
        let h = make_h0(3, default_sigma()).unwrap();
        let metric = Metric::F2;
        let r = minimize_bnb(&h, &metric).unwrap();
        let mut doc =
            ResultDocument::new(InputDocument::from_phases(&h), &metric, &r, 0.0).unwrap();
        doc.length += 1e-3;
        assert!(matches!(doc.self_check(), Err(GeoError::Numerical { .. })));
    }

    #[test]
    fn bench_csv_layout() {
        let rows = vec![BenchRow {
            solver: SolverKind::Bnb,
            n: 3,
            q: 100.0,
            run: 0,
            wall_ms: 1.5,
            length: PI,
        }];
        let csv = bench_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "solver,n,q,run,wall_ms,length");
        assert_eq!(lines[1], "bnb,3,100,0,1.500,3.1415926536");
    }
}
