//! Exact closest-vector enumeration for the quadratic metrics.
//!
//! The lattice of phase offsets `{2pi j : j integer}` is rewritten in the
//! monomial basis `mu_s(k) = prod_{a in s} k_a = [s subset k]`: the change
//! of basis `j_k = sum_{s subset k} u_s` is unimodular (subset zeta
//! transform), so minimizing over integer `u` ranges over exactly the same
//! lattice. In weighted Pauli-coefficient coordinates the basis vector of
//! monomial `s` is supported on masks `m subset s` with entry
//! `2pi * w_m * (-1)^popcount(m) / 2^popcount(s)`, which gives the Gram
//! matrix in closed form:
//!
//! ```text
//! G[s,s'] = (2pi)^2 / 2^(|s|+|s'|) * sum_{m subset s & s'} w_m^2
//! ```
//!
//! Monomials are ordered by ascending Pauli weight. All weight >= 3
//! monomials then sit at the high end of the Cholesky factor with pivots
//! of order `q`, so Schnorr-Euchner enumeration (which walks levels from
//! the end) fixes the expensive coordinates first and prunes almost
//! immediately once the incumbent is near-optimal. Enumerating the raw
//! per-diagonal basis instead would spend the penalty only at the deepest
//! levels and blow up for large `q`.
//!
//! Determinism contract: with any worker count, every offset whose length
//! lies within [`tol::LENGTH_ABS`] of the final minimum is enumerated and
//! collected, because the pruning radius never drops below
//! `minimum + LENGTH_ABS`. The merged candidate set is therefore
//! schedule-independent, and the lexicographically smallest offset among
//! them is returned with its length recomputed through the canonical
//! `expand` + `metric_value` path (bit-identical regardless of worker).

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{GeoError, Result};
use crate::metrics::{metric_value, Metric};
use crate::tol;
use crate::transform::{expand, PhaseVector};

use super::{
    apply_offset, rounding_result, GeodesicResult, LatticeOffset, SolverKind, BNB_MAX_QUBITS,
};

const TAU: f64 = std::f64::consts::TAU;

/// Tuning knobs for [`minimize_bnb_with`]. The result is identical for
/// every configuration; only wall time varies.
#[derive(Debug, Clone, Copy)]
pub struct BnbOptions {
    /// Number of enumeration workers; 0 means one per available core.
    pub workers: usize,
}

impl Default for BnbOptions {
    fn default() -> Self {
        Self { workers: 1 }
    }
}

/// Exact lattice minimization by sphere enumeration; see the module docs
/// for the basis construction. Requires a quadratic metric with `q >= 1`
/// and `n <= 8`.
pub fn minimize_bnb(h: &PhaseVector, metric: &Metric) -> Result<GeodesicResult> {
    minimize_bnb_with(h, metric, BnbOptions::default())
}

/// [`minimize_bnb`] with explicit worker configuration.
pub fn minimize_bnb_with(
    h: &PhaseVector,
    metric: &Metric,
    options: BnbOptions,
) -> Result<GeodesicResult> {
    metric.validate()?;
    let q = match metric.high_weight_factor() {
        Some(q) => q,
        None => {
            return Err(GeoError::InvalidSpec {
                reason: "bnb supports only the quadratic metrics Fq and F2".into(),
            })
        }
    };
    if q < 1.0 {
        return Err(GeoError::InvalidSpec {
            reason: format!("bnb requires q >= 1 (got {q}); its search bound assumes Fq >= F2"),
        });
    }
    if h.n() > BNB_MAX_QUBITS {
        return Err(GeoError::TooLarge {
            solver: "bnb",
            reason: format!("n = {} exceeds the limit {BNB_MAX_QUBITS}", h.n()),
        });
    }

    let dim = h.len();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by_key(|&s| (s.count_ones(), s));

    let gram = monomial_gram(&order, q);
    let r = cholesky_upper(&gram, dim)?;

    // Real-valued solution in monomial coordinates: Mobius transform of
    // h / 2pi, permuted into weight order.
    let mut u_mask: Vec<f64> = h.phases().iter().map(|&p| p / TAU).collect();
    subset_mobius(&mut u_mask);
    let u_real: Vec<f64> = order.iter().map(|&s| u_mask[s]).collect();

    let seed = rounding_result(h, metric)?;
    let shared = AtomicU64::new(seed.length.to_bits());

    let ctx = Ctx {
        dim,
        r: &r,
        u_real: &u_real,
        order: &order,
        h,
        metric,
    };

    // Top-level candidates under the seed bound, in zig-zag order. Every
    // offset competitive with the final minimum projects into this list,
    // so partitioning it across workers loses nothing.
    let top = dim - 1;
    let r_top = r[top * dim + top];
    let c_top = u_real[top];
    let bound = seed.length + tol::LENGTH_ABS;
    let mut tops = Vec::new();
    let mut steps = ZigZag::around(c_top);
    loop {
        let v = steps.next_value();
        let d = r_top * (v as f64 - c_top);
        if d * d > bound * bound {
            break;
        }
        tops.push(v);
    }

    let mut found: Vec<(f64, Vec<i64>)> = vec![(seed.length, seed.offset.0.clone())];
    let workers = match options.workers {
        0 => std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1),
        w => w,
    }
    .clamp(1, tops.len().max(1));

    if workers <= 1 {
        let mut en = Enumerator::new(&ctx, &shared);
        for &v in &tops {
            en.enter_top(v);
        }
        found.append(&mut en.found);
    } else {
        let chunks: Vec<Vec<i64>> = (0..workers)
            .map(|w| tops.iter().skip(w).step_by(workers).copied().collect())
            .collect();
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .iter()
                .map(|chunk| {
                    let ctx = &ctx;
                    let shared = &shared;
                    scope.spawn(move || {
                        let mut en = Enumerator::new(ctx, shared);
                        for &v in chunk {
                            en.enter_top(v);
                        }
                        en.found
                    })
                })
                .collect();
            for handle in handles {
                found.append(&mut handle.join().expect("enumeration worker panicked"));
            }
        });
    }

    let min_len = found
        .iter()
        .map(|(len, _)| *len)
        .fold(f64::INFINITY, f64::min);
    let best_j = found
        .iter()
        .filter(|(len, _)| *len <= min_len + tol::LENGTH_ABS)
        .map(|(_, j)| j)
        .min()
        .expect("candidate set contains at least the rounding seed");

    let offset = LatticeOffset(best_j.clone());
    let reduced = apply_offset(h, &offset)?;
    let coeffs = expand(&reduced);
    let length = metric_value(&coeffs, metric)?;
    Ok(GeodesicResult {
        offset,
        length,
        coeffs,
        solver: SolverKind::Bnb,
        optimal: true,
    })
}

/// Gram matrix of the weight-ordered monomial basis, from the closed form
/// in the module docs. `order[c]` is the monomial mask of column `c`.
fn monomial_gram(order: &[usize], q: f64) -> Vec<f64> {
    let dim = order.len();
    // Weighted subset sums per intersection weight t: low count
    // 1 + t + t(t-1)/2, the remaining 2^t subsets carry q^2.
    let n_bits = dim.trailing_zeros() as usize;
    let sum_w2: Vec<f64> = (0..=n_bits)
        .map(|t| {
            let low = (1 + t + t * t.saturating_sub(1) / 2).min(1 << t) as f64;
            low + q * q * ((1u64 << t) as f64 - low)
        })
        .collect();
    let mut gram = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in i..dim {
            let (si, sj) = (order[i], order[j]);
            let t = (si & sj).count_ones() as usize;
            let scale = TAU * TAU / (1u64 << (si.count_ones() + sj.count_ones())) as f64;
            let g = scale * sum_w2[t];
            gram[i * dim + j] = g;
            gram[j * dim + i] = g;
        }
    }
    gram
}

/// Upper-triangular Cholesky factor `R` with `R^T R = G`, row-major.
fn cholesky_upper(gram: &[f64], dim: usize) -> Result<Vec<f64>> {
    let mut r = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in i..dim {
            let mut s = gram[i * dim + j];
            for k in 0..i {
                s -= r[k * dim + i] * r[k * dim + j];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(GeoError::Numerical {
                        reason: format!("Gram pivot {i} is not positive ({s:.3e})"),
                    });
                }
                r[i * dim + i] = s.sqrt();
            } else {
                r[i * dim + j] = s / r[i * dim + i];
            }
        }
    }
    Ok(r)
}

/// In-place subset zeta transform: `v[k] <- sum_{s subset k} v[s]`.
fn subset_zeta(v: &mut [i64]) {
    let len = v.len();
    let mut bit = 1;
    while bit < len {
        for m in 0..len {
            if m & bit != 0 {
                v[m] += v[m ^ bit];
            }
        }
        bit <<= 1;
    }
}

/// In-place subset Mobius transform, the inverse of [`subset_zeta`].
fn subset_mobius(v: &mut [f64]) {
    let len = v.len();
    let mut bit = 1;
    while bit < len {
        for m in 0..len {
            if m & bit != 0 {
                v[m] -= v[m ^ bit];
            }
        }
        bit <<= 1;
    }
}

/// Integers in order of increasing distance from a real center.
struct ZigZag {
    v0: i64,
    dir: i64,
    k: u64,
}

impl ZigZag {
    fn around(c: f64) -> Self {
        let v0 = c.round() as i64;
        let dir = if c - v0 as f64 >= 0.0 { 1 } else { -1 };
        Self { v0, dir, k: 0 }
    }

    fn next_value(&mut self) -> i64 {
        let k = self.k;
        self.k += 1;
        if k == 0 {
            self.v0
        } else if k % 2 == 1 {
            self.v0 + self.dir * k.div_ceil(2) as i64
        } else {
            self.v0 - self.dir * (k / 2) as i64
        }
    }
}

struct Ctx<'a> {
    dim: usize,
    r: &'a [f64],
    u_real: &'a [f64],
    order: &'a [usize],
    h: &'a PhaseVector,
    metric: &'a Metric,
}

struct Enumerator<'a> {
    ctx: &'a Ctx<'a>,
    shared: &'a AtomicU64,
    u: Vec<i64>,
    found: Vec<(f64, Vec<i64>)>,
}

impl<'a> Enumerator<'a> {
    fn new(ctx: &'a Ctx<'a>, shared: &'a AtomicU64) -> Self {
        Self {
            ctx,
            shared,
            u: vec![0; ctx.dim],
            found: Vec::new(),
        }
    }

    fn bound_sq(&self) -> f64 {
        let inc = f64::from_bits(self.shared.load(Ordering::Relaxed));
        let b = inc + tol::LENGTH_ABS;
        b * b
    }

    fn enter_top(&mut self, v: i64) {
        let top = self.ctx.dim - 1;
        let d = self.ctx.r[top * self.ctx.dim + top] * (v as f64 - self.ctx.u_real[top]);
        let term = d * d;
        if term > self.bound_sq() {
            return;
        }
        self.u[top] = v;
        if top == 0 {
            self.leaf();
        } else {
            self.descend(top - 1, term);
        }
    }

    fn descend(&mut self, level: usize, partial_sq: f64) {
        let dim = self.ctx.dim;
        let row = &self.ctx.r[level * dim..(level + 1) * dim];
        let mut inner = 0.0;
        for ((&r, &u), &target) in row[level + 1..]
            .iter()
            .zip(&self.u[level + 1..])
            .zip(&self.ctx.u_real[level + 1..])
        {
            inner += r * (u as f64 - target);
        }
        let diag = row[level];
        let center = self.ctx.u_real[level] - inner / diag;

        let mut steps = ZigZag::around(center);
        loop {
            let v = steps.next_value();
            let d = diag * (v as f64 - center);
            let term = d * d;
            // Candidates arrive in order of increasing |v - center|, so the
            // first one over budget ends the level.
            if partial_sq + term > self.bound_sq() {
                break;
            }
            self.u[level] = v;
            if level == 0 {
                self.leaf();
            } else {
                self.descend(level - 1, partial_sq + term);
            }
        }
    }

    fn leaf(&mut self) {
        let mut j = vec![0i64; self.ctx.dim];
        for (c, &s) in self.ctx.order.iter().enumerate() {
            j[s] = self.u[c];
        }
        subset_zeta(&mut j);
        let offset = LatticeOffset(j);
        let reduced =
            apply_offset(self.ctx.h, &offset).expect("enumerated offset has the input's dimension");
        let len = metric_value(&expand(&reduced), self.ctx.metric)
            .expect("metric was validated before enumeration");

        atomic_min_f64(self.shared, len);
        let inc = f64::from_bits(self.shared.load(Ordering::Relaxed));
        if len <= inc + tol::LENGTH_ABS {
            self.found.push((len, offset.0));
            if self.found.len() > 8192 {
                self.found.retain(|(l, _)| *l <= inc + tol::LENGTH_ABS);
            }
        }
    }
}

/// Lock-free minimum over non-negative f64 values stored as bits.
fn atomic_min_f64(a: &AtomicU64, v: f64) {
    let bits = v.to_bits();
    let mut cur = a.load(Ordering::Relaxed);
    loop {
        if f64::from_bits(cur) <= v {
            return;
        }
        match a.compare_exchange_weak(cur, bits, Ordering::Relaxed, Ordering::Relaxed) {
            Ok(_) => return,
            Err(actual) => cur = actual,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{minimize_brute, minimize_f2_closed_form};
    use super::*;
    use crate::metrics::HIGH_WEIGHT_THRESHOLD;
    use std::f64::consts::PI;

    fn phases(n: usize, v: Vec<f64>) -> PhaseVector {
        PhaseVector::new(n, v).unwrap()
    }

    fn lcg_phases(n: usize, state: &mut u64) -> PhaseVector {
        let v = (0..1usize << n)
            .map(|_| {
                *state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                (*state >> 11) as f64 / (1u64 << 53) as f64 * TAU
            })
            .collect();
        phases(n, v)
    }

    fn family_canonical(n: usize) -> PhaseVector {
        let big_n = 1usize << n;
        let v = (0..big_n)
            .map(|k| {
                let base = PI / big_n as f64;
                if (k & 0b111).count_ones() % 2 == 0 { base } else { TAU - base }
            })
            .collect();
        phases(n, v)
    }

    #[test]
    fn zeta_and_mobius_are_inverse() {
        let orig: Vec<i64> = (0..16).map(|x| (x * 37 % 11) as i64 - 5).collect();
        let mut v = orig.clone();
        subset_zeta(&mut v);
        let mut f: Vec<f64> = v.iter().map(|&x| x as f64).collect();
        subset_mobius(&mut f);
        for (a, b) in orig.iter().zip(&f) {
            assert!((*a as f64 - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zeta_matches_subset_sums() {
        let mut v = vec![1i64, 2, 3, 4];
        subset_zeta(&mut v);
        assert_eq!(v, vec![1, 3, 4, 10]);
    }

    #[test]
    fn gram_matches_explicit_columns() {
        // Rebuild the basis columns from their definition and cross-check
        // the closed-form Gram entries.
        let n = 3usize;
        let dim = 1 << n;
        let q = 3.0;
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by_key(|&s| (s.count_ones(), s));
        let cols: Vec<Vec<f64>> = order
            .iter()
            .map(|&s| {
                (0..dim)
                    .map(|m| {
                        if m & s == m {
                            let w = if (m as u32).count_ones() >= HIGH_WEIGHT_THRESHOLD {
                                q
                            } else {
                                1.0
                            };
                            let sign = if (m as u32).count_ones().is_multiple_of(2) {
                                1.0
                            } else {
                                -1.0
                            };
                            TAU * w * sign / (1u64 << s.count_ones()) as f64
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        let gram = monomial_gram(&order, q);
        for i in 0..dim {
            for j in 0..dim {
                let dot: f64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
                assert!(
                    (gram[i * dim + j] - dot).abs() < 1e-9,
                    "gram[{i}][{j}] = {} vs {dot}",
                    gram[i * dim + j]
                );
            }
        }
    }

    #[test]
    fn cholesky_reconstructs_gram() {
        let mut order: Vec<usize> = (0..8).collect();
        order.sort_by_key(|&s| (s.count_ones(), s));
        let gram = monomial_gram(&order, 5.0);
        let r = cholesky_upper(&gram, 8).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let dot: f64 = (0..8).map(|k| r[k * 8 + i] * r[k * 8 + j]).sum();
                assert!((dot - gram[i * 8 + j]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn zero_input_gives_zero_geodesic() {
        let r = minimize_bnb(&PhaseVector::zero(3), &Metric::F2).unwrap();
        assert_eq!(r.length, 0.0);
        assert_eq!(r.offset.ints(), &[0; 8]);
        assert!(r.optimal);
        assert_eq!(r.solver, SolverKind::Bnb);
    }

    #[test]
    fn rejects_subunit_q() {
        let h = PhaseVector::zero(2);
        assert!(matches!(
            minimize_bnb(&h, &Metric::Fq { q: 0.5 }),
            Err(GeoError::InvalidSpec { .. })
        ));
    }

    #[test]
    fn rejects_f1_and_large_n() {
        let h = PhaseVector::zero(2);
        let f1 = Metric::F1 {
            variant: crate::metrics::F1Variant::PlainL1,
        };
        assert!(matches!(
            minimize_bnb(&h, &f1),
            Err(GeoError::InvalidSpec { .. })
        ));
        let big = PhaseVector::zero(9);
        assert!(matches!(
            minimize_bnb(&big, &Metric::F2),
            Err(GeoError::TooLarge { solver: "bnb", .. })
        ));
    }

    #[test]
    fn family_lengths_scale_with_q() {
        let h = family_canonical(3);
        for q in [1.0, 8.0, 64.0, 512.0] {
            let r = minimize_bnb(&h, &Metric::Fq { q }).unwrap();
            assert!(
                (r.length - q * PI / 8.0).abs() < 1e-9,
                "q={q}: got {}",
                r.length
            );
        }
    }

    #[test]
    fn family_scaling_at_n5() {
        let h = family_canonical(5);
        let q = 4f64.powi(5);
        let r = minimize_bnb(&h, &Metric::Fq { q }).unwrap();
        assert!((r.length - q * PI / 32.0).abs() < 1e-9 * q);
    }

    #[test]
    fn agrees_with_brute_on_random_instances() {
        let mut state = 42u64;
        for n in [2usize, 3] {
            for q in [1.0, 10.0] {
                let metric = Metric::Fq { q };
                for _ in 0..5 {
                    let h = lcg_phases(n, &mut state);
                    let b = minimize_brute(&h, &metric).unwrap();
                    let e = minimize_bnb(&h, &metric).unwrap();
                    assert!(
                        (b.length - e.length).abs() < 1e-9,
                        "n={n} q={q}: brute {} vs bnb {}",
                        b.length,
                        e.length
                    );
                }
            }
        }
    }

    #[test]
    fn agrees_with_closed_form_at_q1() {
        let mut state = 99u64;
        for _ in 0..10 {
            let h = lcg_phases(3, &mut state);
            let cf = minimize_f2_closed_form(&h);
            let e = minimize_bnb(&h, &Metric::F2).unwrap();
            assert!((cf.length - e.length).abs() < 1e-9);
        }
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let mut state = 7u64;
        let mut instances = vec![family_canonical(3)];
        for _ in 0..5 {
            instances.push(lcg_phases(3, &mut state));
        }
        for h in &instances {
            for metric in [Metric::F2, Metric::Fq { q: 64.0 }] {
                let solo = minimize_bnb_with(h, &metric, BnbOptions { workers: 1 }).unwrap();
                let four = minimize_bnb_with(h, &metric, BnbOptions { workers: 4 }).unwrap();
                assert_eq!(solo.offset, four.offset);
                assert_eq!(solo.length.to_bits(), four.length.to_bits());
            }
        }
    }

    #[test]
    fn result_length_is_canonical() {
        let mut state = 3u64;
        let h = lcg_phases(3, &mut state);
        let metric = Metric::Fq { q: 10.0 };
        let r = minimize_bnb(&h, &metric).unwrap();
        let recomputed = metric_value(&r.coeffs, &metric).unwrap();
        assert!((r.length - recomputed).abs() < 1e-12);
    }
}
