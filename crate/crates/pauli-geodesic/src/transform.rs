//! Conversion between the eigenphase and Pauli-coefficient pictures of a
//! diagonal Hermitian operator.
//!
//! A diagonal Hamiltonian `H = diag(h_0, ..., h_{N-1})` on `n` qubits
//! (`N = 2^n`) expands over the diagonal Pauli strings, the tensor products
//! of `I` and `Z`, as `H = sum_m lambda_m P_m`. Identifying each string with
//! the n-bit mask of its `Z` factors, the coefficients are
//!
//! ```text
//! lambda_m = (1/N) * sum_k h_k * (-1)^popcount(k AND m)
//! ```
//!
//! which is a scaled Walsh-Hadamard transform; both directions run in
//! O(N log N) with in-place butterflies.

use num_complex::Complex64;

use crate::error::{GeoError, Result};
use crate::tol;

const TAU: f64 = std::f64::consts::TAU;

/// An n-bit mask identifying a tensor product of `I` and `Z` factors.
/// Bit `i` set means factor `i` is `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliMask(pub usize);

impl PauliMask {
    /// Number of `Z` factors (the Pauli weight of the string).
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    /// Whether the mask fits in `n` qubits.
    pub fn fits(self, n: usize) -> bool {
        self.0 < (1usize << n)
    }
}

/// Pauli weight of a mask: the number of non-identity factors.
pub fn pauli_weight(mask: PauliMask) -> u32 {
    mask.weight()
}

/// The `N = 2^n` eigenphases of a diagonal Hamiltonian, in radians.
///
/// Values are arbitrary reals; phases extracted from a unitary are
/// canonical (each in `[0, 2pi)`), while Hamiltonian constructions such as
/// the exponential-length family are not.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    n: usize,
    phases: Vec<f64>,
}

/// The `N = 2^n` Pauli-expansion coefficients, indexed by [`PauliMask`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    n: usize,
    coeffs: Vec<f64>,
}

fn check_len(n: usize, len: usize) -> Result<()> {
    let expected = 1usize << n;
    if len != expected {
        return Err(GeoError::DimensionMismatch {
            expected,
            actual: len,
        });
    }
    Ok(())
}

fn check_finite(values: &[f64]) -> Result<()> {
    for (index, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(GeoError::NonFinite { index });
        }
    }
    Ok(())
}

/// Reduce into `[0, 2pi)`, guarding against rounding `rem_euclid` up to 2pi.
fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl PhaseVector {
    pub fn new(n: usize, phases: Vec<f64>) -> Result<Self> {
        check_len(n, phases.len())?;
        check_finite(&phases)?;
        Ok(Self { n, phases })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            phases: vec![0.0; 1 << n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N = 2^n`.
    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Same phases reduced into `[0, 2pi)`.
    pub fn canonicalized(&self) -> PhaseVector {
        PhaseVector {
            n: self.n,
            phases: self.phases.iter().map(|&x| wrap_phase(x)).collect(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.phases.iter().all(|&x| (0.0..TAU).contains(&x))
    }

    /// All N phases pairwise distinct (exact comparison on sorted values).
    pub fn has_distinct_phases(&self) -> bool {
        let mut sorted = self.phases.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        sorted.windows(2).all(|w| w[0] < w[1])
    }
}

impl CoeffVector {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_len(n, coeffs.len())?;
        check_finite(&coeffs)?;
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    /// Coefficient at a mask.
    pub fn at(&self, mask: PauliMask) -> f64 {
        self.coeffs[mask.0]
    }
}

/// In-place Walsh-Hadamard transform: `y[j] = sum_i x[i] (-1)^popcount(i AND j)`.
///
/// `data.len()` must be a power of two. Applying it twice multiplies by N.
pub fn fwht_in_place(data: &mut [f64]) {
    debug_assert!(data.len().is_power_of_two());
    let mut half = 1;
    while half < data.len() {
        for chunk in data.chunks_exact_mut(2 * half) {
            let (a, b) = chunk.split_at_mut(half);
            for i in 0..half {
                let x = a[i];
                let y = b[i];
                a[i] = x + y;
                b[i] = x - y;
            }
        }
        half <<= 1;
    }
}

/// Pauli-expand a phase vector: `lambda_m = (1/N) sum_k h_k (-1)^popcount(k AND m)`.
pub fn expand(h: &PhaseVector) -> CoeffVector {
    let n = h.n();
    let scale = 1.0 / h.len() as f64;
    let mut data = h.phases().to_vec();
    fwht_in_place(&mut data);
    for v in &mut data {
        *v *= scale;
    }
    CoeffVector { n, coeffs: data }
}

/// Inverse of [`expand`]: recover the eigenphases of `sum_m lambda_m P_m`.
///
/// The result is a Hamiltonian, not a phase representative, so it is not
/// reduced into `[0, 2pi)`.
pub fn unexpand(c: &CoeffVector) -> PhaseVector {
    let n = c.n();
    let mut data = c.coeffs().to_vec();
    fwht_in_place(&mut data);
    PhaseVector { n, phases: data }
}

/// Extract canonical eigenphases from the diagonal of a unitary:
/// `entry_k = e^{-i h_k}` with `h_k` in `[0, 2pi)`.
///
/// The length must be a power of two and every entry must have unit modulus
/// within [`tol::UNIT_MODULUS`].
pub fn eigenphases_from_unitary(diag: &[Complex64]) -> Result<PhaseVector> {
    let len = diag.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(GeoError::NotPowerOfTwo { len });
    }
    let n = len.trailing_zeros() as usize;
    let mut phases = Vec::with_capacity(len);
    for (index, z) in diag.iter().enumerate() {
        let modulus = z.norm();
        if !modulus.is_finite() || (modulus - 1.0).abs() > tol::UNIT_MODULUS {
            return Err(GeoError::NonUnitModulus {
                index,
                modulus,
                tolerance: tol::UNIT_MODULUS,
            });
        }
        phases.push(wrap_phase(-z.arg()));
    }
    Ok(PhaseVector { n, phases })
}
