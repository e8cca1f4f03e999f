//! Fundamental vector types and the elementary operations everything else
//! builds on: circular convolution, Hadamard product, norms and the
//! finite-difference kernels.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A fixed-length vector of complex samples.
///
/// The length is fixed at construction and all entries are finite; every
/// arithmetic operation on two signals requires matching lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSignal {
    samples: Vec<Complex64>,
}

impl ComplexSignal {
    /// Wraps a sample vector. Fails on empty input or non-finite entries.
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidSignal("signal must have length >= 1".into()));
        }
        if let Some(k) = samples.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidSignal(format!("non-finite sample at index {k}")));
        }
        Ok(Self { samples })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Standard basis vector `e_k` of length `n`.
    pub fn delta(k: usize, n: usize) -> Self {
        assert!(k < n, "delta index out of range");
        let mut samples = vec![Complex64::new(0.0, 0.0); n];
        samples[k] = Complex64::new(1.0, 0.0);
        Self { samples }
    }

    /// All-ones vector of length `n`.
    pub fn ones(n: usize) -> Self {
        assert!(n >= 1);
        Self { samples: vec![Complex64::new(1.0, 0.0); n] }
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1);
        Self { samples: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length >= 1 by construction
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// Real parts of all samples.
    pub fn real_parts(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.re).collect()
    }
}

impl std::ops::Index<usize> for ComplexSignal {
    type Output = Complex64;
    fn index(&self, k: usize) -> &Complex64 {
        &self.samples[k]
    }
}

/// A vector over {0,1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinarySignal {
    bits: Vec<u8>,
}

impl BinarySignal {
    /// Wraps a bit vector; every entry must be exactly 0 or 1.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidSignal("signal must have length >= 1".into()));
        }
        if let Some(k) = bits.iter().position(|&b| b > 1) {
            return Err(Error::InvalidSignal(format!("entry at index {k} is not 0/1")));
        }
        Ok(Self { bits })
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1);
        Self { bits: vec![0; n] }
    }

    /// Builds a length-`n` signal from the low `n` bits of a mask
    /// (bit `k` of the mask becomes entry `k`).
    pub fn from_mask(mask: u64, n: usize) -> Self {
        assert!(n >= 1 && n <= 64);
        Self { bits: (0..n).map(|k| ((mask >> k) & 1) as u8).collect() }
    }

    pub fn to_mask(&self) -> u64 {
        assert!(self.len() <= 64);
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |m, (k, &b)| m | ((b as u64) << k))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// The l0 "norm": number of ones.
    pub fn support_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// Indices of the ones.
    pub fn support(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(k, &b)| (b == 1).then_some(k))
            .collect()
    }

    /// The complement `1 - x`.
    pub fn flip(&self) -> Self {
        Self { bits: self.bits.iter().map(|&b| 1 - b).collect() }
    }

    pub fn to_complex(&self) -> ComplexSignal {
        ComplexSignal {
            samples: self.bits.iter().map(|&b| Complex64::new(b as f64, 0.0)).collect(),
        }
    }
}

/// A real vector constrained to the box `[lo, hi]^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSignal {
    values: Vec<f64>,
    lo: f64,
    hi: f64,
}

impl BoxSignal {
    pub fn new(values: Vec<f64>, lo: f64, hi: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSignal("signal must have length >= 1".into()));
        }
        if !(lo < hi) {
            return Err(Error::InvalidParameter(format!("box bounds must satisfy lo < hi, got [{lo}, {hi}]")));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite() || *v < lo || *v > hi) {
            return Err(Error::InvalidSignal(format!("entry at index {k} outside [{lo}, {hi}]")));
        }
        Ok(Self { values, lo, hi })
    }

    /// The default `[0,1]` box.
    pub fn unit(values: Vec<f64>) -> Result<Self> {
        Self::new(values, 0.0, 1.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn to_complex(&self) -> ComplexSignal {
        ComplexSignal {
            samples: self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }
}

fn check_equal_len(a: &ComplexSignal, b: &ComplexSignal) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "expected equal lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.len())
}

/// Periodic convolution `(a*b)_j = sum_k a_k b_{(j-k) mod N}`.
///
/// Evaluated by the defining double sum, which keeps dyadic-rational inputs
/// exact (the finite-difference energies of the characterization tests are
/// asserted exactly).
pub fn circular_convolve(a: &ComplexSignal, b: &ComplexSignal) -> Result<ComplexSignal> {
    let n = check_equal_len(a, b)?;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (j, out_j) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            // (j - k) mod n without signed arithmetic
            let idx = if j >= k { j - k } else { j + n - k };
            acc += a.samples[k] * b.samples[idx];
        }
        *out_j = acc;
    }
    Ok(ComplexSignal { samples: out })
}

/// Entrywise (Hadamard) product.
pub fn hadamard(a: &ComplexSignal, b: &ComplexSignal) -> Result<ComplexSignal> {
    check_equal_len(a, b)?;
    Ok(ComplexSignal {
        samples: a
            .samples
            .iter()
            .zip(&b.samples)
            .map(|(x, y)| x * y)
            .collect(),
    })
}

/// The lp norm for `p > 0`, or the number of nonzero entries for `p = 0`.
pub fn lp_norm(a: &ComplexSignal, p: f64) -> Result<f64> {
    if p < 0.0 || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("norm order must be >= 0, got {p}")));
    }
    if p == 0.0 {
        return Ok(a.samples.iter().filter(|c| c.norm_sqr() != 0.0).count() as f64);
    }
    if p == 2.0 {
        return Ok(a.samples.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt());
    }
    let sum: f64 = a.samples.iter().map(|c| c.norm().powf(p)).sum();
    Ok(sum.powf(1.0 / p))
}

/// Squared l2 norm.
pub fn norm_sqr(a: &ComplexSignal) -> f64 {
    a.samples().iter().map(|c| c.norm_sqr()).sum()
}

fn kernel_footprint(order: usize) -> usize {
    match order {
        0 => 1,
        1 => 2,
        2 => 3,
        3 => 5,
        n => n + 2, // order-3 stencil widened by repeated order-1 composition
    }
}

/// Circular kernel `v_n` with `grad^n x = v_n * x`.
///
/// Order 0 is the identity (`e_0`), order 1 the forward difference
/// `x_{k+1} - x_k`, order 3 the centered stencil
/// `-x_{k-2}/2 + x_{k-1} - x_{k+1} + x_{k+2}/2`, and every other order is
/// built by composing the order-1 kernel: `v_n = v_1 * v_{n-1}`.
pub fn finite_difference_kernel(order: usize, n: usize) -> Result<ComplexSignal> {
    let fp = kernel_footprint(order);
    if n < fp {
        return Err(Error::DimensionMismatch(format!(
            "length {n} too short for the order-{order} kernel (footprint {fp})"
        )));
    }
    let kernel = match order {
        0 => ComplexSignal::delta(0, n),
        1 => {
            // (v * x)_j = x_{j+1} - x_j
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v[0] = Complex64::new(-1.0, 0.0);
            v[n - 1] = Complex64::new(1.0, 0.0);
            ComplexSignal { samples: v }
        }
        3 => {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v[1] = Complex64::new(1.0, 0.0); // x_{k-1}
            v[2] = Complex64::new(-0.5, 0.0); // x_{k-2}
            v[n - 1] = Complex64::new(-1.0, 0.0); // x_{k+1}
            v[n - 2] = Complex64::new(0.5, 0.0); // x_{k+2}
            ComplexSignal { samples: v }
        }
        _ => {
            let v1 = finite_difference_kernel(1, n)?;
            let prev = finite_difference_kernel(order - 1, n)?;
            circular_convolve(&v1, &prev)?
        }
    };
    Ok(kernel)
}

/// Applies the order-`n` finite difference to `x`.
pub fn finite_difference(x: &ComplexSignal, order: usize) -> Result<ComplexSignal> {
    let v = finite_difference_kernel(order, x.len())?;
    circular_convolve(&v, x)
}
