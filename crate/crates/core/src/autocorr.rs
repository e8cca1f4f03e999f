//! Periodic and regular autocorrelation, the spectral identity connecting
//! them to Fourier magnitudes, and recovery of the autocorrelation from
//! (noisy, possibly oversampled) magnitude data.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::signal::{BinarySignal, ComplexSignal};
use crate::transforms::{DftPlan, MagnitudeMeasurements, SchemeTag};

/// Periodic (cyclic) autocorrelation, length `N`, lag `j = 0..N-1`.
///
/// Conjugate-symmetric: `values[j] = conj(values[(N-j) mod N])`. For binary
/// input every entry is a nonnegative integer and lag 0 equals the support
/// count.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicAutocorrelation {
    values: Vec<Complex64>,
}

impl PeriodicAutocorrelation {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Real parts rounded to the nearest integer, ties away from zero.
    pub fn round_to_integers(&self) -> Vec<i64> {
        self.values.iter().map(|c| c.re.round() as i64).collect()
    }

    /// Largest absolute deviation of the real parts from an integer vector.
    pub fn max_deviation_from(&self, reference: &[i64]) -> f64 {
        self.values
            .iter()
            .zip(reference)
            .map(|(c, &r)| Complex64::new(c.re - r as f64, c.im).norm())
            .fold(0.0, f64::max)
    }
}

/// Zero-padded (acyclic) autocorrelation, length `2N-1`, lag
/// `j = -N+1..N-1` stored at offset `j + N - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularAutocorrelation {
    values: Vec<Complex64>,
    n: usize,
}

impl RegularAutocorrelation {
    pub fn new(values: Vec<Complex64>, n: usize) -> Result<Self> {
        if values.len() != 2 * n - 1 {
            return Err(Error::DimensionMismatch(format!(
                "regular autocorrelation of an N={n} signal has length {}, got {}",
                2 * n - 1,
                values.len()
            )));
        }
        Ok(Self { values, n })
    }

    pub fn signal_len(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Entry at a signed lag in `-(N-1)..=N-1`.
    pub fn at(&self, lag: i64) -> Complex64 {
        let n = self.n as i64;
        assert!(lag > -n && lag < n, "lag out of range");
        self.values[(lag + n - 1) as usize]
    }

    /// Nonnegative lags `0..N-1` rounded to integers (ties away from zero).
    pub fn round_nonneg_lags(&self) -> Vec<i64> {
        (0..self.n as i64).map(|j| self.at(j).re.round() as i64).collect()
    }
}

/// `(Aut_p(x))_j = sum_k x_{(k+j) mod N} conj(x_k)`.
pub fn periodic_autocorrelation(x: &ComplexSignal) -> PeriodicAutocorrelation {
    let n = x.len();
    let values = (0..n)
        .map(|j| (0..n).map(|k| x[(k + j) % n] * x[k].conj()).sum())
        .collect();
    PeriodicAutocorrelation::new(values)
}

/// Exact integer periodic autocorrelation of a binary signal, computed by
/// pair counting: lag `j` is the number of ordered pairs of ones at cyclic
/// distance `j`.
pub fn periodic_autocorrelation_int(x: &BinarySignal) -> Vec<u32> {
    let n = x.len();
    let support = x.support();
    let mut counts = vec![0u32; n];
    counts[0] = support.len() as u32;
    for (i, &a) in support.iter().enumerate() {
        for &b in &support[i + 1..] {
            let d = b - a;
            counts[d] += 1;
            counts[n - d] += 1;
        }
    }
    counts
}

/// Exact integer regular autocorrelation of a binary signal, nonnegative
/// lags only (negative lags follow by symmetry).
pub fn regular_autocorrelation_int(x: &BinarySignal) -> Vec<u32> {
    let n = x.len();
    let support = x.support();
    let mut counts = vec![0u32; n];
    counts[0] = support.len() as u32;
    for (i, &a) in support.iter().enumerate() {
        for &b in &support[i + 1..] {
            counts[b - a] += 1;
        }
    }
    counts
}

/// `(Aut(x))_j = sum_k x_{k+j} conj(x_k)` with zero boundary.
pub fn regular_autocorrelation(x: &ComplexSignal) -> RegularAutocorrelation {
    let n = x.len() as i64;
    let values = (-(n - 1)..=(n - 1))
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                let idx = k + j;
                if idx >= 0 && idx < n {
                    acc += x[idx as usize] * x[k as usize].conj();
                }
            }
            acc
        })
        .collect();
    RegularAutocorrelation { values, n: x.len() }
}

/// Recovers `Aut_p(x) = F^{-1}(b .* b)` from classic magnitude measurements.
pub fn autocorr_from_magnitudes(b: &MagnitudeMeasurements) -> Result<PeriodicAutocorrelation> {
    if *b.scheme() != SchemeTag::Classic {
        return Err(Error::SchemeMismatch {
            expected: "classic".into(),
            got: b.scheme().to_string(),
        });
    }
    let n = b.len();
    let plan = DftPlan::classic(n)?;
    let squared: Vec<Complex64> = b.squared().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    Ok(PeriodicAutocorrelation::new(plan.inverse(&squared)?))
}

/// Least-squares recovery of the regular autocorrelation from `M >= 2N-1`
/// oversampled squared magnitudes.
///
/// The unknowns are parameterized conjugate-symmetrically (N real lags
/// `a_0..a_{N-1}`), giving the design matrix `G` with `G[k][0] = 1`,
/// `G[k][j] = 2 cos(2 pi k j / M)`. Because `M >= 2N-1` the Gram matrix
/// `G^T G = M diag(1, 2, ..., 2)` exactly, so the normal equations solve in
/// closed form.
#[derive(Debug, Clone)]
pub struct OversampledRegression {
    n: usize,
    m: usize,
    // cos(2 pi k j / M) laid out row-major, k = 0..M, j = 0..N
    cos_table: Vec<f64>,
}

impl OversampledRegression {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("signal length must be >= 1".into()));
        }
        if m < 2 * n - 1 {
            return Err(Error::Underdetermined { m, n });
        }
        let mut cos_table = Vec::with_capacity(m * n);
        for k in 0..m {
            for j in 0..n {
                cos_table.push((2.0 * std::f64::consts::PI * (k * j) as f64 / m as f64).cos());
            }
        }
        Ok(Self { n, m, cos_table })
    }

    /// Solves for the nonnegative lags `a_0..a_{N-1}` given the `M` squared
    /// magnitudes.
    pub fn solve(&self, squared: &[f64]) -> Result<Vec<f64>> {
        if squared.len() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "expected {} squared measurements, got {}",
                self.m,
                squared.len()
            )));
        }
        let mut lags = vec![0.0; self.n];
        for (k, &q) in squared.iter().enumerate() {
            let row = &self.cos_table[k * self.n..(k + 1) * self.n];
            for (j, &c) in row.iter().enumerate() {
                lags[j] += c * q;
            }
        }
        let m = self.m as f64;
        for lag in lags.iter_mut() {
            *lag /= m;
        }
        Ok(lags)
    }
}

/// Recovers the regular autocorrelation from oversampled magnitudes
/// (`M >= 2N-1`); exact for noiseless data.
pub fn regular_autocorr_from_oversampled(
    b: &MagnitudeMeasurements,
    n: usize,
) -> Result<RegularAutocorrelation> {
    let m = match b.scheme() {
        SchemeTag::Oversampled { m } => *m,
        other => {
            return Err(Error::SchemeMismatch {
                expected: "oversampled".into(),
                got: other.to_string(),
            })
        }
    };
    if m != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "scheme says M={m} but the vector has {} entries",
            b.len()
        )));
    }
    let regression = OversampledRegression::new(n, m)?;
    let lags = regression.solve(&b.squared())?;
    let values = (-(n as i64 - 1)..=(n as i64 - 1))
        .map(|j| Complex64::new(lags[j.unsigned_abs() as usize], 0.0))
        .collect();
    RegularAutocorrelation::new(values, n)
}

/// The polynomial `A_x(z) = z^{N-1} sum_n Aut(x)_n z^n` of degree at most
/// `2N-2`; coefficient `m` holds the lag `m - (N-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutPolynomial {
    coeffs: Vec<Complex64>,
    n: usize,
}

impl AutPolynomial {
    pub fn from_regular(aut: &RegularAutocorrelation) -> Self {
        Self { coeffs: aut.values().to_vec(), n: aut.signal_len() }
    }

    /// Builds the polynomial from integer nonnegative lags, mirroring them
    /// onto the negative side.
    pub fn from_integer_lags(lags: &[i64]) -> Self {
        let n = lags.len();
        let coeffs = (-(n as i64 - 1)..=(n as i64 - 1))
            .map(|j| Complex64::new(lags[j.unsigned_abs() as usize] as f64, 0.0))
            .collect();
        Self { coeffs, n }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Palindromic-up-to-conjugation defect `max_m |c_m - conj(c_{2N-2-m})|`.
    pub fn palindromic_defect(&self) -> f64 {
        let d = self.coeffs.len();
        (0..d)
            .map(|m| (self.coeffs[m] - self.coeffs[d - 1 - m].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Samples `e^{2 pi i k (N-1)/M} A(e^{-2 pi i k/M})` for `k = 0..M-1`;
    /// for a genuine autocorrelation these are the squared magnitudes
    /// `|F_M x|^2` (real up to rounding), returned with their residual
    /// imaginary part dropped.
    ///
    /// Near-vanishing spectral bins amplify absolute error through the
    /// square root taken downstream, so the trig arguments are reduced
    /// exactly (integer index mod `m`) and the sum is compensated.
    pub fn sampled_squared_magnitudes(&self, m: usize) -> Vec<f64> {
        let n = self.n;
        let table: Vec<Complex64> = (0..m)
            .map(|t| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * t as f64 / m as f64))
            .collect();
        (0..m)
            .map(|k| {
                // Kahan-compensated accumulation of the real part
                let mut sum = 0.0f64;
                let mut carry = 0.0f64;
                let mut add = |value: f64| {
                    let y = value - carry;
                    let t = sum + y;
                    carry = (t - sum) - y;
                    sum = t;
                };
                for j in 0..n {
                    // lag +j at table index (k*j) mod m, lag -j mirrored
                    let t = (k * j) % m;
                    let w = table[t];
                    let pos = self.coeffs[n - 1 + j];
                    add(pos.re * w.re - pos.im * w.im);
                    if j > 0 {
                        let neg = self.coeffs[n - 1 - j];
                        add(neg.re * w.re + neg.im * w.im);
                    }
                }
                sum
            })
            .collect()
    }
}
