//! Measurement operators: classic and oversampled DFT, short-time Fourier
//! transform, FROG trace, and magnitude extraction.
//!
//! The DFT here is the unnormalized matrix with entry `(n,k) = w^{nk}`,
//! `w = exp(-2*pi*i/M)`, applied to a length-`N` input (zero-padded when
//! `M > N`). `F* F = M I`, and `(1/sqrt(N)) F` is unitary when `M = N`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::ComplexSignal;

/// Which sampling scheme produced a measurement vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchemeTag {
    Classic,
    Oversampled { m: usize },
    Stft { window_len: usize, hop: usize },
    Frog { hop: usize },
}

impl fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeTag::Classic => write!(f, "classic"),
            SchemeTag::Oversampled { m } => write!(f, "oversampled({m})"),
            SchemeTag::Stft { window_len, hop } => write!(f, "stft({window_len},{hop})"),
            SchemeTag::Frog { hop } => write!(f, "frog({hop})"),
        }
    }
}

/// Nonnegative magnitude measurements under a tagged sampling scheme.
///
/// Exact measurements are nonnegative by construction; vectors produced by
/// noise injection may carry negative entries (downstream squaring handles
/// the sign).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MagnitudeMeasurements {
    values: Vec<f64>,
    scheme: SchemeTag,
}

impl MagnitudeMeasurements {
    pub fn new(values: Vec<f64>, scheme: SchemeTag) -> Self {
        Self { values, scheme }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scheme(&self) -> &SchemeTag {
        &self.scheme
    }

    /// Entrywise square `b .* b`.
    pub fn squared(&self) -> Vec<f64> {
        self.values.iter().map(|v| v * v).collect()
    }

    pub fn with_values(&self, values: Vec<f64>) -> Self {
        Self { values, scheme: self.scheme.clone() }
    }
}

/// A planned `N -> M` discrete Fourier transform.
///
/// Plans are immutable and cheap to share between threads; the heavy lifting
/// is delegated to cached FFT instances of length `M`.
pub struct DftPlan {
    input_length: usize,
    output_length: usize,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for DftPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DftPlan")
            .field("input_length", &self.input_length)
            .field("output_length", &self.output_length)
            .finish()
    }
}

impl DftPlan {
    pub fn new(input_length: usize, output_length: usize) -> Result<Self> {
        if input_length == 0 || output_length == 0 {
            return Err(Error::InvalidParameter("transform lengths must be >= 1".into()));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            input_length,
            output_length,
            fft: planner.plan_fft_forward(output_length),
            ifft: planner.plan_fft_inverse(output_length),
        })
    }

    /// The square classic plan (`M = N`).
    pub fn classic(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn input_length(&self) -> usize {
        self.input_length
    }

    pub fn output_length(&self) -> usize {
        self.output_length
    }

    /// The primitive root `w = exp(-2*pi*i/M)`.
    pub fn root(&self) -> Complex64 {
        let m = self.output_length as f64;
        Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI / m)
    }

    fn check_input(&self, x: &ComplexSignal) -> Result<()> {
        if x.len() != self.input_length {
            return Err(Error::DimensionMismatch(format!(
                "plan expects input length {}, got {}",
                self.input_length,
                x.len()
            )));
        }
        Ok(())
    }

    /// Forward transform `F x`.
    ///
    /// Uses the FFT with zero-padding when `M >= N` and direct evaluation
    /// otherwise; the two paths agree to 1e-10.
    pub fn forward(&self, x: &ComplexSignal) -> Result<ComplexSignal> {
        self.check_input(x)?;
        if self.output_length >= self.input_length {
            let mut buf = vec![Complex64::new(0.0, 0.0); self.output_length];
            buf[..x.len()].copy_from_slice(x.samples());
            self.fft.process(&mut buf);
            ComplexSignal::new(buf)
        } else {
            self.forward_direct(x)
        }
    }

    /// Direct `O(MN)` evaluation of the transform matrix; kept alongside the
    /// FFT path as a built-in oracle.
    pub fn forward_direct(&self, x: &ComplexSignal) -> Result<ComplexSignal> {
        self.check_input(x)?;
        let m = self.output_length;
        // table[t] = w^t for t in 0..m
        let table: Vec<Complex64> = (0..m)
            .map(|t| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * t as f64 / m as f64))
            .collect();
        let out = (0..m)
            .map(|n| {
                x.samples()
                    .iter()
                    .enumerate()
                    .map(|(k, &xk)| xk * table[(n * k) % m])
                    .sum()
            })
            .collect();
        ComplexSignal::new(out)
    }

    /// Adjoint `F* z` (length `N`), i.e. the first `N` entries of the
    /// unnormalized inverse FFT of `z`.
    pub fn adjoint(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        if z.len() != self.output_length {
            return Err(Error::DimensionMismatch(format!(
                "adjoint expects length {}, got {}",
                self.output_length,
                z.len()
            )));
        }
        let mut buf = z.to_vec();
        self.ifft.process(&mut buf);
        buf.truncate(self.input_length);
        Ok(buf)
    }

    /// Inverse transform for the square case: `F^{-1} = F*/N`.
    pub fn inverse(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.input_length != self.output_length {
            return Err(Error::InvalidParameter(
                "inverse is only defined for the square (classic) plan".into(),
            ));
        }
        let scale = 1.0 / self.output_length as f64;
        Ok(self.adjoint(z)?.into_iter().map(|c| c * scale).collect())
    }

    /// Scratch length required by the in-place helpers below.
    pub fn scratch_len(&self) -> usize {
        self.fft
            .get_inplace_scratch_len()
            .max(self.ifft.get_inplace_scratch_len())
    }

    /// In-place forward FFT over a length-`M` buffer (callers zero-pad).
    pub fn fft_in_place(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        self.fft.process_with_scratch(buf, scratch);
    }

    /// In-place unnormalized inverse FFT over a length-`M` buffer.
    pub fn ifft_in_place(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        self.ifft.process_with_scratch(buf, scratch);
    }
}

/// Entrywise modulus of the forward transform.
pub fn magnitude(plan: &DftPlan, x: &ComplexSignal) -> Result<MagnitudeMeasurements> {
    let spectrum = plan.forward(x)?;
    let scheme = if plan.output_length() == plan.input_length() {
        SchemeTag::Classic
    } else {
        SchemeTag::Oversampled { m: plan.output_length() }
    };
    Ok(MagnitudeMeasurements::new(
        spectrum.samples().iter().map(|c| c.norm()).collect(),
        scheme,
    ))
}

/// Short-time Fourier magnitudes: `R x N` grid with
/// `grid[m][n] = |sum_k x_k w_{mL-k} e^{-2 pi k n i / N}|` and
/// `R = ceil((N+W-1)/L)`. Window samples outside `0..W` are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct StftMeasurements {
    grid: Vec<Vec<f64>>,
    window: ComplexSignal,
    hop: usize,
}

impl StftMeasurements {
    pub fn grid(&self) -> &[Vec<f64>] {
        &self.grid
    }

    pub fn sections(&self) -> usize {
        self.grid.len()
    }

    pub fn window(&self) -> &ComplexSignal {
        &self.window
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    /// Root sum of squared entrywise differences between two grids.
    pub fn distance(&self, other: &StftMeasurements) -> f64 {
        grid_distance(&self.grid, &other.grid)
    }
}

pub(crate) fn grid_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    assert_eq!(a.len(), b.len(), "grid section counts differ");
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y) * (x - y)))
        .sum::<f64>()
        .sqrt()
}

/// Number of short-time sections for the given signal/window/hop sizes.
pub fn stft_sections(n: usize, window_len: usize, hop: usize) -> usize {
    (n + window_len - 1).div_ceil(hop)
}

pub fn stft_magnitude(
    x: &ComplexSignal,
    window: &ComplexSignal,
    hop: usize,
) -> Result<StftMeasurements> {
    if hop == 0 {
        return Err(Error::InvalidParameter("stft hop must be >= 1".into()));
    }
    let n = x.len();
    let w = window.len();
    let plan = DftPlan::classic(n)?;
    let sections = stft_sections(n, w, hop);
    let mut grid = Vec::with_capacity(sections);
    let mut masked = vec![Complex64::new(0.0, 0.0); n];
    for m in 0..sections {
        for (k, slot) in masked.iter_mut().enumerate() {
            // w_{mL-k}, zero outside 0..W
            let widx = m as i64 * hop as i64 - k as i64;
            *slot = if widx >= 0 && (widx as usize) < w {
                x[k] * window[widx as usize]
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        let row = plan.forward(&ComplexSignal::new(masked.clone())?)?;
        grid.push(row.samples().iter().map(|c| c.norm()).collect());
    }
    Ok(StftMeasurements { grid, window: window.clone(), hop })
}

/// FROG trace: `ceil(N/L) x N` grid of squared magnitudes
/// `grid[m][n] = |DFT_N(k -> x_k x_{k+mL})_n|^2`, with the product index
/// taken mod `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrogMeasurements {
    grid: Vec<Vec<f64>>,
    hop: usize,
}

impl FrogMeasurements {
    pub fn grid(&self) -> &[Vec<f64>] {
        &self.grid
    }

    pub fn sections(&self) -> usize {
        self.grid.len()
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    /// Root sum of squared entrywise differences between two traces.
    pub fn distance(&self, other: &FrogMeasurements) -> f64 {
        grid_distance(&self.grid, &other.grid)
    }
}

pub fn frog_trace(x: &ComplexSignal, hop: usize) -> Result<FrogMeasurements> {
    if hop == 0 {
        return Err(Error::InvalidParameter("frog hop must be >= 1".into()));
    }
    let n = x.len();
    let plan = DftPlan::classic(n)?;
    let sections = n.div_ceil(hop);
    let mut grid = Vec::with_capacity(sections);
    for m in 0..sections {
        let shift = (m * hop) % n;
        let product: Vec<Complex64> = (0..n).map(|k| x[k] * x[(k + shift) % n]).collect();
        let row = plan.forward(&ComplexSignal::new(product)?)?;
        grid.push(row.samples().iter().map(|c| c.norm_sqr()).collect());
    }
    Ok(FrogMeasurements { grid, hop })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::BinarySignal;

    fn csig(values: &[f64]) -> ComplexSignal {
        ComplexSignal::from_real(values).unwrap()
    }

    #[test]
    fn delta_transforms_to_all_ones() {
        for m in [5usize, 8, 12] {
            let plan = DftPlan::new(5, m).unwrap();
            let spec = plan.forward(&ComplexSignal::delta(0, 5)).unwrap();
            for k in 0..m {
                assert!((spec[k] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn ones_transform_to_n_delta() {
        let n = 9;
        let plan = DftPlan::classic(n).unwrap();
        let spec = plan.forward(&ComplexSignal::ones(n)).unwrap();
        assert!((spec[0] - Complex64::new(n as f64, 0.0)).norm() < 1e-10);
        for k in 1..n {
            assert!(spec[k].norm() < 1e-10);
        }
    }

    #[test]
    fn fft_path_matches_direct_oracle() {
        let x = csig(&[0.3, -1.2, 2.0, 0.7, -0.5, 1.1, 0.9]);
        let plan = DftPlan::new(7, 12).unwrap();
        let fast = plan.forward(&x).unwrap();
        let slow = plan.forward_direct(&x).unwrap();
        for k in 0..12 {
            assert!((fast[k] - slow[k]).norm() < 1e-10);
        }
    }

    #[test]
    fn square_plan_is_unitary_up_to_scaling() {
        let n = 16;
        let x = csig(&[
            0.1, 0.9, -0.4, 0.2, 1.3, -2.0, 0.0, 0.5, 0.8, -0.7, 0.25, -0.3, 1.0, 0.6, -1.4, 2.2,
        ]);
        let plan = DftPlan::classic(n).unwrap();
        let spec = plan.forward(&x).unwrap();
        let back = plan.inverse(spec.samples()).unwrap();
        for k in 0..n {
            assert!((back[k] - x[k]).norm() < 1e-10);
        }
    }

    #[test]
    fn magnitude_of_delta_is_all_ones() {
        let n = 10;
        let plan = DftPlan::classic(n).unwrap();
        for k in 0..n {
            let b = magnitude(&plan, &ComplexSignal::delta(k, n)).unwrap();
            assert_eq!(*b.scheme(), SchemeTag::Classic);
            for &v in b.values() {
                assert!((v - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn flip_pair_has_equal_magnitudes() {
        // complement-flip pair with support N/2
        let x = csig(&[1., 1., 1., 1., 0., 0., 1., 0., 0., 0.]);
        let y = csig(&[0., 0., 0., 0., 1., 1., 0., 1., 1., 1.]);
        let plan = DftPlan::classic(10).unwrap();
        let bx = magnitude(&plan, &x).unwrap();
        let by = magnitude(&plan, &y).unwrap();
        for (a, b) in bx.values().iter().zip(by.values()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn length_11_pair_matches_at_m_12() {
        let x = csig(&[0., 0., 0., 0., 1., 0., 1., 0., 0., 1., 1.]);
        let y = csig(&[0., 0., 0., 1., 0., 0., 0., 1., 0., 1., 1.]);
        let plan = DftPlan::new(11, 12).unwrap();
        let bx = magnitude(&plan, &x).unwrap();
        let by = magnitude(&plan, &y).unwrap();
        assert_eq!(*bx.scheme(), SchemeTag::Oversampled { m: 12 });
        for (a, b) in bx.values().iter().zip(by.values()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn stft_zero_signal_gives_zero_grid() {
        let z = ComplexSignal::zeros(8);
        let s = stft_magnitude(&z, &ComplexSignal::ones(3), 2).unwrap();
        assert_eq!(s.sections(), stft_sections(8, 3, 2));
        for row in s.grid() {
            for &v in row {
                assert_eq!(v, 0.0);
            }
        }
    }

    /// Direct double-sum STFT oracle straight from the definition.
    fn stft_oracle(x: &ComplexSignal, w: &ComplexSignal, hop: usize) -> Vec<Vec<f64>> {
        let n = x.len() as i64;
        let sections = stft_sections(x.len(), w.len(), hop);
        (0..sections as i64)
            .map(|m| {
                (0..n)
                    .map(|freq| {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for k in 0..n {
                            let widx = m * hop as i64 - k;
                            if widx >= 0 && widx < w.len() as i64 {
                                let angle = -2.0 * std::f64::consts::PI * (k * freq) as f64 / n as f64;
                                acc += x[k as usize]
                                    * w[widx as usize]
                                    * Complex64::from_polar(1.0, angle);
                            }
                        }
                        acc.norm()
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn stft_matches_direct_oracle() {
        let x = csig(&[1., 0., 1., 1., 0., 0., 1., 0.]);
        for (w, hop) in [(8usize, 8usize), (3, 2), (5, 3)] {
            let win = ComplexSignal::ones(w);
            let got = stft_magnitude(&x, &win, hop).unwrap();
            let want = stft_oracle(&x, &win, hop);
            assert_eq!(got.sections(), want.len());
            for (rg, rw) in got.grid().iter().zip(&want) {
                for (a, b) in rg.iter().zip(rw) {
                    assert!((a - b).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn stft_distinguishes_one_bit_difference() {
        let x = csig(&[1., 0., 1., 1., 0., 0., 1., 0.]);
        let y = csig(&[1., 0., 1., 1., 0., 0., 0., 0.]);
        let win = ComplexSignal::ones(4);
        let sx = stft_magnitude(&x, &win, 2).unwrap();
        let sy = stft_magnitude(&y, &win, 2).unwrap();
        assert!(sx.distance(&sy) > 1e-6);
    }

    #[test]
    fn stft_rejects_zero_hop() {
        let x = csig(&[1., 0.]);
        assert!(stft_magnitude(&x, &ComplexSignal::ones(2), 0).is_err());
        assert!(frog_trace(&x, 0).is_err());
    }

    #[test]
    fn frog_pm_pair_has_identical_trace() {
        let x = csig(&[1., 1.]);
        let y = csig(&[1., -1.]);
        let tx = frog_trace(&x, 1).unwrap();
        let ty = frog_trace(&y, 1).unwrap();
        assert!(tx.distance(&ty) < 1e-12);
    }

    #[test]
    fn frog_zero_signal_gives_zero_trace() {
        let t = frog_trace(&ComplexSignal::zeros(6), 2).unwrap();
        for row in t.grid() {
            for &v in row {
                assert_eq!(v, 0.0);
            }
        }
    }

    /// Direct FROG oracle from the definition.
    fn frog_oracle(x: &ComplexSignal, hop: usize) -> Vec<Vec<f64>> {
        let n = x.len();
        (0..n.div_ceil(hop))
            .map(|m| {
                (0..n)
                    .map(|freq| {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for k in 0..n {
                            let angle = -2.0 * std::f64::consts::PI * (k * freq) as f64 / n as f64;
                            acc += x[k] * x[(k + m * hop) % n] * Complex64::from_polar(1.0, angle);
                        }
                        acc.norm_sqr()
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn frog_matches_direct_oracle() {
        let x = BinarySignal::new(vec![1, 0, 1, 1, 0, 0, 1, 0]).unwrap().to_complex();
        let got = frog_trace(&x, 2).unwrap();
        let want = frog_oracle(&x, 2);
        for (rg, rw) in got.grid().iter().zip(&want) {
            for (a, b) in rg.iter().zip(rw) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn frog_row_zero_is_squared_magnitude_for_binary() {
        let x = BinarySignal::new(vec![1, 0, 0, 1, 1, 0, 1]).unwrap().to_complex();
        let t = frog_trace(&x, 3).unwrap();
        let plan = DftPlan::classic(7).unwrap();
        let b = magnitude(&plan, &x).unwrap();
        for (got, bv) in t.grid()[0].iter().zip(b.values()) {
            assert!((got - bv * bv).abs() < 1e-10);
        }
    }
}
