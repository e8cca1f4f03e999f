//! One-dimensional Fourier phase retrieval for binary signals.
//!
//! The crate provides the measurement operators (classic/oversampled DFT,
//! STFT, FROG trace), autocorrelation identities, a box-constrained ADMM
//! solver, trivial-ambiguity canonicalization with brute-force uniqueness
//! oracles, rounding-based denoising pipelines, and a Monte-Carlo experiment
//! harness producing sparsity x SNR success-rate grids.

pub mod ambiguity;
pub mod autocorr;
pub mod denoise;
pub mod error;
pub mod grid;
pub mod io;
pub mod signal;
pub mod solver;
pub mod theorems;
pub mod transforms;

pub use error::{Error, Result};
pub use signal::{BinarySignal, BoxSignal, ComplexSignal};
