//! Python extension module exposing the main phase-retrieval types and
//! operations: measurements, autocorrelation, the ADMM solver, the
//! denoising pipelines and the uniqueness oracles.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use binpr_core::ambiguity;
use binpr_core::autocorr;
use binpr_core::denoise::{self, DenoiseScheme, NoiseSpec, SnrReference};
use binpr_core::signal::{BinarySignal, ComplexSignal};
use binpr_core::solver;
use binpr_core::transforms::{self, DftPlan};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_binary(bits: Vec<u8>) -> PyResult<BinarySignal> {
    BinarySignal::new(bits).map_err(err)
}

/// Magnitudes of the M-point DFT of a real signal (M defaults to the
/// signal length).
#[pyfunction]
#[pyo3(signature = (values, m = None))]
fn dft_magnitude(values: Vec<f64>, m: Option<usize>) -> PyResult<Vec<f64>> {
    let x = ComplexSignal::from_real(&values).map_err(err)?;
    let plan = DftPlan::new(x.len(), m.unwrap_or(x.len())).map_err(err)?;
    Ok(transforms::magnitude(&plan, &x).map_err(err)?.values().to_vec())
}

/// Exact integer periodic autocorrelation of a binary signal.
#[pyfunction]
fn periodic_autocorrelation(bits: Vec<u8>) -> PyResult<Vec<u32>> {
    Ok(autocorr::periodic_autocorrelation_int(&to_binary(bits)?))
}

/// Lexicographically smallest representative of the shift x reflect orbit.
#[pyfunction]
fn canonical_form(bits: Vec<u8>) -> PyResult<Vec<u8>> {
    Ok(ambiguity::canonicalize(&to_binary(bits)?).representative.bits().to_vec())
}

/// All binary signals sharing the Fourier magnitudes of `bits`, by brute
/// force (lengths above `cap` are refused).
#[pyfunction]
#[pyo3(signature = (bits, cap = ambiguity::DEFAULT_ENUMERATION_CAP))]
fn enumerate_matching(bits: Vec<u8>, cap: usize) -> PyResult<Vec<Vec<u8>>> {
    let matches = ambiguity::enumerate_matching(&to_binary(bits)?, cap).map_err(err)?;
    Ok(matches.into_iter().map(|m| m.bits().to_vec()).collect())
}

/// Per-support uniqueness summary over every binary signal of length `n`:
/// rows of (support, num_classes, num_unique_classes).
#[pyfunction]
#[pyo3(signature = (n, mode = "classic", cap = ambiguity::DEFAULT_ENUMERATION_CAP))]
fn uniqueness_report(n: usize, mode: &str, cap: usize) -> PyResult<Vec<(usize, usize, usize)>> {
    let mode = match mode {
        "classic" => ambiguity::AmbiguityMode::Classic,
        "oversampled" => ambiguity::AmbiguityMode::Oversampled,
        other => return Err(PyValueError::new_err(format!("unknown mode '{other}'"))),
    };
    let report = ambiguity::uniqueness_report(n, mode, cap).map_err(err)?;
    Ok(report
        .rows
        .iter()
        .map(|r| (r.support, r.num_classes, r.num_unique_classes))
        .collect())
}

/// Result of a solver or denoising run.
#[pyclass]
#[derive(Clone)]
struct RecoveryResult {
    #[pyo3(get)]
    x_star: Vec<f64>,
    #[pyo3(get)]
    recovered_bits: Vec<u8>,
    #[pyo3(get)]
    residual: f64,
    #[pyo3(get)]
    iters: usize,
    #[pyo3(get)]
    success: bool,
}

#[pymethods]
impl RecoveryResult {
    fn __repr__(&self) -> String {
        format!(
            "RecoveryResult(success={}, residual={:.3e}, iters={})",
            self.success, self.residual, self.iters
        )
    }
}

fn params_from(rho1: f64, rho2: f64, max_iters: usize, seed: u64) -> solver::AdmmParams {
    solver::AdmmParams { rho1, rho2, max_iters, seed, ..solver::AdmmParams::default() }
}

/// Box-constrained ADMM solve of `min || |F_M x| - b ||^2` over `[0,1]^n`.
#[pyfunction]
#[pyo3(signature = (b, n, rho1 = 1e-5, rho2 = 1e-5, max_iters = 5000, seed = 0))]
fn admm_solve(
    b: Vec<f64>,
    n: usize,
    rho1: f64,
    rho2: f64,
    max_iters: usize,
    seed: u64,
) -> PyResult<RecoveryResult> {
    let scheme = if b.len() == n {
        transforms::SchemeTag::Classic
    } else {
        transforms::SchemeTag::Oversampled { m: b.len() }
    };
    let measurements = transforms::MagnitudeMeasurements::new(b, scheme);
    let params = params_from(rho1, rho2, max_iters, seed);
    let result = solver::admm_solve(&measurements, n, &params, None).map_err(err)?;
    let rounded = solver::round_to_binary(&result.x_star);
    Ok(RecoveryResult {
        recovered_bits: rounded.bits().to_vec(),
        success: result.residual < params.success_tol,
        x_star: result.x_star,
        residual: result.residual,
        iters: result.iters_used,
    })
}

/// One denoising trial: measure `bits`, add Gaussian noise at `snr_db`,
/// run the named scheme ("rounding", "naive", "rounding_oversampled",
/// "naive_oversampled"), and score against the clean measurements.
#[pyfunction]
#[pyo3(signature = (bits, snr_db, scheme = "rounding", seed = 0, m = None, measurement_referenced = true))]
fn denoise_trial(
    bits: Vec<u8>,
    snr_db: f64,
    scheme: &str,
    seed: u64,
    m: Option<usize>,
    measurement_referenced: bool,
) -> PyResult<RecoveryResult> {
    let truth = to_binary(bits)?;
    let scheme = DenoiseScheme::parse(scheme).map_err(err)?;
    let n = truth.len();
    let m = if scheme.is_oversampled() { m.unwrap_or(2 * n - 1) } else { n };
    let plan = DftPlan::new(n, m).map_err(err)?;
    let clean = transforms::magnitude(&plan, &truth.to_complex()).map_err(err)?;
    let reference = if measurement_referenced {
        SnrReference::Measurements
    } else {
        SnrReference::Signal
    };
    let noisy = denoise::add_noise(&clean, &truth, &NoiseSpec { snr_db, reference, seed });
    let params = params_from(1e-5, 1e-5, 5000, seed);
    let outcome = denoise::run_scheme(scheme, &noisy, n, &params, clean.values()).map_err(err)?;
    Ok(RecoveryResult {
        x_star: outcome.recovered.bits().iter().map(|&b| b as f64).collect(),
        recovered_bits: outcome.recovered.bits().to_vec(),
        residual: outcome.residual,
        iters: outcome.iters,
        success: outcome.success,
    })
}

#[pymodule]
fn binpr(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(dft_magnitude, m)?)?;
    m.add_function(wrap_pyfunction!(periodic_autocorrelation, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_form, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_matching, m)?)?;
    m.add_function(wrap_pyfunction!(uniqueness_report, m)?)?;
    m.add_function(wrap_pyfunction!(admm_solve, m)?)?;
    m.add_function(wrap_pyfunction!(denoise_trial, m)?)?;
    m.add_class::<RecoveryResult>()?;
    Ok(())
}
