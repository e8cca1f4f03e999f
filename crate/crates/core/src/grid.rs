//! Monte-Carlo experiment harness: sparsity x SNR success-rate grids and
//! the rho parameter study.
//!
//! Reproducibility contract: every trial derives its own RNG streams from
//! `(master seed, measurement-scheme group, support, snr, trial index)`, so
//! identical configurations yield identical CSV bytes, and adding schemes
//! or cells never perturbs the trials of existing ones. The rounding and
//! naive pipelines of the same measurement scheme intentionally share
//! streams: they see the same ground truth, noise and solver phases, which
//! keeps their per-cell comparison paired (and makes them coincide exactly
//! at infinite SNR).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::denoise::{
    add_noise, run_scheme, DenoiseScheme, NoiseSpec, SnrReference,
};
use crate::autocorr::{periodic_autocorrelation_int, regular_autocorrelation_int};
use crate::error::{Error, Result};
use crate::signal::BinarySignal;
use crate::solver::AdmmParams;
use crate::transforms::{magnitude, DftPlan};

/// Experiment design for one grid run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentGrid {
    pub n: usize,
    /// Measurement count for oversampled schemes (classic schemes always
    /// take `n` measurements).
    pub m: usize,
    pub supports: Vec<usize>,
    pub snrs_db: Vec<f64>,
    pub trials: usize,
    pub schemes: Vec<DenoiseScheme>,
    pub master_seed: u64,
    pub params: AdmmParams,
    pub noise_reference: SnrReference,
}

impl ExperimentGrid {
    /// The experiment defaults: supports 1..=10, SNR 36,32,...,0 dB,
    /// measurement-referenced noise.
    pub fn new(n: usize, schemes: Vec<DenoiseScheme>) -> Self {
        Self {
            n,
            m: 2 * n - 1,
            supports: (1..=10).collect(),
            snrs_db: (0..10).map(|i| 36.0 - 4.0 * i as f64).collect(),
            trials: 1000,
            schemes,
            master_seed: 0,
            params: AdmmParams::default(),
            noise_reference: SnrReference::Measurements,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.supports.is_empty() || self.snrs_db.is_empty() || self.schemes.is_empty() {
            return Err(Error::InvalidParameter(
                "supports, snrs and schemes must be nonempty".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("need at least one trial".into()));
        }
        if self.supports.iter().any(|&s| s > self.n) {
            return Err(Error::InvalidParameter("support count exceeds the signal length".into()));
        }
        if self.schemes.iter().any(|s| s.is_oversampled()) && self.m < 2 * self.n - 1 {
            return Err(Error::Underdetermined { m: self.m, n: self.n });
        }
        Ok(())
    }
}

/// One trial's outcome row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialRecord {
    pub scheme: DenoiseScheme,
    pub n: usize,
    pub m: usize,
    pub support: usize,
    pub snr_db: f64,
    pub trial: usize,
    pub success: bool,
    pub residual: f64,
    pub iters: usize,
    /// Whether the rounding step reproduced the true integer
    /// autocorrelation (rounding schemes only).
    pub autocorr_exact: Option<bool>,
}

/// Aggregated success rate of one (scheme, support, snr) cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellRate {
    pub scheme: DenoiseScheme,
    pub support: usize,
    pub snr_db: f64,
    pub successes: usize,
    pub trials: usize,
    pub rate: f64,
    /// Fraction of trials whose rounding step was exact (rounding schemes).
    pub autocorr_exact_rate: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridResult {
    pub config: ExperimentGrid,
    pub cells: Vec<CellRate>,
    pub records: Vec<TrialRecord>,
}

const GOLDEN: u64 = 0x9e3779b97f4a7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn mix(seed: u64, value: u64) -> u64 {
    splitmix64(seed ^ value.wrapping_mul(GOLDEN))
}

/// Deterministic per-trial stream: hash of master seed, measurement-scheme
/// group, support, snr and trial index.
pub fn trial_stream(
    master_seed: u64,
    scheme: DenoiseScheme,
    support: usize,
    snr_db: f64,
    trial: usize,
) -> u64 {
    let group = if scheme.is_oversampled() { 1u64 } else { 0u64 };
    let mut s = splitmix64(master_seed);
    s = mix(s, group);
    s = mix(s, support as u64);
    s = mix(s, snr_db.to_bits());
    mix(s, trial as u64)
}

/// Uniform random binary signal with exactly `support` ones.
pub fn sample_binary_with_support(n: usize, support: usize, seed: u64) -> BinarySignal {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    assert!(support <= n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices: Vec<usize> = (0..n).collect();
    // partial Fisher-Yates: the first `support` entries become the support
    for i in 0..support {
        let j = rng.gen_range(i..n);
        indices.swap(i, j);
    }
    let mut bits = vec![0u8; n];
    for &k in &indices[..support] {
        bits[k] = 1;
    }
    BinarySignal::new(bits).expect("bits valid")
}

fn run_trial(
    grid: &ExperimentGrid,
    plan_classic: &DftPlan,
    plan_oversampled: Option<&DftPlan>,
    scheme: DenoiseScheme,
    support: usize,
    snr_db: f64,
    trial: usize,
) -> Result<TrialRecord> {
    let stream = trial_stream(grid.master_seed, scheme, support, snr_db, trial);
    let signal_seed = mix(stream, 1);
    let noise_seed = mix(stream, 2);
    let solver_seed = mix(stream, 3);

    let x_true = sample_binary_with_support(grid.n, support, signal_seed);
    let (plan, m) = if scheme.is_oversampled() {
        (plan_oversampled.expect("validated"), grid.m)
    } else {
        (plan_classic, grid.n)
    };
    let clean = magnitude(plan, &x_true.to_complex())?;
    let noise = NoiseSpec { snr_db, reference: grid.noise_reference, seed: noise_seed };
    let noisy = add_noise(&clean, &x_true, &noise);
    let params = grid.params.clone().with_seed(solver_seed);
    let outcome = run_scheme(scheme, &noisy, grid.n, &params, clean.values())?;

    let autocorr_exact = outcome.rounded_autocorr.as_ref().map(|rounded| {
        let truth: Vec<i64> = if scheme.is_oversampled() {
            regular_autocorrelation_int(&x_true).iter().map(|&c| c as i64).collect()
        } else {
            periodic_autocorrelation_int(&x_true).iter().map(|&c| c as i64).collect()
        };
        rounded == &truth
    });

    Ok(TrialRecord {
        scheme,
        n: grid.n,
        m,
        support,
        snr_db,
        trial,
        success: outcome.success,
        residual: outcome.residual,
        iters: outcome.iters,
        autocorr_exact,
    })
}

/// Runs the full grid; trials dispatch to the rayon pool and aggregate
/// deterministically regardless of completion order.
pub fn run_grid(grid: &ExperimentGrid) -> Result<GridResult> {
    grid.validate()?;
    let plan_classic = DftPlan::classic(grid.n)?;
    let plan_oversampled = if grid.schemes.iter().any(|s| s.is_oversampled()) {
        Some(DftPlan::new(grid.n, grid.m)?)
    } else {
        None
    };

    let mut cells = Vec::new();
    let mut records = Vec::new();
    for &scheme in &grid.schemes {
        for &support in &grid.supports {
            for &snr_db in &grid.snrs_db {
                let cell_records: Vec<TrialRecord> = (0..grid.trials)
                    .into_par_iter()
                    .map(|trial| {
                        run_trial(
                            grid,
                            &plan_classic,
                            plan_oversampled.as_ref(),
                            scheme,
                            support,
                            snr_db,
                            trial,
                        )
                    })
                    .collect::<Result<Vec<_>>>()?;
                let successes = cell_records.iter().filter(|r| r.success).count();
                let exact: Vec<bool> =
                    cell_records.iter().filter_map(|r| r.autocorr_exact).collect();
                let autocorr_exact_rate = if exact.is_empty() {
                    None
                } else {
                    Some(exact.iter().filter(|&&e| e).count() as f64 / exact.len() as f64)
                };
                cells.push(CellRate {
                    scheme,
                    support,
                    snr_db,
                    successes,
                    trials: grid.trials,
                    rate: successes as f64 / grid.trials as f64,
                    autocorr_exact_rate,
                });
                records.extend(cell_records);
            }
        }
    }
    Ok(GridResult { config: grid.clone(), cells, records })
}

impl GridResult {
    pub fn cell(&self, scheme: DenoiseScheme, support: usize, snr_db: f64) -> Option<&CellRate> {
        self.cells.iter().find(|c| {
            c.scheme == scheme
                && c.support == support
                && (c.snr_db == snr_db || (c.snr_db - snr_db).abs() < 1e-12)
        })
    }

    pub fn rate(&self, scheme: DenoiseScheme, support: usize, snr_db: f64) -> f64 {
        self.cell(scheme, support, snr_db).map(|c| c.rate).unwrap_or(f64::NAN)
    }

    /// Success-rate heatmap in CSV form: `support,snr_db,scheme,rate,trials`.
    pub fn rates_csv(&self) -> String {
        let mut out = String::from("support,snr_db,scheme,rate,trials\n");
        for cell in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                cell.support, cell.snr_db, cell.scheme, cell.rate, cell.trials
            ));
        }
        out
    }

    /// Per-trial rows:
    /// `scheme,n,m,support,snr_db,trial,success,residual,iters`.
    pub fn records_csv(&self) -> String {
        let mut out = String::from("scheme,n,m,support,snr_db,trial,success,residual,iters\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.scheme,
                r.n,
                r.m,
                r.support,
                r.snr_db,
                r.trial,
                r.success as u8,
                r.residual,
                r.iters
            ));
        }
        out
    }

    /// Rate matrix (rows = supports, columns = snrs) for external plotting.
    pub fn gnuplot_matrix(&self, scheme: DenoiseScheme) -> String {
        let mut out = String::new();
        for &support in &self.config.supports {
            let row: Vec<String> = self
                .config
                .snrs_db
                .iter()
                .map(|&snr| format!("{}", self.rate(scheme, support, snr)))
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Monotonicity audit for one scheme: success rates should not increase
    /// with support (at fixed SNR) nor decrease with SNR (at fixed support)
    /// beyond `slack`. Returns human-readable violations.
    pub fn monotonicity_violations(&self, scheme: DenoiseScheme, slack: f64) -> Vec<String> {
        let mut violations = Vec::new();
        let supports = &self.config.supports;
        let snrs = &self.config.snrs_db;
        for (i, &s) in supports.iter().enumerate() {
            for &snr in snrs {
                if i + 1 < supports.len() {
                    let here = self.rate(scheme, s, snr);
                    let denser = self.rate(scheme, supports[i + 1], snr);
                    if denser > here + slack {
                        violations.push(format!(
                            "rate({},{snr}dB) = {denser:.3} exceeds rate({s},{snr}dB) = {here:.3}",
                            supports[i + 1]
                        ));
                    }
                }
            }
        }
        for &s in supports {
            for (j, &snr) in snrs.iter().enumerate() {
                if j + 1 < snrs.len() {
                    // snrs are listed descending
                    let high = self.rate(scheme, s, snr);
                    let low = self.rate(scheme, s, snrs[j + 1]);
                    if low > high + slack {
                        violations.push(format!(
                            "rate({s},{}dB) = {low:.3} exceeds rate({s},{snr}dB) = {high:.3}",
                            snrs[j + 1]
                        ));
                    }
                }
            }
        }
        violations
    }
}

/// The rho1 x rho2 parameter study on a fixed (support, snr) cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamStudy {
    pub n: usize,
    pub m: usize,
    pub support: usize,
    pub snr_db: f64,
    pub trials: usize,
    pub schemes: Vec<DenoiseScheme>,
    pub rho1_values: Vec<f64>,
    pub rho2_values: Vec<f64>,
    pub master_seed: u64,
    pub base_params: AdmmParams,
    pub noise_reference: SnrReference,
}

impl ParamStudy {
    /// The reported sweep design: rho in 1e-6..1e-2, SNR 16 dB, support 5,
    /// length 50.
    pub fn reported_design(trials: usize, master_seed: u64) -> Self {
        let rhos: Vec<f64> = (0..5).map(|i| 10f64.powi(-6 + i)).collect();
        Self {
            n: 50,
            m: 99,
            support: 5,
            snr_db: 16.0,
            trials,
            schemes: vec![DenoiseScheme::Rounding, DenoiseScheme::Naive],
            rho1_values: rhos.clone(),
            rho2_values: rhos,
            master_seed,
            base_params: AdmmParams::default(),
            noise_reference: SnrReference::Measurements,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamStudyResult {
    pub study: ParamStudy,
    /// `rates[scheme_idx][i][j]` = success rate at `(rho1_values[i],
    /// rho2_values[j])`.
    pub rates: Vec<Vec<Vec<f64>>>,
}

impl ParamStudyResult {
    pub fn rate(&self, scheme: DenoiseScheme, i: usize, j: usize) -> f64 {
        let idx = self
            .study
            .schemes
            .iter()
            .position(|&s| s == scheme)
            .expect("scheme present");
        self.rates[idx][i][j]
    }

    /// CSV: `rho1,rho2,scheme,rate,trials`.
    pub fn csv(&self) -> String {
        let mut out = String::from("rho1,rho2,scheme,rate,trials\n");
        for (s_idx, &scheme) in self.study.schemes.iter().enumerate() {
            for (i, &r1) in self.study.rho1_values.iter().enumerate() {
                for (j, &r2) in self.study.rho2_values.iter().enumerate() {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        r1, r2, scheme, self.rates[s_idx][i][j], self.study.trials
                    ));
                }
            }
        }
        out
    }
}

/// Runs the parameter sweep; trials reuse the same per-trial streams across
/// rho cells, so rate differences across the sweep reflect the parameters,
/// not resampling.
pub fn run_param_study(study: &ParamStudy) -> Result<ParamStudyResult> {
    let mut rates =
        vec![
            vec![vec![0.0; study.rho2_values.len()]; study.rho1_values.len()];
            study.schemes.len()
        ];
    for (i, &rho1) in study.rho1_values.iter().enumerate() {
        for (j, &rho2) in study.rho2_values.iter().enumerate() {
            let grid = ExperimentGrid {
                n: study.n,
                m: study.m,
                supports: vec![study.support],
                snrs_db: vec![study.snr_db],
                trials: study.trials,
                schemes: study.schemes.clone(),
                master_seed: study.master_seed,
                params: AdmmParams { rho1, rho2, ..study.base_params.clone() },
                noise_reference: study.noise_reference,
            };
            let result = run_grid(&grid)?;
            for (s_idx, &scheme) in study.schemes.iter().enumerate() {
                rates[s_idx][i][j] = result.rate(scheme, study.support, study.snr_db);
            }
        }
    }
    Ok(ParamStudyResult { study: study.clone(), rates })
}
