//! `binpr`: measurement generation, single solves, denoising runs, theorem
//! checks, uniqueness scans and the sparsity x SNR Monte-Carlo grids.
//!
//! Exit codes: 0 on success, 1 on a counterexample or runtime failure,
//! 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use binpr_core::ambiguity::{uniqueness_report, AmbiguityMode, DEFAULT_ENUMERATION_CAP};
use binpr_core::denoise::{add_noise, run_scheme, DenoiseScheme, NoiseSpec, SnrReference};
use binpr_core::grid::{run_grid, run_param_study, ExperimentGrid, ParamStudy};
use binpr_core::io;
use binpr_core::signal::ComplexSignal;
use binpr_core::solver::{admm_solve, AdmmParams, SolveResult};
use binpr_core::theorems::{
    check_box_to_binary, check_extension, check_pm1_box, check_unimodular_hull, ExtensionScheme,
    FalsifyConfig, TheoremCheckReport,
};
use binpr_core::transforms::{frog_trace, magnitude, stft_magnitude, DftPlan, SchemeTag};

#[derive(Parser)]
#[command(name = "binpr", version, about = "Fourier phase retrieval for binary signals")]
struct Cli {
    /// Worker threads for grids and checks (default: hardware parallelism;
    /// the BINPR_THREADS environment variable overrides this flag).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute magnitude measurements of a signal file.
    Measure(MeasureArgs),
    /// Run the box-constrained ADMM solver on measurement data.
    Solve(SolveArgs),
    /// Run one denoising trial against a ground-truth signal.
    Denoise(DenoiseArgs),
    /// Run the sparsity x SNR success-rate grid.
    Grid(GridArgs),
    /// Run the rho1 x rho2 parameter study.
    Params(ParamsArgs),
    /// Exhaustive uniqueness scan over all binary signals of a length.
    Ambiguities(AmbiguitiesArgs),
    /// Run the relaxation-theorem check suite.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureScheme {
    Classic,
    Oversampled,
    Stft,
    Frog,
}

#[derive(Args)]
struct MeasureArgs {
    /// Signal file: complex ("re im" per line) or binary (single 0/1 line).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "classic")]
    scheme: MeasureScheme,
    /// Measurement count for the oversampled scheme.
    #[arg(long)]
    m: Option<usize>,
    /// Window length for the STFT scheme.
    #[arg(long)]
    window_len: Option<usize>,
    /// Hop for the STFT/FROG schemes.
    #[arg(long)]
    hop: Option<usize>,
    /// Output CSV (index,value); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolverFlags {
    #[arg(long, default_value_t = 1e-5)]
    rho1: f64,
    #[arg(long, default_value_t = 1e-5)]
    rho2: f64,
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    /// Relative x-change stopping tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

impl SolverFlags {
    fn params(&self, seed: u64) -> AdmmParams {
        AdmmParams {
            rho1: self.rho1,
            rho2: self.rho2,
            max_iters: self.max_iters,
            tol_primal: self.tol,
            seed,
            ..AdmmParams::default()
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Measurements CSV (index,value).
    #[arg(long)]
    measurements: PathBuf,
    /// Signal length to recover.
    #[arg(long)]
    n: usize,
    /// Treat the measurements as oversampled (M = row count).
    #[arg(long)]
    oversampled: bool,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random restarts; the best residual wins.
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    /// Output JSON file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DenoiseArgs {
    /// Ground-truth binary signal file.
    #[arg(long)]
    truth: PathBuf,
    #[arg(long, default_value = "rounding")]
    scheme: String,
    /// Noise level; "inf" disables noise.
    #[arg(long, default_value_t = f64::INFINITY)]
    snr_db: f64,
    /// Measurement count for oversampled schemes (default 2N-1).
    #[arg(long)]
    m: Option<usize>,
    /// Scale noise against the signal energy instead of the measurement
    /// energy.
    #[arg(long)]
    signal_referenced_noise: bool,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the recovered binary signal here.
    #[arg(long)]
    out_recovered: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = 50)]
    n: usize,
    /// Oversampled measurement count (default 2N-1).
    #[arg(long)]
    m: Option<usize>,
    /// Comma-separated support counts.
    #[arg(long, default_value = "1,2,3,4,5,6,7,8,9,10")]
    supports: String,
    /// Comma-separated SNR values in dB ("inf" allowed).
    #[arg(long, default_value = "36,32,28,24,20,16,12,8,4,0")]
    snrs: String,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Comma-separated schemes
    /// (rounding,naive,rounding_oversampled,naive_oversampled).
    #[arg(long, default_value = "rounding,naive")]
    schemes: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    signal_referenced_noise: bool,
    #[command(flatten)]
    solver: SolverFlags,
    /// Success-rate CSV output path.
    #[arg(long)]
    out: PathBuf,
    /// Optional per-trial CSV output.
    #[arg(long)]
    per_trial: Option<PathBuf>,
    /// Write one gnuplot-style rate matrix per scheme with this prefix.
    #[arg(long)]
    emit_gnuplot: Option<PathBuf>,
}

#[derive(Args)]
struct ParamsArgs {
    #[arg(long, default_value = "1e-6,1e-5,1e-4,1e-3,1e-2")]
    rho1_set: String,
    #[arg(long, default_value = "1e-6,1e-5,1e-4,1e-3,1e-2")]
    rho2_set: String,
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 5)]
    support: usize,
    #[arg(long, default_value_t = 16.0)]
    snr_db: f64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value = "rounding,naive")]
    schemes: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    signal_referenced_noise: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Classic,
    Oversampled,
}

#[derive(Args)]
struct AmbiguitiesArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "classic")]
    mode: ModeArg,
    /// Enumeration cap (lengths above it are refused).
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: usize,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum TheoremArg {
    Box,
    Pm1,
    Hull,
    Oversampled,
    Stft,
    Frog,
    FrogPm1,
}

#[derive(Args)]
struct CheckArgs {
    /// Run every theorem check.
    #[arg(long)]
    all: bool,
    /// Run a single theorem check.
    #[arg(long, value_enum)]
    theorem: Option<TheoremArg>,
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    /// Falsification restarts per theorem.
    #[arg(long, default_value_t = 2000)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON report output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = std::env::var("BINPR_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .or(cli.threads);
    if let Some(threads) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn emit(out: Option<&PathBuf>, contents: &str) -> binpr_core::Result<()> {
    match out {
        Some(path) => io::write_file(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn run(command: Command) -> binpr_core::Result<ExitCode> {
    match command {
        Command::Measure(args) => {
            let text = io::read_file(&args.input)?;
            let x = io::parse_signal_auto(&text)?;
            let n = x.len();
            let b = match args.scheme {
                MeasureScheme::Classic => magnitude(&DftPlan::classic(n)?, &x)?,
                MeasureScheme::Oversampled => {
                    let m = args.m.unwrap_or(2 * n - 1);
                    magnitude(&DftPlan::new(n, m)?, &x)?
                }
                MeasureScheme::Stft => {
                    let w = args.window_len.unwrap_or(n);
                    let hop = args.hop.unwrap_or(1);
                    let grid = stft_magnitude(&x, &ComplexSignal::ones(w), hop)?;
                    let flat: Vec<f64> = grid.grid().iter().flatten().copied().collect();
                    binpr_core::transforms::MagnitudeMeasurements::new(
                        flat,
                        SchemeTag::Stft { window_len: w, hop },
                    )
                }
                MeasureScheme::Frog => {
                    let hop = args.hop.unwrap_or(1);
                    let grid = frog_trace(&x, hop)?;
                    let flat: Vec<f64> = grid.grid().iter().flatten().copied().collect();
                    binpr_core::transforms::MagnitudeMeasurements::new(
                        flat,
                        SchemeTag::Frog { hop },
                    )
                }
            };
            emit(args.out.as_ref(), &io::format_measurements_csv(&b))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Solve(args) => {
            let text = io::read_file(&args.measurements)?;
            let scheme = if args.oversampled {
                let rows = text.lines().filter(|l| !l.trim().is_empty()).count() - 1;
                SchemeTag::Oversampled { m: rows }
            } else {
                SchemeTag::Classic
            };
            let b = io::parse_measurements_csv(&text, scheme)?;
            let mut best: Option<SolveResult> = None;
            for restart in 0..args.restarts.max(1) as u64 {
                let params = args.solver.params(args.seed + restart);
                let result = admm_solve(&b, args.n, &params, None)?;
                if best.as_ref().is_none_or(|cur| result.residual < cur.residual) {
                    best = Some(result);
                }
            }
            let best = best.expect("at least one restart");
            let json = serde_json::json!({
                "residual": best.residual,
                "iters": best.iters_used,
                "converged": best.converged,
                "x_star": best.x_star,
            });
            emit(args.out.as_ref(), &format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Denoise(args) => {
            let truth = io::parse_binary_signal(&io::read_file(&args.truth)?)?;
            let scheme = DenoiseScheme::parse(&args.scheme)?;
            let n = truth.len();
            let m = if scheme.is_oversampled() { args.m.unwrap_or(2 * n - 1) } else { n };
            let plan = DftPlan::new(n, m)?;
            let clean = magnitude(&plan, &truth.to_complex())?;
            let reference = if args.signal_referenced_noise {
                SnrReference::Signal
            } else {
                SnrReference::Measurements
            };
            let spec = NoiseSpec { snr_db: args.snr_db, reference, seed: args.seed };
            let noisy = add_noise(&clean, &truth, &spec);
            let outcome =
                run_scheme(scheme, &noisy, n, &args.solver.params(args.seed), clean.values())?;
            println!("scheme,n,m,support,snr_db,trial,success,residual,iters");
            println!(
                "{},{},{},{},{},0,{},{},{}",
                outcome.scheme,
                n,
                m,
                truth.support_count(),
                args.snr_db,
                outcome.success as u8,
                outcome.residual,
                outcome.iters
            );
            if let Some(path) = args.out_recovered {
                io::write_file(&path, &io::format_binary_signal(&outcome.recovered))?;
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Grid(args) => {
            let supports = parse_usize_list(&args.supports)?;
            let snrs = parse_f64_list(&args.snrs)?;
            let schemes = parse_schemes(&args.schemes)?;
            let n = args.n;
            let grid = ExperimentGrid {
                n,
                m: args.m.unwrap_or(2 * n - 1),
                supports,
                snrs_db: snrs,
                trials: args.trials,
                schemes: schemes.clone(),
                master_seed: args.seed,
                params: args.solver.params(0),
                noise_reference: if args.signal_referenced_noise {
                    SnrReference::Signal
                } else {
                    SnrReference::Measurements
                },
            };
            let result = run_grid(&grid)?;
            io::write_file(&args.out, &result.rates_csv())?;
            if let Some(path) = args.per_trial {
                io::write_file(&path, &result.records_csv())?;
            }
            if let Some(prefix) = args.emit_gnuplot {
                for scheme in &schemes {
                    let path = prefix.with_extension(format!("{scheme}.dat"));
                    io::write_file(&path, &result.gnuplot_matrix(*scheme))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Params(args) => {
            let study = ParamStudy {
                n: args.n,
                m: args.m.unwrap_or(2 * args.n - 1),
                support: args.support,
                snr_db: args.snr_db,
                trials: args.trials,
                schemes: parse_schemes(&args.schemes)?,
                rho1_values: parse_f64_list(&args.rho1_set)?,
                rho2_values: parse_f64_list(&args.rho2_set)?,
                master_seed: args.seed,
                base_params: AdmmParams::default(),
                noise_reference: if args.signal_referenced_noise {
                    SnrReference::Signal
                } else {
                    SnrReference::Measurements
                },
            };
            let result = run_param_study(&study)?;
            io::write_file(&args.out, &result.csv())?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Ambiguities(args) => {
            let mode = match args.mode {
                ModeArg::Classic => AmbiguityMode::Classic,
                ModeArg::Oversampled => AmbiguityMode::Oversampled,
            };
            let report = uniqueness_report(args.n, mode, args.cap)?;
            emit(args.out.as_ref(), &io::format_uniqueness_csv(&report))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Check(args) => {
            let cfg = FalsifyConfig {
                restarts: args.restarts,
                seed: args.seed,
                ..FalsifyConfig::default()
            };
            let n = args.n_max;
            let mut reports: Vec<TheoremCheckReport> = Vec::new();
            let selected = |t: TheoremArg| args.all || args.theorem == Some(t);
            if !args.all && args.theorem.is_none() {
                return Err(binpr_core::Error::InvalidParameter(
                    "pass --all or --theorem <name>".into(),
                ));
            }
            if selected(TheoremArg::Box) {
                reports.push(check_box_to_binary(n, 0.0, 1.0, &cfg)?);
            }
            if selected(TheoremArg::Pm1) {
                reports.push(check_pm1_box(n, &cfg)?);
            }
            if selected(TheoremArg::Hull) {
                reports.push(check_unimodular_hull(4, 1.0, n.min(8), 200, cfg.seed)?);
            }
            if selected(TheoremArg::Oversampled) {
                reports.push(check_extension(
                    ExtensionScheme::Oversampled { m: 2 * n - 1 },
                    n,
                    &cfg,
                )?);
            }
            if selected(TheoremArg::Stft) {
                reports.push(check_extension(
                    ExtensionScheme::Stft { window_len: 3.min(n), hop: 2 },
                    n,
                    &cfg,
                )?);
            }
            if selected(TheoremArg::Frog) {
                reports.push(check_extension(ExtensionScheme::Frog { hop: 2 }, n, &cfg)?);
            }
            if selected(TheoremArg::FrogPm1) {
                reports.push(check_extension(
                    ExtensionScheme::FrogPm1 { hop: 1 },
                    n.min(10),
                    &cfg,
                )?);
            }
            let all_passed = reports.iter().all(|r| r.passed());
            let json = serde_json::to_string_pretty(&reports).unwrap();
            emit(args.out.as_ref(), &format!("{json}\n"))?;
            for r in &reports {
                eprintln!(
                    "{}: {} (exhaustive {}, restarts {}, counterexamples {})",
                    r.theorem,
                    if r.passed() { "pass" } else { "FAIL" },
                    r.exhaustive_checked,
                    r.falsification_restarts,
                    r.counterexamples
                );
            }
            Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn parse_usize_list(text: &str) -> binpr_core::Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| binpr_core::Error::Parse(format!("bad integer '{t}': {e}")))
        })
        .collect()
}

fn parse_f64_list(text: &str) -> binpr_core::Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            if t.eq_ignore_ascii_case("inf") {
                Ok(f64::INFINITY)
            } else {
                t.parse::<f64>()
                    .map_err(|e| binpr_core::Error::Parse(format!("bad number '{t}': {e}")))
            }
        })
        .collect()
}

fn parse_schemes(text: &str) -> binpr_core::Result<Vec<DenoiseScheme>> {
    text.split(',').map(|t| DenoiseScheme::parse(t.trim())).collect()
}
