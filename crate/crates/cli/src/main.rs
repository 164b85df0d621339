//! decay-cert: decay-rate certification for u'' + Du' + Au = 0.
//!
//! Exit codes: 0 all checks pass, 2 certificate refused (delta <= 0),
//! 1 violation or error. Nonzero exits print a machine-parseable failure
//! object unless a full report was already produced.

mod pipeline;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use decay_cert_core::error::CertError;
use decay_cert_core::models::ModelSpec;
use decay_cert_core::mtx;
use decay_cert_core::rate_bounds::{omega_theta, theta_star};
use decay_cert_core::report::FailureReport;
use decay_cert_core::semigroup::{decay_curve, default_time_grid, solve_cauchy};
use decay_cert_core::constants::compute_constants;
use decay_cert_core::linalg::CVec;

use pipeline::{
    decay_csv, eigenvalues_csv, load_system, regions_csv, run_pipeline, sweep_csv, time_grid,
    trajectory_csv, InputSource, PipelineOptions,
};

#[derive(Parser)]
#[command(name = "decay-cert", version, about = "Decay-rate certificates for damped second-order systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Matrix Market file with the stiffness matrix A
    #[arg(long, value_name = "FILE")]
    matrix_a: Option<PathBuf>,
    /// Matrix Market file with the damping matrix D
    #[arg(long, value_name = "FILE")]
    matrix_d: Option<PathBuf>,
    /// Generated system, e.g. scalar:4,4,0 or wave1d:8,0,1,0 or
    /// random_sectorial:8,42,0.1,0.5
    #[arg(long, value_name = "SPEC", conflicts_with_all = ["matrix_a", "matrix_d"])]
    model: Option<String>,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Metric parameter theta (default: the optimal theta*)
    #[arg(long)]
    theta: Option<f64>,
    /// Sector intercept b; repeatable (default: 0, omega/2, omega)
    #[arg(long = "b", value_name = "B")]
    b_values: Vec<f64>,
    /// Random vectors per sampled check (0 disables sampling)
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Seed for all randomized checks
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative tolerance for eigenvalue-level checks
    #[arg(long, default_value_t = 1e-8)]
    tol_eig: f64,
    /// Tolerance for sampled quadratic-form margins
    #[arg(long, default_value_t = 1e-9)]
    tol_form: f64,
    /// Output file (default: stdout)
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Suppress the timestamp and wall-clock fields for byte-reproducible
    /// output
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: constants, certificate, spectrum, forms, decay
    Certify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Decay-curve horizon (default 10/omega)
        #[arg(long)]
        t_max: Option<f64>,
        /// Number of decay-curve samples
        #[arg(long, default_value_t = 64)]
        t_points: usize,
    },
    /// Eigenvalues and inclusion checks only; optional plot CSVs
    Spectrum {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Write PREFIX.eigenvalues.csv and PREFIX.regions.csv
        #[arg(long, value_name = "PREFIX")]
        csv: Option<PathBuf>,
    },
    /// Semigroup decay curve, or a trajectory when --u0/--u1 are given
    Decay {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 64)]
        t_points: usize,
        /// Initial position u(0) (Matrix Market vector)
        #[arg(long, value_name = "FILE")]
        u0: Option<PathBuf>,
        /// Initial velocity u'(0) (Matrix Market vector)
        #[arg(long, value_name = "FILE")]
        u1: Option<PathBuf>,
        /// Output format
        #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
        format: String,
    },
    /// Generate a model system and write its matrices
    Model {
        /// Model description, e.g. wave1d:16,0,1,0.5
        #[arg(long, value_name = "SPEC")]
        model: String,
        /// Output file for A
        #[arg(long, value_name = "FILE")]
        out_a: PathBuf,
        /// Output file for D
        #[arg(long, value_name = "FILE")]
        out_d: PathBuf,
    },
    /// CSV scan of omega_theta and M_{theta,0} over a theta range
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        /// Smallest theta (default theta*/1000)
        #[arg(long)]
        theta_min: Option<f64>,
        /// Largest theta (default theta* x 1000)
        #[arg(long)]
        theta_max: Option<f64>,
        /// Number of log-spaced points
        #[arg(long, default_value_t = 1001)]
        theta_points: usize,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

fn error_kind(err: &CertError) -> &'static str {
    match err {
        CertError::NonHermitian { .. } => "non_hermitian",
        CertError::NotPositiveDefinite { .. } => "not_positive_definite",
        CertError::NotAccretive { .. } => "not_accretive",
        CertError::DimensionMismatch(_) => "dimension_mismatch",
        CertError::UnsupportedScale(_) => "unsupported_scale",
        CertError::SectorUndefined => "sector_undefined",
        CertError::NonPositiveDelta(_) => "non_positive_delta",
        CertError::InvalidIntercept { .. } => "invalid_intercept",
        CertError::InvalidParameter(_) => "invalid_parameter",
        CertError::EigFailure => "eigensolver_failure",
        CertError::EnvelopeViolation { .. } => "envelope_violation",
        CertError::MtxParse { .. } => "matrix_market_parse",
        CertError::Io(_) => "io",
    }
}

fn emit(target: &Option<PathBuf>, text: &str) -> Result<(), CertError> {
    match target {
        Some(path) => fs::write(path, text).map_err(CertError::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fail(err: &CertError) -> ExitCode {
    print!("{}", FailureReport::new(error_kind(err), err.to_string()).to_json());
    ExitCode::from(1)
}

fn run() -> Result<ExitCode, CertError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Certify { input, common, t_max, t_points } => {
            let source = InputSource {
                matrix_a: input.matrix_a,
                matrix_d: input.matrix_d,
                model: input.model,
            };
            let loaded = load_system(&source, common.seed)?;
            let opts = PipelineOptions {
                theta: common.theta,
                b_values: common.b_values,
                samples: common.samples,
                seed: common.seed,
                tol_eig: common.tol_eig,
                tol_form: common.tol_form,
                t_max,
                t_points,
                no_timestamp: common.no_timestamp,
                skip_decay: false,
            };
            let outcome = run_pipeline(&loaded, &opts)?;
            emit(&common.output, &outcome.report.to_json())?;
            Ok(if outcome.refused {
                ExitCode::from(2)
            } else if outcome.report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Spectrum { input, common, csv } => {
            let source = InputSource {
                matrix_a: input.matrix_a,
                matrix_d: input.matrix_d,
                model: input.model,
            };
            let loaded = load_system(&source, common.seed)?;
            let opts = PipelineOptions {
                theta: common.theta,
                b_values: common.b_values,
                samples: common.samples,
                seed: common.seed,
                tol_eig: common.tol_eig,
                tol_form: common.tol_form,
                t_max: None,
                t_points: 0,
                no_timestamp: common.no_timestamp,
                skip_decay: true,
            };
            let outcome = run_pipeline(&loaded, &opts)?;
            if let Some(prefix) = csv {
                let stem = prefix.display().to_string();
                fs::write(
                    format!("{stem}.eigenvalues.csv"),
                    eigenvalues_csv(&outcome.spectrum_eigs),
                )?;
                fs::write(
                    format!("{stem}.regions.csv"),
                    regions_csv(&outcome.regions, &outcome.spectrum_eigs),
                )?;
            }
            emit(&common.output, &outcome.report.to_json())?;
            Ok(if outcome.refused {
                ExitCode::from(2)
            } else if outcome.report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Decay { input, common, t_max, t_points, u0, u1, format } => {
            let source = InputSource {
                matrix_a: input.matrix_a,
                matrix_d: input.matrix_d,
                model: input.model,
            };
            let loaded = load_system(&source, common.seed)?;
            let consts = compute_constants(&loaded.system);
            if consts.delta <= 0.0 {
                let report = FailureReport::new(
                    "non_positive_delta",
                    format!("certificate refused: delta <= 0 (delta = {:e})", consts.delta),
                );
                print!("{}", report.to_json());
                return Ok(ExitCode::from(2));
            }
            let ts = theta_star(&consts)?;
            let theta = common.theta.unwrap_or(ts);
            let omega = omega_theta(ts, &consts)?;
            let times = match t_max {
                Some(t) => time_grid(t, t_points),
                None => {
                    if t_points == 64 {
                        default_time_grid(omega)
                    } else {
                        time_grid(10.0 / omega, t_points)
                    }
                }
            };
            let trajectory_mode = u0.is_some() || u1.is_some();
            if trajectory_mode {
                let n = loaded.system.dim();
                let read = |p: &Option<PathBuf>| -> Result<CVec, CertError> {
                    Ok(match p {
                        Some(path) => mtx::read_vector(path)?,
                        None => CVec::zeros(n),
                    })
                };
                let traj = solve_cauchy(&loaded.system, &consts, &read(&u0)?, &read(&u1)?, &times)?;
                let text = trajectory_csv(&traj);
                emit(&common.output, &text)?;
            } else {
                let curve = decay_curve(&loaded.system, &consts, theta, &times)?;
                let text = if format == "json" {
                    let mut s = serde_json::to_string_pretty(&curve).expect("curve serialization");
                    s.push('\n');
                    s
                } else {
                    decay_csv(&curve)
                };
                emit(&common.output, &text)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Model { model, out_a, out_d } => {
            let spec = ModelSpec::parse(&model)?;
            let sys = spec.generate()?;
            mtx::write_matrix(&out_a, sys.a())?;
            mtx::write_matrix(&out_d, sys.d())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { input, theta_min, theta_max, theta_points, output } => {
            let source = InputSource {
                matrix_a: input.matrix_a,
                matrix_d: input.matrix_d,
                model: input.model,
            };
            let loaded = load_system(&source, 0)?;
            let consts = compute_constants(&loaded.system);
            let ts = theta_star(&consts)?;
            let lo = theta_min.unwrap_or(ts / 1000.0);
            let hi = theta_max.unwrap_or(ts * 1000.0);
            if !(lo > 0.0 && hi > lo && theta_points >= 2) {
                return Err(CertError::InvalidParameter(format!(
                    "invalid sweep range [{lo}, {hi}] with {theta_points} points"
                )));
            }
            let thetas: Vec<f64> = (0..theta_points)
                .map(|i| lo * (hi / lo).powf(i as f64 / (theta_points - 1) as f64))
                .collect();
            let text = sweep_csv(&consts, &thetas)?;
            emit(&output, &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => fail(&err),
    }
}
