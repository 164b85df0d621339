//! Shared plumbing between the subcommands: system loading, the full
//! certification pipeline and CSV rendering.

use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use decay_cert_core::constants::{compute_constants, sample_check_constants, ConstantSet};
use decay_cert_core::error::{CertError, Result};
use decay_cert_core::hilbert_scale::SystemPair;
use decay_cert_core::models::ModelSpec;
use decay_cert_core::mtx;
use decay_cert_core::rate_bounds::{
    certify, default_b_values, m_theta_b, omega_theta, theta_star, SectorRegion,
};
use decay_cert_core::report::{
    CertReport, DecaySummary, InputProvenance, Tolerances, SCHEMA, TOOL_VERSION,
};
use decay_cert_core::sampling::RNG_NAME;
use decay_cert_core::semigroup::{
    decay_curve, default_time_grid, form_margins_batch, DecayCurve, Trajectory,
};
use decay_cert_core::spectrum::{
    build_linearization, eigenvalues, region_boundary, verify_inclusion, SpectrumReport,
};
use decay_cert_core::validate_system;

/// Matrix-file or model input, as given on the command line.
#[derive(Debug, Clone)]
pub struct InputSource {
    pub matrix_a: Option<PathBuf>,
    pub matrix_d: Option<PathBuf>,
    pub model: Option<String>,
}

pub struct LoadedSystem {
    pub system: SystemPair,
    pub provenance: InputProvenance,
}

pub fn load_system(input: &InputSource, seed: u64) -> Result<LoadedSystem> {
    match (&input.model, &input.matrix_a, &input.matrix_d) {
        (Some(spec_text), None, None) => {
            let spec = ModelSpec::parse(spec_text)?;
            let system = spec.generate()?;
            let seed = if spec.seed() != 0 { spec.seed() } else { seed };
            Ok(LoadedSystem {
                system,
                provenance: InputProvenance {
                    matrix_a: None,
                    matrix_d: None,
                    model: Some(spec.to_string()),
                    rng: RNG_NAME,
                    seed,
                },
            })
        }
        (None, Some(a_path), Some(d_path)) => {
            let a = mtx::read_matrix(a_path)?;
            let d = mtx::read_matrix(d_path)?;
            let system = validate_system(a, d)?;
            Ok(LoadedSystem {
                system,
                provenance: InputProvenance {
                    matrix_a: Some(a_path.display().to_string()),
                    matrix_d: Some(d_path.display().to_string()),
                    model: None,
                    rng: RNG_NAME,
                    seed,
                },
            })
        }
        _ => Err(CertError::InvalidParameter(
            "provide either --model or both --matrix-a and --matrix-d".into(),
        )),
    }
}

/// Knobs shared by the verification subcommands.
#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub theta: Option<f64>,
    pub b_values: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub tol_eig: f64,
    pub tol_form: f64,
    pub t_max: Option<f64>,
    pub t_points: usize,
    pub no_timestamp: bool,
    /// stop after the inclusion checks (spectrum subcommand)
    pub skip_decay: bool,
}

pub struct PipelineOutcome {
    pub report: CertReport,
    pub refused: bool,
    pub regions: Vec<(String, SectorRegion)>,
    pub spectrum_eigs: Vec<decay_cert_core::linalg::C64>,
}

fn trim_float(x: f64) -> String {
    format!("{x:.6}")
}

/// Run validate -> constants -> certify -> spectrum -> inclusion ->
/// forms/audit -> decay and assemble the report.
pub fn run_pipeline(loaded: &LoadedSystem, opts: &PipelineOptions) -> Result<PipelineOutcome> {
    let started = Instant::now();
    let sys = &loaded.system;
    let consts = compute_constants(sys);

    let refused = consts.delta <= 0.0;
    let mut refusal = None;
    let mut certificate = None;
    let mut regions: Vec<(String, SectorRegion)> = Vec::new();
    let mut working_theta = opts.theta;

    if refused {
        refusal = Some(format!("certificate refused: delta <= 0 (delta = {:e})", consts.delta));
    } else {
        let b_values = if opts.b_values.is_empty() {
            let ts = theta_star(&consts)?;
            default_b_values(omega_theta(ts, &consts)?)
        } else {
            opts.b_values.clone()
        };
        let cert = certify(&consts, &b_values)?;
        let theta = working_theta.unwrap_or(cert.theta_star);
        working_theta = Some(theta);

        for entry in &cert.mb {
            regions.push((
                format!("theorem_b={}", trim_float(entry.b)),
                SectorRegion { omega: cert.omega, slope: entry.m, intercept: entry.b },
            ));
        }
        let omega_at_theta = omega_theta(theta, &consts)?;
        for &b in &b_values {
            if b <= theta.sqrt() {
                regions.push((
                    format!("prop1_theta={}_b={}", trim_float(theta), trim_float(b)),
                    SectorRegion {
                        omega: omega_at_theta,
                        slope: m_theta_b(theta, b, &consts)?,
                        intercept: b,
                    },
                ));
            }
        }
        certificate = Some(cert);
    }

    let eigs = eigenvalues(&build_linearization(sys))?;
    let spectrum: SpectrumReport = verify_inclusion(sys, &eigs, &regions, &consts, opts.tol_eig);

    let mut forms = None;
    let mut audit = None;
    let mut decay = None;
    let mut pass = spectrum.pass && !refused;

    if opts.samples > 0 {
        let a = sample_check_constants(sys, &consts, opts.samples, opts.seed);
        pass &= a.passes(opts.tol_form);
        audit = Some(a);
    }

    if let (false, Some(theta)) = (refused, working_theta) {
        if opts.samples > 0 {
            let bs: Vec<f64> = certificate
                .as_ref()
                .map(|c| c.mb.iter().map(|e| e.b).filter(|&b| b <= theta.sqrt()).collect())
                .unwrap_or_default();
            if !bs.is_empty() {
                let checks = form_margins_batch(sys, &consts, theta, &bs, opts.samples, opts.seed)?;
                pass &= checks.iter().all(|c| c.passes(opts.tol_form));
                forms = Some(checks);
            }
        }
        if !opts.skip_decay {
            let omega = certificate.as_ref().map(|c| c.omega).unwrap();
            let times = match opts.t_max {
                Some(t_max) => time_grid(t_max, opts.t_points),
                None => default_time_grid(omega),
            };
            let curve = decay_curve(sys, &consts, theta, &times)?;
            decay = Some(DecaySummary {
                theta,
                omega_theta: curve.omega_theta,
                kappa: curve.kappa,
                empirical_rate: curve.empirical_rate,
                envelope_violations: 0,
            });
        }
    }

    let (timestamp_unix_ms, wall_clock_ms) = if opts.no_timestamp {
        (None, None)
    } else {
        (
            SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_millis()),
            Some(started.elapsed().as_secs_f64() * 1e3),
        )
    };

    let report = CertReport {
        schema: SCHEMA,
        tool_version: TOOL_VERSION,
        timestamp_unix_ms,
        wall_clock_ms,
        input: loaded.provenance.clone(),
        tolerances: Tolerances { eig: opts.tol_eig, form: opts.tol_form, samples: opts.samples },
        constants: consts,
        certificate,
        refusal,
        spectrum: Some(spectrum),
        forms,
        audit,
        decay,
        pass,
    };
    Ok(PipelineOutcome { report, refused, regions, spectrum_eigs: eigs })
}

/// t = 0 plus `points - 1` log-spaced samples over three decades up to
/// `t_max`.
pub fn time_grid(t_max: f64, points: usize) -> Vec<f64> {
    let points = points.max(2);
    let mut grid = Vec::with_capacity(points);
    grid.push(0.0);
    let k = points - 1;
    for i in 0..k {
        grid.push(t_max * 10f64.powf(-3.0 * (1.0 - i as f64 / (k - 1) as f64)));
    }
    grid
}

pub fn eigenvalues_csv(eigs: &[decay_cert_core::linalg::C64]) -> String {
    let mut out = String::from("re,im\n");
    for l in eigs {
        out.push_str(&format!("{:?},{:?}\n", l.re, l.im));
    }
    out
}

pub fn regions_csv(regions: &[(String, SectorRegion)], eigs: &[decay_cert_core::linalg::C64]) -> String {
    // extend edges well past the leftmost eigenvalue
    let re_extent = eigs
        .iter()
        .map(|l| l.re)
        .fold(f64::INFINITY, f64::min)
        .min(-1.0)
        * 1.5;
    let mut out = String::from("region,re,im\n");
    for (label, region) in regions {
        for (re, im) in region_boundary(region, re_extent, 256) {
            out.push_str(&format!("{label},{re:?},{im:?}\n"));
        }
    }
    out
}

pub fn decay_csv(curve: &DecayCurve) -> String {
    let mut out = String::from("t,theta_norm,energy_norm,envelope,kappa_envelope\n");
    for i in 0..curve.times.len() {
        out.push_str(&format!(
            "{:?},{:?},{:?},{:?},{:?}\n",
            curve.times[i],
            curve.theta_norm[i],
            curve.energy_norm[i],
            curve.envelope[i],
            curve.kappa * curve.envelope[i],
        ));
    }
    out
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let n = traj.positions.first().map_or(0, |p| p.len());
    let mut out = String::from("t");
    for i in 0..n {
        out.push_str(&format!(",u{i}_re,u{i}_im"));
    }
    for i in 0..n {
        out.push_str(&format!(",du{i}_re,du{i}_im"));
    }
    out.push('\n');
    for (k, &t) in traj.times.iter().enumerate() {
        out.push_str(&format!("{t:?}"));
        for i in 0..n {
            out.push_str(&format!(",{:?},{:?}", traj.positions[k][i].re, traj.positions[k][i].im));
        }
        for i in 0..n {
            out.push_str(&format!(",{:?},{:?}", traj.velocities[k][i].re, traj.velocities[k][i].im));
        }
        out.push('\n');
    }
    out
}

/// theta-scan rows (theta, omega_theta, M_{theta,0}).
pub fn sweep_csv(consts: &ConstantSet, thetas: &[f64]) -> Result<String> {
    let mut out = String::from("theta,omega_theta,M_theta_0\n");
    for &theta in thetas {
        let w = omega_theta(theta, consts)?;
        let m = m_theta_b(theta, 0.0, consts)?;
        out.push_str(&format!("{theta:?},{w:?},{m:?}\n"));
    }
    Ok(out)
}
