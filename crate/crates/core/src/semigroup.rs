//! The theta inner product, the quadratic-form inequalities behind the decay
//! rate, and measured semigroup decay against the certified envelope.
//!
//! For states w = (w1, w2) and theta >= 0 the form
//!   [w, v]_theta = (w1, v1) + theta (w1, v1)_{-1} + (w2, v2)_1
//!                + theta (w2, v2) + theta (D w2, D v2)_{-1}
//!                + theta (D w2, v1)_{-1} + theta (w1, D v2)_{-1}
//! is an inner product equivalent to the energy one; grouping the theta
//! terms gives
//!   [w, w]_theta = ||w1||^2 + ||w2||_1^2 + theta ||w2||^2
//!                + theta ||w1 + D w2||_{-1}^2.
//! Its Gram matrix is exactly the Q of `build_qt`, and [T w, w]_theta is the
//! quadratic form of the companion matrix T of the same construction.

use serde::Serialize;

use crate::constants::ConstantSet;
use crate::error::{CertError, Result};
use crate::expm::Propagator;
use crate::hilbert_scale::{StateVector, SystemPair};
use crate::linalg::{hermitian_eigenvalues, largest_singular_value, CMat, CVec, C64};
use crate::rate_bounds::{m_theta_b, omega_theta, theta_star};
use crate::sampling::SamplingRng;
use crate::spectrum::{build_linearization, build_qt};

/// Multiplicative slack accepted when measured norms are compared against
/// certified envelopes.
pub const ENVELOPE_SLACK: f64 = 1e-8;

/// Gram matrix of the theta inner product with its square-root factors.
#[derive(Debug, Clone)]
pub struct ThetaMetric {
    theta: f64,
    q: CMat,
    q_half: CMat,
    q_neg_half: CMat,
}

impl ThetaMetric {
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn gram(&self) -> &CMat {
        &self.q
    }

    pub fn gram_half(&self) -> &CMat {
        &self.q_half
    }

    pub fn gram_neg_half(&self) -> &CMat {
        &self.q_neg_half
    }

    /// |w|_theta^2 through the Gram matrix.
    pub fn norm_sq(&self, w: &CVec) -> f64 {
        w.dotc(&(&self.q * w)).re
    }
}

/// Build the metric for theta >= 0; theta = 0 is the energy metric.
pub fn theta_metric(sys: &SystemPair, theta: f64) -> Result<ThetaMetric> {
    if !(theta >= 0.0) {
        return Err(CertError::InvalidParameter(format!(
            "theta must be nonnegative, got {theta}"
        )));
    }
    let q = build_qt(sys, theta).q;
    let (vals, vecs) = crate::linalg::hermitian_eigen(&q);
    if vals[0] <= 0.0 {
        return Err(CertError::NotPositiveDefinite { lambda_min: vals[0] });
    }
    let build = |p: f64| -> CMat {
        let d = CMat::from_diagonal(&CVec::from_iterator(
            vals.len(),
            vals.iter().map(|&w| C64::new(w.powf(p), 0.0)),
        ));
        &vecs * d * vecs.adjoint()
    };
    Ok(ThetaMetric { theta, q, q_half: build(0.5), q_neg_half: build(-0.5) })
}

/// The seven-term sesquilinear form [w, v]_theta, evaluated from the scale
/// inner products (not through the Gram matrix).
pub fn theta_inner(sys: &SystemPair, w: &StateVector, v: &StateVector, theta: f64) -> Result<C64> {
    let th = C64::new(theta, 0.0);
    let d = sys.d();
    let dw2 = d * &w.position;
    let dv2 = d * &v.position;
    let mut acc = sys.inner_s(&w.velocity, &v.velocity, 0)?;
    acc += th * sys.inner_s(&w.velocity, &v.velocity, -1)?;
    acc += sys.inner_s(&w.position, &v.position, 1)?;
    acc += th * sys.inner_s(&w.position, &v.position, 0)?;
    acc += th * sys.inner_s(&dw2, &dv2, -1)?;
    acc += th * sys.inner_s(&dw2, &v.velocity, -1)?;
    acc += th * sys.inner_s(&w.velocity, &dv2, -1)?;
    Ok(acc)
}

/// |[w, w]_theta - (||w1||^2 + ||w2||_1^2 + theta ||w2||^2
/// + theta ||w1 + D w2||_{-1}^2)|; zero in exact arithmetic.
pub fn theta_norm_identity_residual(sys: &SystemPair, w: &StateVector, theta: f64) -> Result<f64> {
    let form = theta_inner(sys, w, w, theta)?.re;
    let shifted = &w.velocity + sys.d() * &w.position;
    let grouped = sys.norm_s(&w.velocity, 0)?.powi(2)
        + sys.norm_s(&w.position, 1)?.powi(2)
        + theta * sys.norm_s(&w.position, 0)?.powi(2)
        + theta * sys.norm_s(&shifted, -1)?.powi(2);
    Ok((form - grouped).abs())
}

/// Worst sampled margins of the two quadratic-form inequalities, relative to
/// |w|_theta^2.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FormCheck {
    pub theta: f64,
    pub b: f64,
    pub omega_theta: f64,
    pub m_theta_b: f64,
    /// min over samples of (-omega_theta |w|^2 - Re[Tw, w]) / |w|^2
    pub worst_re_margin: f64,
    /// min over samples of (M |Re[Tw, w]| + b |w|^2 - |Im[Tw, w]|) / |w|^2
    pub worst_im_margin: f64,
    pub samples: usize,
    pub seed: u64,
}

impl FormCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.worst_re_margin >= -tol && self.worst_im_margin >= -tol
    }
}

/// Check both inequalities for every intercept in `b_values` on a shared
/// sample set (the forms do not depend on b).
pub fn form_margins_batch(
    sys: &SystemPair,
    consts: &ConstantSet,
    theta: f64,
    b_values: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Vec<FormCheck>> {
    let omega = omega_theta(theta, consts)?;
    let mut slopes = Vec::with_capacity(b_values.len());
    for &b in b_values {
        slopes.push(m_theta_b(theta, b, consts)?);
    }

    let qt = build_qt(sys, theta);
    let dim = 2 * sys.dim();
    let mut rng = SamplingRng::seed_from(seed);

    let mut checks: Vec<FormCheck> = b_values
        .iter()
        .zip(&slopes)
        .map(|(&b, &m)| FormCheck {
            theta,
            b,
            omega_theta: omega,
            m_theta_b: m,
            worst_re_margin: f64::INFINITY,
            worst_im_margin: f64::INFINITY,
            samples,
            seed,
        })
        .collect();

    let chunk = 512usize;
    let mut done = 0usize;
    while done < samples {
        let k = chunk.min(samples - done);
        let w = crate::sampling::random_matrix(dim, k, &mut rng);
        let qw = &qt.q * &w;
        let tw = &qt.t * &w;
        for j in 0..k {
            let col = w.column(j);
            let nq = col.dotc(&qw.column(j)).re;
            if nq <= 0.0 {
                continue;
            }
            let form = col.dotc(&tw.column(j));
            let re_margin = (-omega * nq - form.re) / nq;
            for check in checks.iter_mut() {
                check.worst_re_margin = check.worst_re_margin.min(re_margin);
                let im_margin =
                    (check.m_theta_b * form.re.abs() + check.b * nq - form.im.abs()) / nq;
                check.worst_im_margin = check.worst_im_margin.min(im_margin);
            }
        }
        done += k;
    }
    Ok(checks)
}

/// Single-intercept version of `form_margins_batch`.
pub fn form_inequalities_check(
    sys: &SystemPair,
    consts: &ConstantSet,
    theta: f64,
    b: f64,
    samples: usize,
    seed: u64,
) -> Result<FormCheck> {
    Ok(form_margins_batch(sys, consts, theta, &[b], samples, seed)?[0])
}

/// Evaluator of ||exp(tT)|| in a fixed theta metric.
///
/// The similarity M = Q^{1/2} T Q^{-1/2} turns the metric norm into the
/// spectral norm, and M generates a contraction semigroup there, which keeps
/// the squaring phase of the matrix exponential benign.
pub struct SemigroupOperator {
    propagator: Propagator,
}

pub fn semigroup_operator(sys: &SystemPair, metric: &ThetaMetric) -> Result<SemigroupOperator> {
    let t_block = build_linearization(sys);
    let m = metric.gram_half() * t_block.matrix() * metric.gram_neg_half();
    Ok(SemigroupOperator { propagator: Propagator::new(&m)? })
}

impl SemigroupOperator {
    /// ||exp(tT)|| in the metric; exactly 1 at t = 0.
    pub fn norm_at(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 1.0;
        }
        largest_singular_value(&self.propagator.at(t))
    }

    /// exp(t M) in the metric coordinates.
    pub fn evolution(&self, t: f64) -> CMat {
        self.propagator.at(t)
    }
}

/// One-shot ||exp(tT)|| in the given metric.
pub fn semigroup_norm(sys: &SystemPair, metric: &ThetaMetric, t: f64) -> Result<f64> {
    Ok(semigroup_operator(sys, metric)?.norm_at(t))
}

/// kappa = sqrt(cond(G^{-1/2} Q G^{-1/2})): the energy-norm envelope constant
/// ||exp(tT)||_energy <= kappa exp(-omega_theta t). Exactly 1 at theta = 0.
pub fn energy_envelope_constant(sys: &SystemPair, theta: f64) -> Result<f64> {
    if theta == 0.0 {
        return Ok(1.0);
    }
    let metric = theta_metric(sys, theta)?;
    let energy = theta_metric(sys, 0.0)?;
    let reduced = energy.gram_neg_half() * metric.gram() * energy.gram_neg_half();
    let vals = hermitian_eigenvalues(&reduced);
    let lo = vals[0];
    let hi = vals[vals.len() - 1];
    if lo <= 0.0 {
        return Err(CertError::NotPositiveDefinite { lambda_min: lo });
    }
    Ok((hi / lo).sqrt())
}

/// Measured decay of the semigroup norm against the certified envelope.
#[derive(Debug, Clone, Serialize)]
pub struct DecayCurve {
    pub theta: f64,
    pub omega_theta: f64,
    /// energy-norm envelope constant at this theta
    pub kappa: f64,
    pub times: Vec<f64>,
    pub theta_norm: Vec<f64>,
    pub energy_norm: Vec<f64>,
    pub envelope: Vec<f64>,
    /// -log(theta_norm(t_max)) / t_max
    pub empirical_rate: f64,
}

/// Default grid: t = 0 followed by 63 log-spaced points over three decades
/// up to 10/omega.
pub fn default_time_grid(omega: f64) -> Vec<f64> {
    let t_max = 10.0 / omega;
    let mut grid = Vec::with_capacity(64);
    grid.push(0.0);
    for i in 0..63 {
        grid.push(t_max * 10f64.powf(-3.0 * (1.0 - i as f64 / 62.0)));
    }
    grid
}

/// Sample both metric norms over `times` and enforce
/// theta_norm(t) <= (1 + 1e-8) exp(-omega_theta t).
pub fn decay_curve(
    sys: &SystemPair,
    consts: &ConstantSet,
    theta: f64,
    times: &[f64],
) -> Result<DecayCurve> {
    let omega = omega_theta(theta, consts)?;
    let metric = theta_metric(sys, theta)?;
    let energy = theta_metric(sys, 0.0)?;
    let op_theta = semigroup_operator(sys, &metric)?;
    let op_energy = semigroup_operator(sys, &energy)?;
    let kappa = energy_envelope_constant(sys, theta)?;

    let mut theta_norm = Vec::with_capacity(times.len());
    let mut energy_norm = Vec::with_capacity(times.len());
    let mut envelope = Vec::with_capacity(times.len());
    for &t in times {
        if t < 0.0 {
            return Err(CertError::InvalidParameter(format!("negative time {t}")));
        }
        let bound = (-omega * t).exp();
        let nrm = op_theta.norm_at(t);
        if nrm > (1.0 + ENVELOPE_SLACK) * bound {
            return Err(CertError::EnvelopeViolation { t, norm: nrm, bound });
        }
        theta_norm.push(nrm);
        energy_norm.push(op_energy.norm_at(t));
        envelope.push(bound);
    }
    let empirical_rate = match times.last() {
        Some(&t_max) if t_max > 0.0 => {
            -(theta_norm.last().copied().unwrap().ln()) / t_max
        }
        _ => 0.0,
    };
    Ok(DecayCurve {
        theta,
        omega_theta: omega,
        kappa,
        times: times.to_vec(),
        theta_norm,
        energy_norm,
        envelope,
        empirical_rate,
    })
}

/// Solution samples of the second-order Cauchy problem.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub positions: Vec<CVec>,
    pub velocities: Vec<CVec>,
    /// certified energy envelope kappa^2 exp(-2 omega t) E(0) minus measured
    /// energy, per sample; present only when a certificate applies
    pub envelope_margins: Option<Vec<f64>>,
    pub omega: Option<f64>,
    pub kappa: Option<f64>,
}

/// Propagate (u'(t), u(t)) = exp(t T) (u1, u0) and, when delta > 0, enforce
/// the energy envelope with kappa taken at theta*.
pub fn solve_cauchy(
    sys: &SystemPair,
    consts: &ConstantSet,
    u0: &CVec,
    u1: &CVec,
    times: &[f64],
) -> Result<Trajectory> {
    let n = sys.dim();
    if u0.len() != n || u1.len() != n {
        return Err(CertError::DimensionMismatch(format!(
            "initial data of lengths {} and {} against system dimension {n}",
            u0.len(),
            u1.len()
        )));
    }
    let certified = consts.delta > 0.0;
    let (omega, kappa) = if certified {
        let ts = theta_star(consts)?;
        (Some(omega_theta(ts, consts)?), Some(energy_envelope_constant(sys, ts)?))
    } else {
        (None, None)
    };

    let lin = build_linearization(sys);
    let prop = Propagator::new(lin.matrix())?;
    let w0 = StateVector::new(u1.clone(), u0.clone()).stacked();
    let e0 = sys.energy_norm(&StateVector::new(u1.clone(), u0.clone()))?.powi(2);

    let mut positions = Vec::with_capacity(times.len());
    let mut velocities = Vec::with_capacity(times.len());
    let mut margins = certified.then(|| Vec::with_capacity(times.len()));
    for &t in times {
        if t < 0.0 {
            return Err(CertError::InvalidParameter(format!("negative time {t}")));
        }
        let w = prop.apply(t, &w0);
        let state = StateVector::from_stacked(&w);
        if let (Some(omega), Some(kappa), Some(margins)) = (omega, kappa, margins.as_mut()) {
            let energy = sys.energy_norm(&state)?.powi(2);
            let bound = kappa * kappa * (-2.0 * omega * t).exp() * e0;
            if energy > bound * (1.0 + ENVELOPE_SLACK) + f64::MIN_POSITIVE {
                return Err(CertError::EnvelopeViolation { t, norm: energy.sqrt(), bound: bound.sqrt() });
            }
            margins.push(bound - energy);
        }
        velocities.push(state.velocity);
        positions.push(state.position);
    }
    Ok(Trajectory { times: times.to_vec(), positions, velocities, envelope_margins: margins, omega, kappa })
}
