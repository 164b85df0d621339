//! Closed-form decay-rate bounds and spectral inclusion regions.
//!
//! For theta > 0 the rate omega_theta satisfies
//!   1/omega_theta = 1/beta + ||D||^2/(2 delta)
//!                 + (theta/alpha + 1/(theta delta))/2
//!                 + sqrt((theta/alpha + 1/(theta delta) + ||D||^2/delta)^2
//!                        - 4/(alpha delta))/2,
//! and the sector slope is
//!   M_{theta,b} = nu + 2/(delta (b + sqrt(b^2 + 4 theta))) + (sqrt(theta) - b)/beta.
//!
//! theta/alpha + 1/(theta delta) is minimized at theta* = sqrt(alpha/delta)
//! and 1/omega_theta increases with it, so omega = omega_{theta*} is the best
//! certified rate. The spectrum of the first-order generator lies in
//!   { Re lambda <= -omega, |Im lambda| <= M_b |Re lambda| + b },
//! with M_b = min over theta >= b^2 of M_{theta,b}.

use serde::Serialize;

use crate::constants::ConstantSet;
use crate::error::{CertError, Result};
use crate::linalg::C64;
use crate::minimize::minimize_log_axis;

/// Number of points of the certificate's theta grid; odd so that theta* is
/// the exact midpoint and the grid maximum can be compared against
/// omega_{theta*} at full precision.
pub const OMEGA_GRID_POINTS: usize = 1001;

/// Decades spanned by the theta grid on each side of theta*.
pub const OMEGA_GRID_DECADES: f64 = 3.0;

/// Golden-section floor for theta when minimizing M_{theta,b} at b = 0.
pub const THETA_FLOOR: f64 = 1e-8;

fn require_delta(c: &ConstantSet) -> Result<()> {
    if c.delta <= 0.0 {
        return Err(CertError::NonPositiveDelta(c.delta));
    }
    Ok(())
}

fn require_beta(c: &ConstantSet) -> Result<()> {
    if c.beta <= 0.0 {
        return Err(CertError::InvalidParameter(format!(
            "rate formulas require beta > 0, got beta = {}",
            c.beta
        )));
    }
    Ok(())
}

/// Certified decay rate of the semigroup in the theta metric.
pub fn omega_theta(theta: f64, c: &ConstantSet) -> Result<f64> {
    require_delta(c)?;
    require_beta(c)?;
    if theta <= 0.0 {
        return Err(CertError::InvalidParameter(format!(
            "omega_theta requires theta > 0, got {theta}"
        )));
    }
    let g = theta / c.alpha + 1.0 / (theta * c.delta);
    let y = c.norm_d * c.norm_d / c.delta;
    // nonnegative since g >= 2/sqrt(alpha delta); clamp rounding noise
    let radicand = ((g + y) * (g + y) - 4.0 / (c.alpha * c.delta)).max(0.0);
    let inv = 1.0 / c.beta + 0.5 * y + 0.5 * g + 0.5 * radicand.sqrt();
    Ok(inv.recip())
}

/// The maximizer of omega_theta.
pub fn theta_star(c: &ConstantSet) -> Result<f64> {
    require_delta(c)?;
    Ok((c.alpha / c.delta).sqrt())
}

/// M_{theta,b} without the intercept precondition; used by the minimizer
/// whose bracket may graze b^2 by rounding.
fn m_formula(theta: f64, b: f64, nu: f64, beta: f64, delta: f64) -> f64 {
    nu + 2.0 / (delta * (b + (b * b + 4.0 * theta).sqrt())) + (theta.sqrt() - b) / beta
}

/// Sector slope M_{theta,b} for 0 <= b <= sqrt(theta).
pub fn m_theta_b(theta: f64, b: f64, c: &ConstantSet) -> Result<f64> {
    require_delta(c)?;
    require_beta(c)?;
    let nu = c.nu_or_err()?;
    if theta <= 0.0 || b < 0.0 {
        return Err(CertError::InvalidParameter(format!(
            "m_theta_b requires theta > 0 and b >= 0, got theta = {theta}, b = {b}"
        )));
    }
    if b > theta.sqrt() {
        return Err(CertError::InvalidIntercept { b, sqrt_theta: theta.sqrt() });
    }
    Ok(m_formula(theta, b, nu, c.beta, c.delta))
}

/// Closed form for omega at theta* with the exponent of delta in the last
/// radicand term left as a parameter.
///
/// `delta_exponent = 2` reproduces omega_{theta*} exactly; `delta_exponent
/// = 4` is the alternative reading, which diverges from the certified rate
/// whenever delta != 1. Both are recorded in the certificate.
pub fn omega_closed_form_variant(c: &ConstantSet, delta_exponent: i32) -> Result<f64> {
    require_delta(c)?;
    require_beta(c)?;
    let norm_d2 = c.norm_d * c.norm_d;
    let root_ad = (c.alpha * c.delta).sqrt();
    let inv = 1.0 / c.beta
        + norm_d2 / (2.0 * c.delta)
        + 1.0 / root_ad
        + 0.5 * (4.0 * norm_d2 / (c.delta * root_ad) + norm_d2 * norm_d2 / c.delta.powi(delta_exponent)).sqrt();
    Ok(inv.recip())
}

/// One row of the certified sector table.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MbEntry {
    pub b: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub theta_argmin: f64,
}

/// Sampled point of the omega_theta curve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridPoint {
    pub theta: f64,
    pub omega_theta: f64,
}

/// The full decay certificate for one constant set.
#[derive(Debug, Clone, Serialize)]
pub struct RateCertificate {
    pub constants: ConstantSet,
    pub theta_star: f64,
    pub omega: f64,
    pub omega_paper_delta2: f64,
    pub omega_paper_delta4: f64,
    #[serde(rename = "Mb")]
    pub mb: Vec<MbEntry>,
    pub grid: Vec<GridPoint>,
}

/// Minimize M_{theta,b} over theta >= b^2 by a 64-point coarse scan plus
/// golden-section refinement on log theta.
pub fn min_m_over_theta(b: f64, c: &ConstantSet) -> Result<MbEntry> {
    require_delta(c)?;
    require_beta(c)?;
    let nu = c.nu_or_err()?;
    if b < 0.0 {
        return Err(CertError::InvalidParameter(format!("b must be nonnegative, got {b}")));
    }
    let lo = (b * b).max(THETA_FLOOR);
    let hi = 1e8 * (b * b).max(1.0);
    let (theta, m) =
        minimize_log_axis(|t| m_formula(t, b, nu, c.beta, c.delta), lo, hi, 64, 1e-10);
    Ok(MbEntry { b, m, theta_argmin: theta })
}

/// Log-spaced theta grid with theta* as its exact midpoint.
pub fn theta_grid(c: &ConstantSet) -> Result<Vec<f64>> {
    let ts = theta_star(c)?;
    let half = (OMEGA_GRID_POINTS - 1) as i64 / 2;
    Ok((0..OMEGA_GRID_POINTS as i64)
        .map(|i| ts * 10f64.powf((i - half) as f64 * OMEGA_GRID_DECADES / half as f64))
        .collect())
}

/// Default sector intercepts {0, omega/2, omega}.
pub fn default_b_values(omega: f64) -> Vec<f64> {
    vec![0.0, omega / 2.0, omega]
}

/// Build the decay certificate: the optimal rate, both closed-form variants,
/// the M_b table for the requested intercepts and the omega_theta grid.
pub fn certify(c: &ConstantSet, b_values: &[f64]) -> Result<RateCertificate> {
    let ts = theta_star(c)?;
    let omega = omega_theta(ts, c)?;
    let omega_paper_delta2 = omega_closed_form_variant(c, 2)?;
    let omega_paper_delta4 = omega_closed_form_variant(c, 4)?;
    let mut mb = Vec::with_capacity(b_values.len());
    for &b in b_values {
        mb.push(min_m_over_theta(b, c)?);
    }
    let grid = theta_grid(c)?
        .into_iter()
        .map(|theta| {
            omega_theta(theta, c).map(|w| GridPoint { theta, omega_theta: w })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RateCertificate {
        constants: c.clone(),
        theta_star: ts,
        omega,
        omega_paper_delta2,
        omega_paper_delta4,
        mb,
        grid,
    })
}

/// Sector region { Re lambda <= -omega, |Im lambda| <= slope |Re lambda| + intercept }.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SectorRegion {
    pub omega: f64,
    #[serde(rename = "M")]
    pub slope: f64,
    #[serde(rename = "b")]
    pub intercept: f64,
}

/// Membership result with signed margins (nonnegative means inside).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegionCheck {
    pub inside: bool,
    /// -omega - Re lambda
    pub margin_re: f64,
    /// slope |Re lambda| + intercept - |Im lambda|
    pub margin_im: f64,
}

pub fn region_contains(lambda: C64, region: &SectorRegion) -> RegionCheck {
    let margin_re = -region.omega - lambda.re;
    let margin_im = region.slope * lambda.re.abs() + region.intercept - lambda.im.abs();
    RegionCheck { inside: margin_re >= 0.0 && margin_im >= 0.0, margin_re, margin_im }
}

/// Membership in the two weaker inclusion regions quoted from earlier work.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RemarkCheck {
    /// Re lambda <= 0 and |Im lambda| <= nu |Re lambda| + 1/delta
    pub in_first: bool,
    pub first_margin_re: f64,
    pub first_margin_im: f64,
    /// delta <= |Re lambda| / (a0^{-2} + |lambda|^{-2}), as printed
    pub in_second: bool,
    pub second_margin: f64,
}

pub fn remark_regions_contain(lambda: C64, c: &ConstantSet) -> Result<RemarkCheck> {
    require_delta(c)?;
    let nu = c.nu_or_err()?;
    let first_margin_re = -lambda.re;
    let first_margin_im = nu * lambda.re.abs() + 1.0 / c.delta - lambda.im.abs();
    let quotient = if lambda.norm_sqr() == 0.0 {
        0.0
    } else {
        lambda.re.abs() / (c.a0.powi(-2) + lambda.norm_sqr().recip())
    };
    let second_margin = quotient - c.delta;
    Ok(RemarkCheck {
        in_first: first_margin_re >= 0.0 && first_margin_im >= 0.0,
        first_margin_re,
        first_margin_im,
        in_second: second_margin >= 0.0,
        second_margin,
    })
}

/// Sharp form of the damping lower-bound region.
///
/// Taking the inner product of the pencil equation with a unit eigenvector
/// gives Re<Dx, x> = |Re lambda| (1 + <Ax, x>/|lambda|^2), and
/// Re<Dx, x> >= delta <Ax, x> with <Ax, x> >= a0 then yields
///   delta <= |Re lambda| (a0^{-1} + |lambda|^{-2}),
/// attained with equality on extremal eigenvectors. The printed quotient
/// variant reported by `remark_regions_contain` is not implied by the
/// damping bound and can fail for strongly overdamped spectra; this one
/// cannot. Returns the signed margin.
pub fn damping_bound_region_margin(lambda: C64, c: &ConstantSet) -> Result<f64> {
    require_delta(c)?;
    if c.a0 <= 0.0 {
        return Err(CertError::NotPositiveDefinite { lambda_min: c.a0 });
    }
    if lambda.norm_sqr() == 0.0 {
        // the region constraint degenerates to delta <= infinity
        return Ok(f64::INFINITY);
    }
    let product = lambda.re.abs() * (c.a0.recip() + lambda.norm_sqr().recip());
    Ok(product - c.delta)
}
