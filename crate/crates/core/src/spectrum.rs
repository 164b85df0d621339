//! The first-order linearization, its spectrum, pencil residuals and the
//! verification of every inclusion region.
//!
//! The block generator is T = [[-D, -A], [I, 0]] acting on states
//! (velocity, position); lambda is an eigenvalue of T exactly when the
//! quadratic pencil L(lambda) = lambda^2 I + lambda D + A is singular.

use serde::Serialize;

use crate::constants::ConstantSet;
use crate::error::Result;
use crate::hilbert_scale::SystemPair;
use crate::linalg::{
    general_eigenvalues, hermiticity_defect, identity, smallest_singular_value, spectral_norm,
    CMat, C64,
};
use crate::rate_bounds::{
    damping_bound_region_margin, region_contains, remark_regions_contain, RegionCheck,
    RemarkCheck, SectorRegion,
};

/// Default relative tolerance for eigenvalue-level checks (pencil residuals
/// and inclusion margins).
pub const EIG_TOL: f64 = 1e-8;

/// The 2n x 2n block matrix of the first-order form.
#[derive(Debug, Clone)]
pub struct Linearization {
    n: usize,
    t_block: CMat,
}

pub fn build_linearization(sys: &SystemPair) -> Linearization {
    let n = sys.dim();
    let mut t = CMat::zeros(2 * n, 2 * n);
    t.view_mut((0, 0), (n, n)).copy_from(&(-sys.d()));
    t.view_mut((0, n), (n, n)).copy_from(&(-sys.a()));
    t.view_mut((n, 0), (n, n)).copy_from(&identity(n));
    Linearization { n, t_block: t }
}

impl Linearization {
    pub fn matrix(&self) -> &CMat {
        &self.t_block
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}

/// Full spectrum of the linearization, sorted by descending real part then
/// ascending imaginary part.
pub fn eigenvalues(lin: &Linearization) -> Result<Vec<C64>> {
    general_eigenvalues(&lin.t_block)
}

/// max Re lambda of a computed spectrum.
pub fn spectral_abscissa(eigs: &[C64]) -> f64 {
    eigs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max)
}

/// Smallest singular value of L(lambda) = lambda^2 I + lambda D + A.
pub fn pencil_residual(sys: &SystemPair, lambda: C64) -> f64 {
    let n = sys.dim();
    let l = identity(n) * (lambda * lambda) + sys.d() * lambda + sys.a();
    smallest_singular_value(&l)
}

/// Scale factor |lambda|^2 + |lambda| ||D||_2 + ||A||_2 used to normalize
/// pencil residuals.
pub fn pencil_scale(lambda: C64, norm_d2: f64, norm_a2: f64) -> f64 {
    let r = lambda.norm();
    r * r + r * norm_d2 + norm_a2
}

/// The Gram matrix Q of the theta inner product and the matrix T of the
/// associated pencil linearization lambda Q - T, with verification
/// residuals.
#[derive(Debug, Clone)]
pub struct QtPair {
    pub q: CMat,
    pub t: CMat,
    /// ||T - Q T_block||_F; zero in exact arithmetic.
    pub identity_residual: f64,
    /// ||Q - Q*||_F; zero in exact arithmetic.
    pub hermiticity_residual: f64,
}

/// Build Q = [[I + th A^{-1}, th A^{-1} D], [th D* A^{-1}, A + th I + th D* A^{-1} D]]
/// and T = [[-D, -A - th I], [A + th I, -th D*]].
pub fn build_qt(sys: &SystemPair, theta: f64) -> QtPair {
    let n = sys.dim();
    let th = C64::new(theta, 0.0);
    let a = sys.a();
    let d = sys.d();
    let a_inv = sys.a_inv();
    let d_star = d.adjoint();

    let mut q = CMat::zeros(2 * n, 2 * n);
    q.view_mut((0, 0), (n, n)).copy_from(&(identity(n) + a_inv * th));
    q.view_mut((0, n), (n, n)).copy_from(&(a_inv * d * th));
    q.view_mut((n, 0), (n, n)).copy_from(&(&d_star * a_inv * th));
    q.view_mut((n, n), (n, n))
        .copy_from(&(a + identity(n) * th + &d_star * a_inv * d * th));

    let mut t = CMat::zeros(2 * n, 2 * n);
    let a_shift = a + identity(n) * th;
    t.view_mut((0, 0), (n, n)).copy_from(&(-d));
    t.view_mut((0, n), (n, n)).copy_from(&(-&a_shift));
    t.view_mut((n, 0), (n, n)).copy_from(&a_shift);
    t.view_mut((n, n), (n, n)).copy_from(&(&d_star * C64::new(-theta, 0.0)));

    let t_block = build_linearization(sys);
    let identity_residual = (&t - &q * t_block.matrix()).norm();
    let hermiticity_residual = hermiticity_defect(&q);
    QtPair { q, t, identity_residual, hermiticity_residual }
}

/// Complex number as a plain serializable pair.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexEntry {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexEntry {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Inclusion results for one sector region over the whole spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct RegionResult {
    pub label: String,
    pub region: SectorRegion,
    pub checks: Vec<RegionCheck>,
    pub violations: usize,
    pub worst_margin: f64,
}

/// Results for the two quoted weaker regions plus the sharp damping-bound
/// diagnostic.
#[derive(Debug, Clone, Serialize)]
pub struct RemarkResult {
    pub checks: Vec<RemarkCheck>,
    pub first_violations: usize,
    pub second_violations: usize,
    pub sharp_margins: Vec<f64>,
    pub sharp_violations: usize,
}

/// Everything the spectral verification produced.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<ComplexEntry>,
    pub spectral_abscissa: f64,
    pub pencil_residuals: Vec<f64>,
    pub pencil_residual_bounds: Vec<f64>,
    pub pencil_pass: bool,
    pub regions: Vec<RegionResult>,
    pub remark: Option<RemarkResult>,
    pub inclusion_tolerance: f64,
    pub pass: bool,
}

/// Check every eigenvalue against every region and against the pencil.
///
/// An eigenvalue counts as inside a region when both margins are at least
/// `-tol (1 + |lambda|)`; pencil residuals must stay below
/// `tol (|lambda|^2 + |lambda| ||D||_2 + ||A||_2)`. Failures are findings
/// recorded in the report, not errors.
pub fn verify_inclusion(
    sys: &SystemPair,
    eigs: &[C64],
    regions: &[(String, SectorRegion)],
    consts: &ConstantSet,
    tol: f64,
) -> SpectrumReport {
    let norm_a2 = spectral_norm(sys.a());
    let norm_d2 = spectral_norm(sys.d());

    let mut pencil_residuals = Vec::with_capacity(eigs.len());
    let mut pencil_residual_bounds = Vec::with_capacity(eigs.len());
    let mut pencil_pass = true;
    for &l in eigs {
        let r = pencil_residual(sys, l);
        let bound = tol * pencil_scale(l, norm_d2, norm_a2);
        pencil_pass &= r <= bound;
        pencil_residuals.push(r);
        pencil_residual_bounds.push(bound);
    }

    let mut region_results = Vec::with_capacity(regions.len());
    let mut all_inside = true;
    for (label, region) in regions {
        let mut checks = Vec::with_capacity(eigs.len());
        let mut violations = 0usize;
        let mut worst = f64::INFINITY;
        for &l in eigs {
            let slack = tol * (1.0 + l.norm());
            let check = region_contains(l, region);
            let margin = check.margin_re.min(check.margin_im);
            worst = worst.min(margin);
            if margin < -slack {
                violations += 1;
            }
            checks.push(check);
        }
        all_inside &= violations == 0;
        region_results.push(RegionResult {
            label: label.clone(),
            region: *region,
            checks,
            violations,
            worst_margin: worst,
        });
    }

    let remark = if consts.delta > 0.0 && consts.sector_defined() {
        let mut checks = Vec::with_capacity(eigs.len());
        let mut first_violations = 0usize;
        let mut second_violations = 0usize;
        let mut sharp_margins = Vec::with_capacity(eigs.len());
        let mut sharp_violations = 0usize;
        for &l in eigs {
            let slack = tol * (1.0 + l.norm());
            let check = remark_regions_contain(l, consts).expect("delta > 0 checked above");
            if check.first_margin_re.min(check.first_margin_im) < -slack {
                first_violations += 1;
            }
            if check.second_margin < -slack {
                second_violations += 1;
            }
            let sharp = damping_bound_region_margin(l, consts).expect("delta > 0 checked above");
            if sharp < -slack {
                sharp_violations += 1;
            }
            checks.push(check);
            sharp_margins.push(sharp);
        }
        Some(RemarkResult {
            checks,
            first_violations,
            second_violations,
            sharp_margins,
            sharp_violations,
        })
    } else {
        None
    };

    SpectrumReport {
        eigenvalues: eigs.iter().map(|&l| l.into()).collect(),
        spectral_abscissa: spectral_abscissa(eigs),
        pencil_residuals,
        pencil_residual_bounds,
        pencil_pass,
        regions: region_results,
        remark,
        inclusion_tolerance: tol,
        pass: pencil_pass && all_inside,
    }
}

/// Polyline tracing the boundary of a sector region, for plotting.
///
/// Emits the upper edge Im = slope |Re| + b, the vertical segment at
/// Re = -omega and the mirrored lower edge, each sampled at `points`
/// points, reaching left until `re_extent < -omega`.
pub fn region_boundary(region: &SectorRegion, re_extent: f64, points: usize) -> Vec<(f64, f64)> {
    let x0 = -region.omega;
    let x1 = re_extent.min(x0);
    let mut poly = Vec::with_capacity(3 * points);
    for k in 0..points {
        let s = k as f64 / (points - 1) as f64;
        let x = x1 + (x0 - x1) * s;
        poly.push((x, region.slope * x.abs() + region.intercept));
    }
    let y_top = region.slope * region.omega + region.intercept;
    for k in 0..points {
        let s = k as f64 / (points - 1) as f64;
        poly.push((x0, y_top - 2.0 * y_top * s));
    }
    for k in 0..points {
        let s = k as f64 / (points - 1) as f64;
        let x = x0 + (x1 - x0) * s;
        poly.push((x, -(region.slope * x.abs() + region.intercept)));
    }
    poly
}
