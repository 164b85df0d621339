//! The six scalar constants of a validated system.
//!
//! For x ranging over nonzero vectors,
//!   a0    = inf <Ax, x> / ||x||^2,
//!   alpha = inf Re<Dx, x> / ||x||_{-1}^2,
//!   beta  = inf Re<Dx, x> / ||x||^2,
//!   delta = inf Re<Dx, x> / ||x||_1^2,
//!   nu    = sup |Im<Dx, x>| / Re<Dx, x>,
//!   normD = sup ||Dx||_{-1} / ||x||_1.
//! In finite dimension every infimum is attained as an extreme eigenvalue of
//! a Hermitian (or Hermitian-definite, reduced by congruence with A^{-1/2})
//! problem, so all six are computed exactly by dense eigendecomposition.

use serde::Serialize;

use crate::error::{CertError, Result};
use crate::hilbert_scale::SystemPair;
use crate::linalg::{
    hermitian_eigen, hermitian_eigenvalues, hermitian_im, hermitian_re, largest_singular_value,
    CMat, CVec, C64,
};
use crate::sampling::{random_state, SamplingRng};

/// The scalars extracted from (A, D); `nu = None` flags an unbounded sector
/// constant (the Hermitian part of D is singular and its skew part does not
/// vanish on the kernel).
#[derive(Debug, Clone, Serialize)]
pub struct ConstantSet {
    pub a0: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub nu: Option<f64>,
    #[serde(rename = "normD")]
    pub norm_d: f64,
}

impl ConstantSet {
    /// Assemble a set from raw values (useful for formula-level work that
    /// does not start from matrices).
    pub fn from_values(a0: f64, alpha: f64, beta: f64, delta: f64, nu: f64, norm_d: f64) -> Self {
        Self { a0, alpha, beta, delta, nu: Some(nu), norm_d }
    }

    pub fn sector_defined(&self) -> bool {
        self.nu.is_some()
    }

    pub fn nu_or_err(&self) -> Result<f64> {
        self.nu.ok_or(CertError::SectorUndefined)
    }
}

/// Sector constant of the pair (S, K) = (Herm D, skew part of D over i):
/// the smallest nu with |<Kx, x>| <= nu <Sx, x>, or `None` when no finite
/// nu exists.
pub(crate) fn sector_constant(s: &CMat, k: &CMat) -> Option<f64> {
    let (vals, vecs) = hermitian_eigen(s);
    let n = vals.len();
    let scale = vals[n - 1].max(0.0);
    let kernel_tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let rank: usize = vals.iter().filter(|&&w| w > kernel_tol).count();
    let kernel_dim = n - rank;

    if kernel_dim > 0 {
        // finite nu requires the skew part to vanish on ker S
        let kernel_basis = vecs.columns(0, kernel_dim);
        let leak = (k * kernel_basis).norm();
        if leak > 1e-10 * k.norm().max(1.0) * scale.max(1.0).sqrt() {
            return None;
        }
    }
    if rank == 0 {
        // S = 0 and K vanishes identically
        return Some(0.0);
    }
    let range_basis = vecs.columns(kernel_dim, rank).clone_owned();
    let inv_sqrt = CMat::from_diagonal(&CVec::from_iterator(
        rank,
        vals.iter().skip(kernel_dim).map(|&w| C64::new(w.sqrt().recip(), 0.0)),
    ));
    let reduced = &inv_sqrt * range_basis.adjoint() * k * &range_basis * &inv_sqrt;
    let w = hermitian_eigenvalues(&hermitian_re(&reduced));
    Some(w[0].abs().max(w[w.len() - 1].abs()))
}

/// Compute all six constants of a validated system.
pub fn compute_constants(sys: &SystemPair) -> ConstantSet {
    let a_half = sys.a_half();
    let a_neg_half = sys.a_neg_half();
    let d = sys.d();

    let a0 = sys.lambda_min_a();
    let beta = sys.lambda_min_herm_d();
    let alpha = hermitian_eigenvalues(&hermitian_re(&(a_half * d * a_half)))[0];
    let reduced = a_neg_half * d * a_neg_half;
    let delta = hermitian_eigenvalues(&hermitian_re(&reduced))[0];
    let norm_d = largest_singular_value(&reduced);
    let nu = sector_constant(&hermitian_re(d), &hermitian_im(d));

    ConstantSet { a0, alpha, beta, delta, nu, norm_d }
}

/// Worst-case sampled violation margins of the claimed constants.
///
/// For the infima (a0, alpha, beta, delta) the margin is
/// `min(sampled quotient) - claimed`, for the suprema (normD, nu) it is
/// `claimed - max(sampled quotient)`; every margin must be >= -1e-9 for the
/// claims to stand.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConstantsAudit {
    pub a0: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub nu: f64,
    #[serde(rename = "normD")]
    pub norm_d: f64,
    pub samples: usize,
    pub seed: u64,
}

impl ConstantsAudit {
    pub fn worst(&self) -> f64 {
        self.a0
            .min(self.alpha)
            .min(self.beta)
            .min(self.delta)
            .min(self.nu)
            .min(self.norm_d)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.worst() >= -tol
    }
}

/// Randomized audit of the computed constants on `samples` complex standard
/// normal vectors.
pub fn sample_check_constants(
    sys: &SystemPair,
    consts: &ConstantSet,
    samples: usize,
    seed: u64,
) -> ConstantsAudit {
    let mut rng = SamplingRng::seed_from(seed);
    let n = sys.dim();
    let a = sys.a();
    let d = sys.d();
    let s = hermitian_re(d);
    let k = hermitian_im(d);

    let mut worst = ConstantsAudit {
        a0: f64::INFINITY,
        alpha: f64::INFINITY,
        beta: f64::INFINITY,
        delta: f64::INFINITY,
        nu: f64::INFINITY,
        norm_d: f64::INFINITY,
        samples,
        seed,
    };

    for _ in 0..samples {
        let x = random_state(n, &mut rng);
        let nrm2 = x.norm_squared();
        if nrm2 == 0.0 {
            continue;
        }
        let n1sq = sys.norm_s(&x, 1).unwrap().powi(2);
        let nm1sq = sys.norm_s(&x, -1).unwrap().powi(2);
        let re_dxx = x.dotc(&(d * &x)).re;
        let axx = x.dotc(&(a * &x)).re;

        worst.a0 = worst.a0.min(axx / nrm2 - consts.a0);
        worst.alpha = worst.alpha.min(re_dxx / nm1sq - consts.alpha);
        worst.beta = worst.beta.min(re_dxx / nrm2 - consts.beta);
        worst.delta = worst.delta.min(re_dxx / n1sq - consts.delta);

        let dx_m1 = sys.norm_s(&(d * &x), -1).unwrap();
        worst.norm_d = worst.norm_d.min(consts.norm_d - dx_m1 / n1sq.sqrt());

        if let Some(nu) = consts.nu {
            let sxx = x.dotc(&(&s * &x)).re;
            if sxx > 0.0 {
                let kxx = x.dotc(&(&k * &x)).re;
                worst.nu = worst.nu.min(nu - kxx.abs() / sxx);
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert_scale::validate_system;
    use crate::linalg::identity;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn scalar_pair(a: f64, d: C64) -> SystemPair {
        validate_system(CMat::from_element(1, 1, c(a, 0.0)), CMat::from_element(1, 1, d)).unwrap()
    }

    fn random_hpd(n: usize, shift: f64, rng: &mut impl rand::Rng) -> CMat {
        let r = CMat::from_fn(n, n, |_, _| {
            c(StandardNormal.sample(rng), StandardNormal.sample(rng))
        });
        &r * r.adjoint() / c(n as f64, 0.0) + identity(n) * c(shift, 0.0)
    }

    #[test]
    fn identity_pair_constants() {
        let sys = validate_system(identity(2), identity(2) * c(2.0, 0.0)).unwrap();
        let k = compute_constants(&sys);
        assert_relative_eq!(k.a0, 1.0, max_relative = 1e-12);
        assert_relative_eq!(k.alpha, 2.0, max_relative = 1e-12);
        assert_relative_eq!(k.beta, 2.0, max_relative = 1e-12);
        assert_relative_eq!(k.delta, 2.0, max_relative = 1e-12);
        assert_relative_eq!(k.norm_d, 2.0, max_relative = 1e-12);
        assert_eq!(k.nu, Some(0.0));
    }

    #[test]
    fn scalar_4_4_constants() {
        // hand oracle: alpha = Re(4 * 1) / (1/4) = 16, delta = 4/4, normD = 4/4
        let k = compute_constants(&scalar_pair(4.0, c(4.0, 0.0)));
        assert_relative_eq!(k.a0, 4.0, max_relative = 1e-12);
        assert_relative_eq!(k.alpha, 16.0, max_relative = 1e-12);
        assert_relative_eq!(k.beta, 4.0, max_relative = 1e-12);
        assert_relative_eq!(k.delta, 1.0, max_relative = 1e-12);
        assert_relative_eq!(k.norm_d, 1.0, max_relative = 1e-12);
        assert_relative_eq!(k.nu.unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn scalar_sector_ratio() {
        let k = compute_constants(&scalar_pair(1.0, c(1.0, 0.5)));
        assert_relative_eq!(k.beta, 1.0, max_relative = 1e-12);
        assert_relative_eq!(k.delta, 1.0, max_relative = 1e-12);
        assert_relative_eq!(k.nu.unwrap(), 0.5, max_relative = 1e-12);
        assert_relative_eq!(k.alpha, 1.0, max_relative = 1e-12);
        assert_relative_eq!(k.norm_d, 1.25f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn proportional_damping_collapses_constants() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(3);
        let a = random_hpd(5, 0.4, &mut rng);
        let cfac = 0.7;
        let sys = validate_system(a.clone(), &a * c(cfac, 0.0)).unwrap();
        let k = compute_constants(&sys);
        assert_relative_eq!(k.delta, cfac, max_relative = 1e-10);
        assert_relative_eq!(k.beta, cfac * k.a0, max_relative = 1e-10);
        assert_relative_eq!(k.norm_d, cfac, max_relative = 1e-10);
        assert!(k.nu.unwrap().abs() < 1e-10);
    }

    #[test]
    fn damping_scaling_law() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(5);
        let a = random_hpd(4, 0.5, &mut rng);
        let d0 = random_hpd(4, 0.2, &mut rng)
            + CMat::from_fn(4, 4, |i, j| if i == j { c(0.0, 0.1 * (i as f64 + 1.0)) } else { c(0.0, 0.0) });
        let base = compute_constants(&validate_system(a.clone(), d0.clone()).unwrap());
        let t = 3.5;
        let scaled = compute_constants(&validate_system(a, &d0 * c(t, 0.0)).unwrap());
        assert_relative_eq!(scaled.alpha, t * base.alpha, max_relative = 1e-10);
        assert_relative_eq!(scaled.beta, t * base.beta, max_relative = 1e-10);
        assert_relative_eq!(scaled.delta, t * base.delta, max_relative = 1e-10);
        assert_relative_eq!(scaled.norm_d, t * base.norm_d, max_relative = 1e-10);
        assert_relative_eq!(scaled.nu.unwrap(), base.nu.unwrap(), max_relative = 1e-10);
        assert_relative_eq!(scaled.a0, base.a0, max_relative = 1e-12);
    }

    #[test]
    fn chain_inequality_on_random_systems() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(17);
        for n in [1usize, 2, 3, 5, 8] {
            let a = random_hpd(n, 0.3, &mut rng);
            let d = random_hpd(n, 0.1, &mut rng);
            let k = compute_constants(&validate_system(a, d).unwrap());
            assert!(k.alpha >= k.a0 * k.beta * (1.0 - 1e-10));
            assert!(k.a0 * k.beta >= k.a0 * k.a0 * k.delta * (1.0 - 1e-10));
            assert!(k.delta > 0.0);
            assert!(k.delta <= k.norm_d * (1.0 + 1e-10));
        }
    }

    #[test]
    fn sector_constant_exact_on_proportional_skew() {
        // D = (1 + 0.4 i) S has a constant sector quotient, so the computed
        // nu and the sampled supremum agree to rounding
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(29);
        let a = random_hpd(4, 0.5, &mut rng);
        let s = random_hpd(4, 0.3, &mut rng);
        let d = &s * c(1.0, 0.4);
        let sys = validate_system(a, d.clone()).unwrap();
        let k = compute_constants(&sys);
        assert_relative_eq!(k.nu.unwrap(), 0.4, max_relative = 1e-10);

        let audit = sample_check_constants(&sys, &k, 10_000, 42);
        assert!(audit.nu >= -1e-12);
        assert!(audit.nu <= 1e-6, "sector margin {}", audit.nu);
    }

    #[test]
    fn sector_undefined_when_skew_leaks_into_kernel() {
        // Herm(D) singular, skew part acts on the kernel direction: nu = inf
        let a = identity(2);
        let d = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]);
        let sys = validate_system(a, d).unwrap();
        let k = compute_constants(&sys);
        assert!(k.nu.is_none());
        assert!(k.nu_or_err().is_err());
    }

    #[test]
    fn merely_accretive_hermitian_damping_has_zero_nu() {
        let a = identity(2);
        let d = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let k = compute_constants(&validate_system(a, d).unwrap());
        assert_eq!(k.nu, Some(0.0));
        assert_eq!(k.beta, 0.0);
    }

    #[test]
    fn audit_margins_on_constant_quotient_systems() {
        let sys = validate_system(identity(2), identity(2) * c(2.0, 0.0)).unwrap();
        let k = compute_constants(&sys);
        let audit = sample_check_constants(&sys, &k, 1000, 1);
        // every quotient is identically its constant
        assert!(audit.worst() >= -1e-12);
        assert!(audit.alpha.abs() <= 1e-10);
        assert!(audit.beta.abs() <= 1e-10);
        assert!(audit.delta.abs() <= 1e-10);

        let scal = scalar_pair(4.0, c(4.0, 0.0));
        let ks = compute_constants(&scal);
        let audit = sample_check_constants(&scal, &ks, 100, 2);
        assert!(audit.delta.abs() <= 1e-12);
    }

    #[test]
    fn audit_margins_on_random_system() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(42);
        let a = random_hpd(5, 0.4, &mut rng);
        let d = random_hpd(5, 0.2, &mut rng);
        let sys = validate_system(a, d).unwrap();
        let k = compute_constants(&sys);
        let audit = sample_check_constants(&sys, &k, 10_000, 42);
        assert!(audit.passes(1e-9), "audit margins {audit:?}");
    }
}
