//! Reproducible families of test systems.
//!
//! Every generator returns a pair that passes `validate_system`; the random
//! family is deterministic in its seed and hits requested floors for delta
//! and caps for nu.

use std::fmt;

use crate::constants::sector_constant;
use crate::error::{CertError, Result};
use crate::hilbert_scale::{validate_system, SystemPair};
use crate::linalg::{hermitian_re, identity, CMat, C64};
use crate::sampling::{random_matrix, SamplingRng};

/// Parsed model description, e.g. `scalar:4,4,0` or `wave1d:8,0,1,0`.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    /// 1-d damped wave equation on (0, 1): `wave1d:n,c0,c1,c2`
    Wave1d { n: usize, c0: f64, c1: f64, c2: f64 },
    /// uniform mass-spring chain: `spring_chain:n,k,c0,c1`
    SpringChain { n: usize, k: f64, c0: f64, c1: f64 },
    /// seeded random sectorial system: `random_sectorial:n,seed,delta_floor,nu_cap`
    RandomSectorial { n: usize, seed: u64, delta_floor: f64, nu_cap: f64 },
    /// single mode: `scalar:a,d_re,d_im`
    Scalar { a: f64, d_re: f64, d_im: f64 },
}

impl ModelSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| CertError::InvalidParameter(format!("model `{text}`: {msg}"));
        let (kind, args) = text
            .split_once(':')
            .ok_or_else(|| bad("expected `kind:p1,p2,...`"))?;
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        let f = |i: usize| -> Result<f64> {
            parts
                .get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| bad(&format!("parameter {} missing or not a number", i + 1)))
        };
        let u = |i: usize| -> Result<usize> {
            parts
                .get(i)
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| bad(&format!("parameter {} missing or not a nonnegative integer", i + 1)))
        };
        match kind.trim() {
            "wave1d" => {
                if parts.len() != 4 {
                    return Err(bad("wave1d takes n,c0,c1,c2"));
                }
                Ok(Self::Wave1d { n: u(0)?, c0: f(1)?, c1: f(2)?, c2: f(3)? })
            }
            "spring_chain" | "spring" => {
                if parts.len() != 4 {
                    return Err(bad("spring_chain takes n,k,c0,c1"));
                }
                Ok(Self::SpringChain { n: u(0)?, k: f(1)?, c0: f(2)?, c1: f(3)? })
            }
            "random_sectorial" | "random" => {
                if parts.len() != 4 {
                    return Err(bad("random_sectorial takes n,seed,delta_floor,nu_cap"));
                }
                Ok(Self::RandomSectorial {
                    n: u(0)?,
                    seed: u(1)? as u64,
                    delta_floor: f(2)?,
                    nu_cap: f(3)?,
                })
            }
            "scalar" => {
                if parts.len() != 3 {
                    return Err(bad("scalar takes a,d_re,d_im"));
                }
                Ok(Self::Scalar { a: f(0)?, d_re: f(1)?, d_im: f(2)? })
            }
            other => Err(bad(&format!("unknown model kind `{other}`"))),
        }
    }

    pub fn generate(&self) -> Result<SystemPair> {
        match *self {
            Self::Wave1d { n, c0, c1, c2 } => wave_1d(n, c0, c1, c2),
            Self::SpringChain { n, k, c0, c1 } => spring_chain(n, k, c0, c1),
            Self::RandomSectorial { n, seed, delta_floor, nu_cap } => {
                random_sectorial(n, seed, delta_floor, nu_cap)
            }
            Self::Scalar { a, d_re, d_im } => scalar(a, d_re, d_im),
        }
    }

    /// Seed recorded in reports; non-random models report 0.
    pub fn seed(&self) -> u64 {
        match self {
            Self::RandomSectorial { seed, .. } => *seed,
            _ => 0,
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Wave1d { n, c0, c1, c2 } => write!(f, "wave1d:{n},{c0},{c1},{c2}"),
            Self::SpringChain { n, k, c0, c1 } => write!(f, "spring_chain:{n},{k},{c0},{c1}"),
            Self::RandomSectorial { n, seed, delta_floor, nu_cap } => {
                write!(f, "random_sectorial:{n},{seed},{delta_floor},{nu_cap}")
            }
            Self::Scalar { a, d_re, d_im } => write!(f, "scalar:{a},{d_re},{d_im}"),
        }
    }
}

fn dirichlet_laplacian(n: usize, scale: f64) -> CMat {
    CMat::from_fn(n, n, |i, j| {
        let v = if i == j {
            2.0
        } else if i.abs_diff(j) == 1 {
            -1.0
        } else {
            0.0
        };
        C64::new(scale * v, 0.0)
    })
}

/// Dirichlet wave equation on (0, 1) with mesh h = 1/(n+1):
/// A = (n+1)^2 tridiag(-1, 2, -1), D = c0 I + (c1 + i c2) A.
///
/// Herm(D) = c0 I + c1 A gives delta >= c1 > 0, and the skew part c2 A gives
/// nu <= c2/c1 (equality when c0 = 0).
pub fn wave_1d(n: usize, c0: f64, c1: f64, c2: f64) -> Result<SystemPair> {
    if n < 1 {
        return Err(CertError::InvalidParameter("wave1d requires n >= 1".into()));
    }
    if !(c1 > 0.0) || c0 < 0.0 || c2 < 0.0 {
        return Err(CertError::InvalidParameter(format!(
            "wave1d requires c1 > 0 and c0, c2 >= 0, got c0 = {c0}, c1 = {c1}, c2 = {c2}"
        )));
    }
    let h_inv_sq = ((n + 1) * (n + 1)) as f64;
    let a = dirichlet_laplacian(n, h_inv_sq);
    let d = identity(n) * C64::new(c0, 0.0) + &a * C64::new(c1, c2);
    validate_system(a, d)
}

/// Uniform chain of unit masses with spring stiffness k and damping
/// D = c0 I + c1 A.
pub fn spring_chain(n: usize, k: f64, c0: f64, c1: f64) -> Result<SystemPair> {
    if n < 1 {
        return Err(CertError::InvalidParameter("spring_chain requires n >= 1".into()));
    }
    if !(k > 0.0) || c0 < 0.0 || c1 < 0.0 {
        return Err(CertError::InvalidParameter(format!(
            "spring_chain requires k > 0 and c0, c1 >= 0, got k = {k}, c0 = {c0}, c1 = {c1}"
        )));
    }
    let a = dirichlet_laplacian(n, k);
    let d = identity(n) * C64::new(c0, 0.0) + &a * C64::new(c1, 0.0);
    validate_system(a, d)
}

/// Seeded random system with A = R*R/n + I and
/// D = delta_floor A + B*B + i gamma H, where gamma is scaled so the sector
/// constant equals nu_cap (gamma = 0 when nu_cap = 0).
pub fn random_sectorial(n: usize, seed: u64, delta_floor: f64, nu_cap: f64) -> Result<SystemPair> {
    if n < 1 {
        return Err(CertError::InvalidParameter("random_sectorial requires n >= 1".into()));
    }
    if !(delta_floor > 0.0) || nu_cap < 0.0 {
        return Err(CertError::InvalidParameter(format!(
            "random_sectorial requires delta_floor > 0 and nu_cap >= 0, got {delta_floor}, {nu_cap}"
        )));
    }
    let mut rng = SamplingRng::seed_from(seed);
    let nf = C64::new(n as f64, 0.0);
    let r = random_matrix(n, n, &mut rng);
    let a = r.adjoint() * &r / nf + identity(n);
    let b = random_matrix(n, n, &mut rng) / C64::new((n as f64).sqrt(), 0.0);
    let g = CMat::from_fn(n, n, |_, _| rng.complex_wide());
    let h = hermitian_re(&g) / C64::new((n as f64).sqrt(), 0.0);

    let d_herm = &a * C64::new(delta_floor, 0.0) + b.adjoint() * &b;
    let d = if nu_cap > 0.0 {
        let nu0 = sector_constant(&hermitian_re(&d_herm), &h).unwrap_or(0.0);
        let gamma = if nu0 > 0.0 { nu_cap / nu0 } else { 0.0 };
        &d_herm + &h * C64::new(0.0, gamma)
    } else {
        d_herm
    };
    validate_system(a, d)
}

/// Single-mode system A = [a], D = [d_re + i d_im].
pub fn scalar(a: f64, d_re: f64, d_im: f64) -> Result<SystemPair> {
    if !(a > 0.0) || d_re < 0.0 {
        return Err(CertError::InvalidParameter(format!(
            "scalar requires a > 0 and d_re >= 0, got a = {a}, d_re = {d_re}"
        )));
    }
    validate_system(
        CMat::from_element(1, 1, C64::new(a, 0.0)),
        CMat::from_element(1, 1, C64::new(d_re, d_im)),
    )
}

/// Roots of lambda^2 + d lambda + a = 0 by the quadratic formula.
pub fn scalar_roots(a: f64, d_re: f64, d_im: f64) -> [C64; 2] {
    let d = C64::new(d_re, d_im);
    let disc = (d * d - C64::new(4.0 * a, 0.0)).sqrt();
    let half = C64::new(0.5, 0.0);
    [(-d - disc) * half, (-d + disc) * half]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::compute_constants;
    use crate::rate_bounds::certify;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn parse_roundtrip_and_errors() {
        let spec = ModelSpec::parse("scalar:4,4,0").unwrap();
        assert_eq!(spec, ModelSpec::Scalar { a: 4.0, d_re: 4.0, d_im: 0.0 });
        assert_eq!(ModelSpec::parse(&spec.to_string()).unwrap(), spec);
        assert_eq!(
            ModelSpec::parse("wave1d:8,0,1,0").unwrap(),
            ModelSpec::Wave1d { n: 8, c0: 0.0, c1: 1.0, c2: 0.0 }
        );
        assert!(ModelSpec::parse("nosuch:1").is_err());
        assert!(ModelSpec::parse("scalar:1").is_err());
        assert!(ModelSpec::parse("wave1d:a,b,c,d").is_err());
        assert!(ModelSpec::parse("scalar").is_err());
    }

    #[test]
    fn wave_ground_frequency_matches_closed_form() {
        // Dirichlet eigenvalues (2 - 2 cos(k pi / (n+1))) / h^2; for n = 3
        // the smallest is 16 (2 - sqrt 2)
        let sys = wave_1d(3, 0.0, 1.0, 0.0).unwrap();
        let consts = compute_constants(&sys);
        let oracle = 16.0 * (2.0 - 2f64.sqrt());
        assert_relative_eq!(consts.a0, oracle, max_relative = 1e-10);
        assert_relative_eq!(oracle, 9.37258, max_relative = 1e-5);
    }

    #[test]
    fn wave_kelvin_voigt_constants() {
        let sys = wave_1d(6, 0.0, 0.8, 0.0).unwrap();
        let consts = compute_constants(&sys);
        assert_relative_eq!(consts.delta, 0.8, max_relative = 1e-10);
        assert!(consts.nu.unwrap().abs() < 1e-10);

        let sectorial = wave_1d(6, 0.0, 1.0, 0.5).unwrap();
        let c2 = compute_constants(&sectorial);
        assert_relative_eq!(c2.nu.unwrap(), 0.5, max_relative = 1e-10);
        assert_relative_eq!(c2.delta, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn wave_ground_frequency_converges_to_pi_squared() {
        for n in [16usize, 64] {
            let sys = wave_1d(n, 0.0, 1.0, 0.0).unwrap();
            let a0 = compute_constants(&sys).a0;
            let h = 1.0 / (n + 1) as f64;
            assert!(a0 <= PI * PI);
            assert!((a0 - PI * PI).abs() <= PI.powi(4) * h * h);
        }
    }

    #[test]
    fn wave_rejects_bad_parameters() {
        assert!(wave_1d(0, 0.0, 1.0, 0.0).is_err());
        assert!(wave_1d(4, 0.0, 0.0, 0.0).is_err());
        assert!(wave_1d(4, -1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn spring_chain_is_certifiable() {
        let sys = spring_chain(5, 2.0, 0.1, 0.3).unwrap();
        let consts = compute_constants(&sys);
        assert!(consts.delta >= 0.3);
        assert!(certify(&consts, &[0.0]).is_ok());
    }

    #[test]
    fn random_sectorial_is_deterministic() {
        let s1 = random_sectorial(6, 42, 0.1, 0.5).unwrap();
        let s2 = random_sectorial(6, 42, 0.1, 0.5).unwrap();
        assert_eq!(s1.a(), s2.a());
        assert_eq!(s1.d(), s2.d());
        let s3 = random_sectorial(6, 43, 0.1, 0.5).unwrap();
        assert_ne!(s1.d(), s3.d());
    }

    #[test]
    fn random_sectorial_hits_delta_floor_and_nu_cap() {
        for seed in [1u64, 7, 19] {
            let sys = random_sectorial(8, seed, 0.25, 0.5).unwrap();
            let consts = compute_constants(&sys);
            assert!(consts.delta >= 0.25 - 1e-10, "delta {}", consts.delta);
            assert_relative_eq!(consts.nu.unwrap(), 0.5, max_relative = 1e-8);
            assert!(certify(&consts, &[0.0]).is_ok());
        }
    }

    #[test]
    fn random_sectorial_zero_cap_gives_hermitian_damping() {
        let sys = random_sectorial(5, 3, 0.2, 0.0).unwrap();
        assert!(crate::linalg::hermiticity_defect(sys.d()) < 1e-14);
        let consts = compute_constants(&sys);
        assert_eq!(consts.nu, Some(0.0));
    }

    #[test]
    fn scalar_constants_and_roots() {
        let sys = scalar(4.0, 4.0, 0.0).unwrap();
        let k = compute_constants(&sys);
        assert_eq!(
            (k.a0, k.alpha, k.beta, k.delta, k.nu.unwrap(), k.norm_d),
            (4.0, 16.0, 4.0, 1.0, 0.0, 1.0)
        );
        let roots = scalar_roots(4.0, 4.0, 0.0);
        for r in roots {
            assert!((r - C64::new(-2.0, 0.0)).norm() < 1e-12);
        }
        // critical damping
        let roots = scalar_roots(1.0, 2.0, 0.0);
        for r in roots {
            assert!((r - C64::new(-1.0, 0.0)).norm() < 1e-12);
        }
        // sector ratio of a complex mode
        let k = compute_constants(&scalar(1.0, 1.0, 0.5).unwrap());
        assert_relative_eq!(k.nu.unwrap(), 0.5, max_relative = 1e-12);
    }

    #[test]
    fn scalar_rejects_bad_parameters() {
        assert!(scalar(0.0, 1.0, 0.0).is_err());
        assert!(scalar(1.0, -1.0, 0.0).is_err());
    }
}
