//! Dense complex matrix exponential.
//!
//! `expm` is the scaling-and-squaring method with diagonal Pade approximants
//! of orders 3/5/7/9/13 selected by the 1-norm (Higham's ladder). `Propagator`
//! caches a diagonalization of the generator when its eigenvector basis is
//! well conditioned and falls back to `expm` otherwise, so defective
//! generators (critical damping) are handled correctly.

use crate::error::Result;
use crate::linalg::{condition_number, general_eigen, identity, norm_one, CMat, CVec, C64};

const THETA_3: f64 = 1.495_585_217_958_292e-2;
const THETA_5: f64 = 2.539_398_330_063_230e-1;
const THETA_7: f64 = 9.504_178_996_162_932e-1;
const THETA_9: f64 = 2.097_847_961_257_068;
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17_297_280.0, 8_648_640.0, 1_995_840.0, 277_200.0, 25_200.0, 1_512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Solve (V - U) X = (V + U) for the Pade quotient.
fn pade_quotient(u: CMat, v: CMat) -> CMat {
    let rhs = &v + &u;
    let lhs = v - u;
    lhs.lu()
        .solve(&rhs)
        .expect("Pade denominator is singular; input norm exceeds the method's range")
}

/// Diagonal Pade approximant of low order m in {3, 5, 7, 9}.
fn pade_low(a: &CMat, b: &[f64]) -> CMat {
    let n = a.nrows();
    let a2 = a * a;
    // powers[k] = A^{2k}
    let mut powers: Vec<CMat> = vec![identity(n), a2.clone()];
    while powers.len() < b.len() / 2 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut u_inner = CMat::zeros(n, n);
    let mut v = CMat::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        u_inner += p * real(b[2 * k + 1]);
        v += p * real(b[2 * k]);
    }
    pade_quotient(a * u_inner, v)
}

fn pade_13(a: &CMat) -> CMat {
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let b = &B13;
    let u_high = &a6 * (&a6 * real(b[13]) + &a4 * real(b[11]) + &a2 * real(b[9]));
    let n = a.nrows();
    let u_low = &a6 * real(b[7]) + &a4 * real(b[5]) + &a2 * real(b[3]) + identity(n) * real(b[1]);
    let u = a * (u_high + u_low);
    let v_high = &a6 * (&a6 * real(b[12]) + &a4 * real(b[10]) + &a2 * real(b[8]));
    let v = v_high + &a6 * real(b[6]) + &a4 * real(b[4]) + &a2 * real(b[2]) + identity(n) * real(b[0]);
    pade_quotient(u, v)
}

/// exp(A) for a square complex matrix.
pub fn expm(a: &CMat) -> CMat {
    assert_eq!(a.nrows(), a.ncols(), "expm requires a square matrix");
    let d = norm_one(a);
    if d == 0.0 {
        return identity(a.nrows());
    }
    if d <= THETA_3 {
        return pade_low(a, &B3);
    }
    if d <= THETA_5 {
        return pade_low(a, &B5);
    }
    if d <= THETA_7 {
        return pade_low(a, &B7);
    }
    if d <= THETA_9 {
        return pade_low(a, &B9);
    }
    let s = ((d / THETA_13).log2().ceil()).max(0.0) as u32;
    let scaled = a * real(0.5f64.powi(s as i32));
    let mut e = pade_13(&scaled);
    for _ in 0..s {
        e = &e * &e;
    }
    e
}

enum Kernel {
    /// exp(tA) = V exp(t Lambda) V^{-1}
    Diagonalized { eigs: Vec<C64>, basis: CMat, basis_inv: CMat },
    /// exp(tA) by scaling and squaring per evaluation
    Pade { matrix: CMat },
}

/// Reusable evaluator for t -> exp(tA).
pub struct Propagator {
    dim: usize,
    kernel: Kernel,
}

/// Eigenvector-basis condition number below which diagonalization is trusted.
pub const DIAGONALIZATION_COND_CAP: f64 = 1e6;

impl Propagator {
    pub fn new(a: &CMat) -> Result<Self> {
        Self::with_condition_cap(a, DIAGONALIZATION_COND_CAP)
    }

    pub fn with_condition_cap(a: &CMat, cond_cap: f64) -> Result<Self> {
        assert_eq!(a.nrows(), a.ncols(), "propagator requires a square matrix");
        let dim = a.nrows();
        if let Ok((eigs, basis)) = general_eigen(a) {
            if condition_number(&basis) < cond_cap {
                if let Some(basis_inv) = basis.clone().try_inverse() {
                    return Ok(Self {
                        dim,
                        kernel: Kernel::Diagonalized { eigs, basis, basis_inv },
                    });
                }
            }
        }
        Ok(Self {
            dim,
            kernel: Kernel::Pade { matrix: a.clone() },
        })
    }

    pub fn uses_diagonalization(&self) -> bool {
        matches!(self.kernel, Kernel::Diagonalized { .. })
    }

    /// exp(tA); t = 0 returns the identity exactly.
    pub fn at(&self, t: f64) -> CMat {
        if t == 0.0 {
            return identity(self.dim);
        }
        match &self.kernel {
            Kernel::Diagonalized { eigs, basis, basis_inv } => {
                let d = CMat::from_diagonal(&CVec::from_iterator(
                    eigs.len(),
                    eigs.iter().map(|&l| (l * real(t)).exp()),
                ));
                basis * d * basis_inv
            }
            Kernel::Pade { matrix } => expm(&(matrix * real(t))),
        }
    }

    /// exp(tA) x without forming exp(tA) when diagonalized.
    pub fn apply(&self, t: f64, x: &CVec) -> CVec {
        match &self.kernel {
            Kernel::Diagonalized { eigs, basis, basis_inv } if t != 0.0 => {
                let mut y = basis_inv * x;
                for (i, &l) in eigs.iter().enumerate() {
                    y[i] *= (l * real(t)).exp();
                }
                basis * y
            }
            _ => &self.at(t) * x,
        }
    }
}

impl std::fmt::Debug for Propagator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Propagator")
            .field("dim", &self.dim)
            .field("diagonalized", &self.uses_diagonalization())
            .finish()
    }
}
