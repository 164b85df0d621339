//! Validated system matrices and the scale of norms generated by A^{1/2}.
//!
//! A damped second-order system u'' + Du' + Au = 0 is represented by the pair
//! (A, D) with A Hermitian positive definite and D accretive. The scale norm
//! ||x||_s = ||A^{s/2} x|| is available for s in {-2, -1, 0, 1, 2} through
//! cached fractional powers of A.

use crate::error::{CertError, Result};
use crate::linalg::{
    self, hermitian_eigen, hermitian_eigenvalues, hermitian_re, identity, CMat, CVec, C64,
};

/// Relative Frobenius tolerance for Hermitian symmetry of A and for
/// accretivity of D.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Cached spectral data of A: eigenpairs and the powers used by the scale
/// norms.
#[derive(Debug, Clone)]
pub struct HilbertScaleCache {
    pub eigenvalues: nalgebra::DVector<f64>,
    pub eigenvectors: CMat,
    pub a_half: CMat,
    pub a_neg_half: CMat,
    pub a_inv: CMat,
}

impl HilbertScaleCache {
    fn build(a: &CMat) -> Result<Self> {
        let (eigenvalues, eigenvectors) = hermitian_eigen(a);
        if eigenvalues[0] <= 0.0 {
            return Err(CertError::NotPositiveDefinite { lambda_min: eigenvalues[0] });
        }
        let power = |p: f64| -> CMat {
            let d = CMat::from_diagonal(&CVec::from_iterator(
                eigenvalues.len(),
                eigenvalues.iter().map(|&w| C64::new(w.powf(p), 0.0)),
            ));
            &eigenvectors * d * eigenvectors.adjoint()
        };
        Ok(Self {
            a_half: power(0.5),
            a_neg_half: power(-0.5),
            a_inv: power(-1.0),
            eigenvalues,
            eigenvectors,
        })
    }
}

/// A validated (A, D) pair together with the spectral cache of A.
///
/// Immutable after construction; all operations are read-only.
#[derive(Debug, Clone)]
pub struct SystemPair {
    n: usize,
    a: CMat,
    d: CMat,
    cache: HilbertScaleCache,
    lambda_min_a: f64,
    lambda_min_herm_d: f64,
}

/// State w = (w1, w2) = (velocity, position) of the first-order form.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub velocity: CVec,
    pub position: CVec,
}

impl StateVector {
    pub fn new(velocity: CVec, position: CVec) -> Self {
        Self { velocity, position }
    }

    pub fn dim(&self) -> usize {
        self.velocity.len()
    }

    /// Stacked 2n-vector (velocity block first).
    pub fn stacked(&self) -> CVec {
        let n = self.velocity.len();
        CVec::from_iterator(
            n + self.position.len(),
            self.velocity.iter().chain(self.position.iter()).copied(),
        )
    }

    pub fn from_stacked(w: &CVec) -> Self {
        let n = w.len() / 2;
        Self {
            velocity: w.rows(0, n).clone_owned(),
            position: w.rows(n, n).clone_owned(),
        }
    }
}

/// Validate (A, D): A Hermitian (symmetrized before use) and positive
/// definite, D accretive, dimensions matching.
pub fn validate_system(a: CMat, d: CMat) -> Result<SystemPair> {
    if a.nrows() != a.ncols() || d.nrows() != d.ncols() || a.nrows() != d.nrows() || a.nrows() == 0 {
        return Err(CertError::DimensionMismatch(format!(
            "A is {}x{}, D is {}x{}; both must be square of equal dimension n >= 1",
            a.nrows(),
            a.ncols(),
            d.nrows(),
            d.ncols()
        )));
    }
    let defect = linalg::hermiticity_defect(&a);
    let tol = HERMITICITY_TOL * a.norm().max(1.0);
    if defect > tol {
        return Err(CertError::NonHermitian { defect, tol });
    }
    // strip rounding noise so downstream eigensolves see an exact Hermitian A
    let a = hermitian_re(&a);
    let cache = HilbertScaleCache::build(&a)?;
    let lambda_min_a = cache.eigenvalues[0];

    let herm_d = hermitian_re(&d);
    let lambda_min_herm_d = hermitian_eigenvalues(&herm_d)[0];
    let acc_tol = HERMITICITY_TOL * d.norm().max(1.0);
    if lambda_min_herm_d < -acc_tol {
        return Err(CertError::NotAccretive { lambda_min: lambda_min_herm_d });
    }

    let n = a.nrows();
    Ok(SystemPair { n, a, d, cache, lambda_min_a, lambda_min_herm_d })
}

impl SystemPair {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }

    pub fn d(&self) -> &CMat {
        &self.d
    }

    pub fn cache(&self) -> &HilbertScaleCache {
        &self.cache
    }

    pub fn lambda_min_a(&self) -> f64 {
        self.lambda_min_a
    }

    pub fn lambda_min_herm_d(&self) -> f64 {
        self.lambda_min_herm_d
    }

    pub fn a_half(&self) -> &CMat {
        &self.cache.a_half
    }

    pub fn a_neg_half(&self) -> &CMat {
        &self.cache.a_neg_half
    }

    pub fn a_inv(&self) -> &CMat {
        &self.cache.a_inv
    }

    /// A^{s/2} for s in {-2, -1, 0, 1, 2}.
    pub fn half_power(&self, s: i32) -> Result<CMat> {
        Ok(match s {
            -2 => self.cache.a_inv.clone(),
            -1 => self.cache.a_neg_half.clone(),
            0 => identity(self.n),
            1 => self.cache.a_half.clone(),
            2 => self.a.clone(),
            _ => return Err(CertError::UnsupportedScale(s)),
        })
    }

    /// Scale norm ||x||_s = ||A^{s/2} x||.
    pub fn norm_s(&self, x: &CVec, s: i32) -> Result<f64> {
        if x.len() != self.n {
            return Err(CertError::DimensionMismatch(format!(
                "vector has length {}, system dimension is {}",
                x.len(),
                self.n
            )));
        }
        if s == 0 {
            return Ok(x.norm());
        }
        Ok((self.half_power(s)? * x).norm())
    }

    /// Scale inner product (x, y)_s = <A^{s/2} x, A^{s/2} y>.
    pub fn inner_s(&self, x: &CVec, y: &CVec, s: i32) -> Result<C64> {
        if x.len() != self.n || y.len() != self.n {
            return Err(CertError::DimensionMismatch(format!(
                "vectors of length {} and {} against system dimension {}",
                x.len(),
                y.len(),
                self.n
            )));
        }
        if s == 0 {
            return Ok(y.dotc(x));
        }
        let p = self.half_power(s)?;
        Ok((&p * y).dotc(&(&p * x)))
    }

    /// Energy norm sqrt(||w1||^2 + ||w2||_1^2) of a state.
    pub fn energy_norm(&self, w: &StateVector) -> Result<f64> {
        let kinetic = self.norm_s(&w.velocity, 0)?;
        let potential = self.norm_s(&w.position, 1)?;
        Ok(kinetic.hypot(potential))
    }

    /// Gram matrix blockdiag(I, A) of the energy inner product on states.
    pub fn energy_gram(&self) -> CMat {
        let mut g = CMat::zeros(2 * self.n, 2 * self.n);
        g.view_mut((0, 0), (self.n, self.n)).copy_from(&identity(self.n));
        g.view_mut((self.n, self.n), (self.n, self.n)).copy_from(&self.a);
        g
    }
}
