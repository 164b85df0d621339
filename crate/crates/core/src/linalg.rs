//! Dense complex linear-algebra helpers shared by the whole toolkit.
//!
//! Everything here operates on `DMatrix<Complex<f64>>` at desk scale; the
//! solvers are nalgebra's dense factorizations, wrapped so callers get sorted
//! spectra and `CertError` diagnostics instead of panics.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{CertError, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Hermitian part (M + M*)/2.
pub fn hermitian_re(m: &CMat) -> CMat {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Hermitian matrix K with M = hermitian_re(M) + i K, i.e. (M - M*)/(2i).
pub fn hermitian_im(m: &CMat) -> CMat {
    (m - m.adjoint()) * C64::new(0.0, -0.5)
}

/// Frobenius distance from Hermitian symmetry.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    (m - m.adjoint()).norm()
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// The columns of the returned matrix are the orthonormal eigenvectors in the
/// same order as the eigenvalues.
pub fn hermitian_eigen(m: &CMat) -> (DVector<f64>, CMat) {
    let se = m.clone().symmetric_eigen();
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));
    let vals = DVector::from_iterator(n, order.iter().map(|&i| se.eigenvalues[i]));
    let mut vecs = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &se.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> DVector<f64> {
    let mut vals: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    DVector::from_vec(vals)
}

/// Real power of a Hermitian matrix via its eigendecomposition.
///
/// Negative or fractional powers require a positive definite argument.
pub fn hermitian_power(m: &CMat, p: f64) -> Result<CMat> {
    let (vals, vecs) = hermitian_eigen(m);
    let needs_positive = p < 0.0 || p.fract() != 0.0;
    if needs_positive && vals[0] <= 0.0 {
        return Err(CertError::NotPositiveDefinite { lambda_min: vals[0] });
    }
    let powered = CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&w| C64::new(w.powf(p), 0.0)),
    ));
    Ok(&vecs * powered * vecs.adjoint())
}

/// Eigenvalues of a general complex matrix, sorted by descending real part
/// (ties broken by ascending imaginary part).
pub fn general_eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, 100_000)
        .ok_or(CertError::EigFailure)?;
    let (_, t) = schur.unpack();
    let mut eigs: Vec<C64> = (0..t.nrows()).map(|i| t[(i, i)]).collect();
    sort_spectrum(&mut eigs);
    Ok(eigs)
}

/// Deterministic spectrum ordering: real part descending, then imaginary
/// part ascending.
pub fn sort_spectrum(eigs: &mut [C64]) {
    eigs.sort_by(|a, b| b.re.total_cmp(&a.re).then(a.im.total_cmp(&b.im)));
}

/// Eigenvalues and (non-orthogonal) eigenvectors of a general complex matrix.
///
/// Eigenvectors are recovered from the Schur form by back-substitution; for
/// defective matrices the returned basis is numerically singular, which the
/// caller detects through its condition number.
pub fn general_eigen(m: &CMat) -> Result<(Vec<C64>, CMat)> {
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, 100_000)
        .ok_or(CertError::EigFailure)?;
    let (q, t) = schur.unpack();
    let n = t.nrows();
    let scale = t.norm().max(f64::MIN_POSITIVE);
    let mut basis = CMat::zeros(n, n);
    for i in 0..n {
        let lambda = t[(i, i)];
        let mut y = CVec::zeros(n);
        y[i] = C64::new(1.0, 0.0);
        for j in (0..i).rev() {
            let mut s = C64::new(0.0, 0.0);
            for k in (j + 1)..=i {
                s += t[(j, k)] * y[k];
            }
            let mut denom = t[(j, j)] - lambda;
            // Clamp near-zero pivots (clustered or defective eigenvalues).
            if denom.norm() < f64::EPSILON * scale {
                denom = C64::new(f64::EPSILON * scale, 0.0);
            }
            y[j] = -s / denom;
        }
        let x = &q * y;
        let nrm = x.norm();
        basis.set_column(i, &(x / C64::new(nrm, 0.0)));
    }
    let eigs: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    Ok((eigs, basis))
}

/// Singular values, descending.
pub fn singular_values(m: &CMat) -> DVector<f64> {
    let mut vals: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    DVector::from_vec(vals)
}

pub fn largest_singular_value(m: &CMat) -> f64 {
    singular_values(m)[0]
}

pub fn smallest_singular_value(m: &CMat) -> f64 {
    let sv = singular_values(m);
    sv[sv.len() - 1]
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(m: &CMat) -> f64 {
    largest_singular_value(m)
}

/// 2-norm condition number; infinite for numerically singular input.
pub fn condition_number(m: &CMat) -> f64 {
    let sv = singular_values(m);
    let smin = sv[sv.len() - 1];
    if smin == 0.0 {
        f64::INFINITY
    } else {
        sv[0] / smin
    }
}

/// Maximum absolute column sum (the induced 1-norm).
pub fn norm_one(m: &CMat) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        let s: f64 = m.column(j).iter().map(|z| z.norm()).sum();
        best = best.max(s);
    }
    best
}
