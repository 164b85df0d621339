//! Error type shared across the toolkit.

use thiserror::Error;

/// Errors surfaced by validation, certification and verification routines.
#[derive(Debug, Error)]
pub enum CertError {
    #[error("matrix is not Hermitian: ||M - M*||_F = {defect:.3e} exceeds tolerance {tol:.3e}")]
    NonHermitian { defect: f64, tol: f64 },

    #[error("stiffness matrix is not positive definite: lambda_min = {lambda_min:.6e}")]
    NotPositiveDefinite { lambda_min: f64 },

    #[error("damping matrix is not accretive: lambda_min of its Hermitian part = {lambda_min:.6e}")]
    NotAccretive { lambda_min: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported scale index {0}; supported indices are -2, -1, 0, 1, 2")]
    UnsupportedScale(i32),

    #[error(
        "sector constant undefined: the Hermitian part of D is singular and its \
         skew part does not vanish on the kernel (nu = infinity)"
    )]
    SectorUndefined,

    #[error("decay certificate requires delta > 0, got delta = {0:.6e}")]
    NonPositiveDelta(f64),

    #[error("sector intercept b = {b} exceeds sqrt(theta) = {sqrt_theta}")]
    InvalidIntercept { b: f64, sqrt_theta: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver failed to converge")]
    EigFailure,

    #[error("decay envelope violated at t = {t:.6e}: norm {norm:.12e} > bound {bound:.12e}")]
    EnvelopeViolation { t: f64, norm: f64, bound: f64 },

    #[error("matrix market parse error at line {line}: {msg}")]
    MtxParse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CertError>;
