//! Certification toolkit for damped second-order systems
//! u'' + D u' + A u = 0 with A Hermitian positive definite and D accretive
//! (sectorial).
//!
//! The crate computes the explicit exponential decay rate omega and the
//! spectral-inclusion sectors of the first-order generator
//! T = [[-D, -A], [I, 0]], then verifies every claimed inequality against
//! directly computed spectra, quadratic forms and matrix-exponential norms:
//!
//! - [`hilbert_scale`]: validated (A, D) pairs and the scale norms
//!   ||x||_s = ||A^{s/2} x||;
//! - [`constants`]: the six scalars (a0, alpha, beta, delta, nu, ||D||)
//!   extracted by exact Hermitian eigenproblems, with a randomized audit;
//! - [`rate_bounds`]: omega_theta, M_{theta,b}, the optimized certificate
//!   and the inclusion regions;
//! - [`spectrum`]: the linearization, its eigenvalues, pencil residuals and
//!   region verification;
//! - [`semigroup`]: the theta inner product, the quadratic-form
//!   inequalities, measured semigroup decay and Cauchy trajectories;
//! - [`models`]: reproducible test systems;
//! - [`mtx`]: Matrix Market input and output.

pub mod constants;
pub mod error;
pub mod expm;
pub mod hilbert_scale;
pub mod linalg;
pub mod minimize;
pub mod models;
pub mod mtx;
pub mod rate_bounds;
pub mod report;
pub mod sampling;
pub mod semigroup;
pub mod spectrum;

pub use constants::{compute_constants, sample_check_constants, ConstantSet};
pub use error::{CertError, Result};
pub use hilbert_scale::{validate_system, StateVector, SystemPair};
pub use rate_bounds::{certify, omega_theta, RateCertificate, SectorRegion};
pub use spectrum::{build_linearization, eigenvalues, verify_inclusion, SpectrumReport};
