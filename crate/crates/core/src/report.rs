//! The self-contained certification report and its JSON serialization.

use serde::Serialize;

use crate::constants::{ConstantSet, ConstantsAudit};
use crate::rate_bounds::RateCertificate;
use crate::semigroup::FormCheck;
use crate::spectrum::SpectrumReport;

pub const SCHEMA: &str = "decay-cert/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Where the matrices came from.
#[derive(Debug, Clone, Serialize)]
pub struct InputProvenance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_d: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    pub rng: &'static str,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    /// relative tolerance for eigenvalue-level checks
    pub eig: f64,
    /// relative tolerance for sampled quadratic-form margins
    pub form: f64,
    /// sample count for randomized checks
    pub samples: usize,
}

/// Condensed decay-curve result.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DecaySummary {
    pub theta: f64,
    pub omega_theta: f64,
    pub kappa: f64,
    pub empirical_rate: f64,
    pub envelope_violations: usize,
}

/// Top-level report emitted by the certification pipeline.
#[derive(Debug, Clone, Serialize)]
pub struct CertReport {
    pub schema: &'static str,
    pub tool_version: &'static str,
    /// suppressed (with `wall_clock_ms`) under --no-timestamp
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix_ms: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<f64>,
    pub input: InputProvenance,
    pub tolerances: Tolerances,
    pub constants: ConstantSet,
    /// absent when the certificate is refused (delta <= 0)
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<RateCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refusal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forms: Option<Vec<FormCheck>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<ConstantsAudit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay: Option<DecaySummary>,
    pub pass: bool,
}

impl CertReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }
}

/// Machine-parseable failure object printed on nonzero exits.
#[derive(Debug, Clone, Serialize)]
pub struct FailureReport {
    pub schema: &'static str,
    pub error: FailureBody,
}

#[derive(Debug, Clone, Serialize)]
pub struct FailureBody {
    pub kind: String,
    pub message: String,
}

impl FailureReport {
    pub fn new(kind: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            schema: SCHEMA,
            error: FailureBody { kind: kind.into(), message: message.into() },
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("failure serialization");
        text.push('\n');
        text
    }
}
