//! Structured verification reports.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RateStatus {
    Verified,
    ToleranceExceeded,
    LhsInfinite,
    RhsInfinite,
}

/// Result of one sum-rule verification: the spectral side decomposed into
/// its KL and outlier terms, the coefficient side as partial sums with a
/// truncation bound, and the residual between the two.
#[derive(Debug, Clone, Serialize)]
pub struct RateReport {
    pub rule: String,
    pub params: Vec<(String, f64)>,
    pub kl_term: f64,
    pub outlier_plus: Vec<(f64, f64)>,
    pub outlier_minus: Vec<(f64, f64)>,
    pub lhs_total: f64,
    pub rhs_terms: Vec<f64>,
    pub rhs_partial_sums: Vec<f64>,
    pub rhs_tail_bound: f64,
    pub rhs_total: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub status: RateStatus,
    /// Detected atoms (angle, mass) entering the outlier terms.
    pub atoms: Vec<(f64, f64)>,
    /// Set on conjecture probes; such reports are never gated.
    pub label: Option<String>,
    pub notes: Vec<String>,
}

impl RateReport {
    pub fn residual_of(lhs: f64, rhs: f64) -> f64 {
        if lhs.is_finite() && rhs.is_finite() {
            (lhs - rhs).abs()
        } else if lhs.is_infinite() && rhs.is_infinite() {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn is_verified(&self) -> bool {
        self.status == RateStatus::Verified
    }

    /// Sanity of the stored structure: partial sums nondecreasing and the
    /// residual consistent with the two sides.
    pub fn check_structure(&self) -> bool {
        let monotone = self
            .rhs_partial_sums
            .windows(2)
            .all(|w| w[1] >= w[0] - 1e-12);
        let resid_ok = if self.lhs_total.is_finite() && self.rhs_total.is_finite() {
            (self.residual - (self.lhs_total - self.rhs_total).abs()).abs() < 1e-12
        } else {
            true
        };
        monotone && resid_ok
    }
}

/// Envelope written by the CLI around every report: configuration echo,
/// tolerances, and the build version.
#[derive(Debug, Clone, Serialize)]
pub struct RunEnvelope<T: Serialize> {
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub tolerances: Vec<(String, f64)>,
    pub report: T,
}

pub fn version_string() -> String {
    option_env!("OPUC_GIT_DESCRIBE")
        .map(String::from)
        .unwrap_or_else(|| format!("v{}", env!("CARGO_PKG_VERSION")))
}
