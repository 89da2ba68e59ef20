//! Likelihood-ratio goodness of fit of observed counts to a fixed-theta
//! binomial: the deviance statistic G^2 = 2 ln(LR), its chi-square(1) tail
//! probability, and a likelihood-ratio threshold verdict.
//!
//! All logarithms are natural and the computation stays in log space, with
//! the 0 * log 0 = 0 convention at the support edges.

use crate::bayesrule::CountData;
use crate::error::{Error, Result};
use crate::exactprob::chisq1_sf;
use serde::Serialize;
use std::fmt;

/// Default "just as likely" cutoff: the fit is consistent while LR < 5.
pub const DEFAULT_LR_THRESHOLD: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Discrepant,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Consistent => f.write_str("consistent"),
            Verdict::Discrepant => f.write_str("discrepant"),
        }
    }
}

/// Goodness-of-fit report for counts against a fixed null parameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    /// Maximized likelihood over the likelihood at theta0; always >= 1.
    /// Saturates to infinity when G^2/2 exceeds the f64 exponent range;
    /// `g2` stays finite and is the primary statistic.
    pub lr: f64,
    /// Deviance G^2 = 2 ln(LR).
    pub g2: f64,
    /// P(chi-square(1) > G^2).
    pub p_value: f64,
    /// The null parameter the counts were tested against.
    pub theta0: f64,
    pub verdict: Verdict,
    /// Likelihood-ratio cutoff used for the verdict (strict `<`).
    pub threshold: f64,
}

fn check_theta0(theta0: f64) -> Result<()> {
    if !(theta0 > 0.0 && theta0 < 1.0) || theta0.is_nan() {
        return Err(Error::domain(format!(
            "null parameter theta0 = {theta0} must lie strictly inside (0, 1)"
        )));
    }
    Ok(())
}

/// ln LR = k ln(k / (n theta0)) + (n - k) ln((n - k) / (n (1 - theta0))),
/// with 0 ln 0 = 0. Clamped at zero against rounding.
fn log_likelihood_ratio(data: &CountData, theta0: f64) -> f64 {
    let n = data.n() as f64;
    let mut sum = 0.0;
    if data.k() > 0 {
        let k = data.k() as f64;
        sum += k * (k / (n * theta0)).ln();
    }
    if data.q() > 0 {
        let q = data.q() as f64;
        sum += q * (q / (n * (1.0 - theta0))).ln();
    }
    sum.max(0.0)
}

/// L(theta_hat) / L(theta0) with theta_hat = k / n.
pub fn likelihood_ratio(data: &CountData, theta0: f64) -> Result<f64> {
    check_theta0(theta0)?;
    Ok(log_likelihood_ratio(data, theta0).exp())
}

/// Deviance G^2 = 2 ln(LR); zero iff k = n * theta0.
pub fn g_statistic(data: &CountData, theta0: f64) -> Result<f64> {
    check_theta0(theta0)?;
    Ok(2.0 * log_likelihood_ratio(data, theta0))
}

/// Full fit report with the LR-threshold verdict (consistent iff
/// LR < threshold, strictly).
pub fn fit_counts(data: &CountData, theta0: f64, threshold: f64) -> Result<FitReport> {
    check_theta0(theta0)?;
    if threshold.is_nan() || threshold <= 1.0 {
        return Err(Error::domain(format!(
            "likelihood-ratio threshold must exceed 1, got {threshold}"
        )));
    }
    let log_lr = log_likelihood_ratio(data, theta0);
    let g2 = 2.0 * log_lr;
    let lr = log_lr.exp();
    let p_value = chisq1_sf(g2)?;
    let verdict = if lr < threshold { Verdict::Consistent } else { Verdict::Discrepant };
    Ok(FitReport { lr, g2, p_value, theta0, verdict, threshold })
}
