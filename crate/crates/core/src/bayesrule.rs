//! The fixed-parameter interval rule, its translation to physical distance,
//! and the rival uniform-prior posterior with an exhaustive discrete oracle.
//!
//! Two endpoint conventions are implemented because the historical
//! description mixes a strict lower-tail inequality with a nonstrict upper
//! one; exposing both makes the endpoint question computable instead of
//! hidden. Achieved coverage is always recomputed from the CDF, never
//! assumed equal to the nominal level.

use crate::error::{Error, Result};
use crate::exactprob::{reg_inc_beta, BinomialModel, KahanSum, ProbValue};
use crate::units::Quantity;
use num_rational::BigRational;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Observed counts: `k` successes in `n` throws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountData {
    n: u64,
    k: u64,
}

impl CountData {
    pub fn new(n: u64, k: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("throw count n must be at least 1"));
        }
        if k > n {
            return Err(Error::domain(format!("successes k = {k} exceed throws n = {n}")));
        }
        Ok(CountData { n, k })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Failures q = n - k.
    pub fn q(&self) -> u64 {
        self.n - self.k
    }

    pub fn proportion(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

/// How the interval endpoints are read off the CDF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Default: each endpoint is the smallest k with CDF(k) at or above its
    /// tail level. Coverage counts P(k_lo <= X <= k_hi).
    NonstrictBoth,
    /// The mixed reading: k_lo is the largest k with CDF(k) strictly below
    /// alpha/2, k_hi the largest k with CDF(k) at or below 1 - alpha/2.
    /// Coverage counts P(k_lo < X <= k_hi).
    StrictLowerNonstrictUpper,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Convention::NonstrictBoth => "nonstrict-both",
            Convention::StrictLowerNonstrictUpper => "strict-lower-nonstrict-upper",
        };
        f.write_str(s)
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonstrict-both" => Ok(Convention::NonstrictBoth),
            "strict-lower-nonstrict-upper" => Ok(Convention::StrictLowerNonstrictUpper),
            other => Err(Error::domain(format!("unknown interval convention: {other}"))),
        }
    }
}

/// Equal-tailed count interval with its achieved coverage.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralInterval {
    k_lo: u64,
    k_hi: u64,
    coverage: ProbValue,
    convention: Convention,
    alpha: f64,
}

impl CentralInterval {
    /// Build an interval from explicit endpoints, recomputing the achieved
    /// coverage from the model's CDF.
    pub fn from_endpoints(
        model: &BinomialModel,
        k_lo: u64,
        k_hi: u64,
        convention: Convention,
        alpha: f64,
    ) -> Result<Self> {
        if k_lo > k_hi || k_hi > model.n() {
            return Err(Error::domain(format!(
                "invalid interval endpoints ({k_lo}, {k_hi}) for n = {}",
                model.n()
            )));
        }
        let coverage = interval_mass(model, k_lo, k_hi, convention)?;
        let cf = coverage.to_f64();
        debug_assert!((0.0..=1.0 + 1e-12).contains(&cf));
        Ok(CentralInterval { k_lo, k_hi, coverage, convention, alpha })
    }

    pub fn k_lo(&self) -> u64 {
        self.k_lo
    }

    pub fn k_hi(&self) -> u64 {
        self.k_hi
    }

    pub fn width(&self) -> u64 {
        self.k_hi - self.k_lo
    }

    pub fn coverage(&self) -> &ProbValue {
        &self.coverage
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Probability mass assigned to the interval under the given convention:
/// CDF(k_hi) - CDF(k_lo - 1) for the default, CDF(k_hi) - CDF(k_lo) for the
/// strict-lower reading.
pub fn interval_mass(
    model: &BinomialModel,
    k_lo: u64,
    k_hi: u64,
    convention: Convention,
) -> Result<ProbValue> {
    let upper = model.cdf(k_hi)?;
    let lower = match convention {
        Convention::NonstrictBoth => {
            if k_lo == 0 {
                None
            } else {
                Some(model.cdf(k_lo - 1)?)
            }
        }
        Convention::StrictLowerNonstrictUpper => Some(model.cdf(k_lo)?),
    };
    Ok(match (upper, lower) {
        (u, None) => u,
        (ProbValue::Exact(u), Some(ProbValue::Exact(l))) => ProbValue::Exact(u - l),
        (u, Some(l)) => ProbValue::Float((u.to_f64() - l.to_f64()).max(0.0)),
    })
}

/// Equal-tailed central interval at tail budget `alpha`.
pub fn central_interval(
    model: &BinomialModel,
    alpha: f64,
    convention: Convention,
) -> Result<CentralInterval> {
    if !(alpha > 0.0 && alpha < 1.0) || alpha.is_nan() {
        return Err(Error::domain(format!("alpha = {alpha} lies outside (0, 1)")));
    }
    let half = alpha / 2.0;
    let (k_lo, k_hi) = match convention {
        Convention::NonstrictBoth => {
            (model.quantile(half)?, model.quantile(1.0 - half)?)
        }
        Convention::StrictLowerNonstrictUpper => {
            // largest k with CDF(k) < alpha/2 (0 if there is none)
            let q = model.quantile(half)?;
            let k_lo = q.saturating_sub(1);
            let k_lo = if cdf_below(model, k_lo, half)? { k_lo } else { 0 };
            // largest k with CDF(k) <= 1 - alpha/2
            let level = 1.0 - half;
            let mut k_hi = model.quantile(level)?;
            while k_hi < model.n() && cdf_at_most(model, k_hi + 1, level)? {
                k_hi += 1;
            }
            if !cdf_at_most(model, k_hi, level)? {
                k_hi = k_hi.saturating_sub(1);
            }
            (k_lo, k_hi.max(k_lo))
        }
    };
    CentralInterval::from_endpoints(model, k_lo, k_hi, convention, alpha)
}

fn cdf_below(model: &BinomialModel, k: u64, level: f64) -> Result<bool> {
    Ok(match model.cdf(k)? {
        ProbValue::Exact(r) => r < BigRational::from_float(level).expect("finite level"),
        ProbValue::Float(x) => x < level,
    })
}

fn cdf_at_most(model: &BinomialModel, k: u64, level: f64) -> Result<bool> {
    Ok(match model.cdf(k)? {
        ProbValue::Exact(r) => r <= BigRational::from_float(level).expect("finite level"),
        ProbValue::Float(x) => x <= level,
    })
}

/// Physical width of an interval: ((k_hi - k_lo) / n) * span, carried in the
/// span's unit. The fraction and the span multiply as exact rationals.
pub fn interval_to_distance(
    interval: &CentralInterval,
    n: u64,
    span: &Quantity,
) -> Result<Quantity> {
    if n == 0 {
        return Err(Error::domain("throw count n must be at least 1"));
    }
    if interval.k_hi() > n {
        return Err(Error::domain(format!(
            "interval endpoint {} is out of range for n = {n}",
            interval.k_hi()
        )));
    }
    if !span.value.is_finite() || span.value <= 0.0 {
        return Err(Error::domain(format!("span must be positive, got {}", span.value)));
    }
    let fraction = BigRational::new(interval.width().into(), n.into());
    let span_exact = BigRational::from_float(span.value).expect("finite span");
    let value = crate::exactprob::rational_to_f64(&(fraction * span_exact));
    Ok(Quantity::new(value, span.unit))
}

/// Two probability bounds f < b for a posterior interval query.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PosteriorQuery {
    lo: f64,
    hi: f64,
}

impl PosteriorQuery {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo.is_nan() || hi.is_nan() {
            return Err(Error::domain(format!("query bounds ({lo}, {hi}) lie outside [0, 1]")));
        }
        if lo >= hi {
            return Err(Error::domain(format!(
                "query lower bound {lo} must be strictly below upper bound {hi}"
            )));
        }
        Ok(PosteriorQuery { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

/// Uniform-prior posterior probability that theta lies in (lo, hi) given the
/// counts: I_hi(k+1, n-k+1) - I_lo(k+1, n-k+1).
pub fn beta_posterior_prob(data: &CountData, query: &PosteriorQuery) -> Result<f64> {
    let a = data.k() as f64 + 1.0;
    let b = data.q() as f64 + 1.0;
    let hi = reg_inc_beta(query.hi(), a, b)?;
    let lo = reg_inc_beta(query.lo(), a, b)?;
    Ok((hi - lo).max(0.0))
}

/// Exhaustive discrete oracle: the table is cut into `cells` equal strips for
/// the first ball's resting line, with theta_i = (i + 1/2) / cells. Returns
/// the normalized posterior weights over strips given the counts.
pub fn discrete_posterior(data: &CountData, cells: usize) -> Result<Vec<f64>> {
    if cells == 0 {
        return Err(Error::domain("cell count must be at least 1"));
    }
    if cells == 1 {
        return Ok(vec![1.0]);
    }
    let n = data.n() as f64;
    let k = data.k() as f64;
    let m = cells as f64;
    // log weights, then a stabilized exp-normalize
    let log_w: Vec<f64> = (0..cells)
        .map(|i| {
            let theta = (2 * i + 1) as f64 / (2.0 * m);
            k * theta.ln() + (n - k) * (1.0 - theta).ln()
        })
        .collect();
    let max = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_w.iter().map(|lw| (lw - max).exp()).collect();
    let mut total = KahanSum::new();
    for &x in &w {
        total.add(x);
    }
    let total = total.value();
    Ok(w.into_iter().map(|x| x / total).collect())
}

/// Sum of posterior cell weights whose strips lie wholly inside [lo, hi].
pub fn aggregate_cells(weights: &[f64], lo: f64, hi: f64) -> f64 {
    let m = weights.len() as f64;
    let mut sum = KahanSum::new();
    for (i, &w) in weights.iter().enumerate() {
        let left = i as f64 / m;
        let right = (i + 1) as f64 / m;
        if left >= lo && right <= hi {
            sum.add(w);
        }
    }
    sum.value()
}
