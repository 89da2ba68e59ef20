//! Exact and log-stable kernels for the binomial distribution, the
//! regularized incomplete beta function, and the chi-square(1) tail.
//!
//! Two evaluation modes coexist:
//!
//! * **exact** — big-integer rationals, selected automatically when the trial
//!   count is at most [`EXACT_N_MAX`] and the success chance is a ratio of
//!   integers. Every probability is then an exact ratio whose denominator
//!   divides `den^n` (for a fair trial: `2^n`), which removes all rounding
//!   ambiguity from tail comparisons.
//! * **float** — log-space `f64` arithmetic for everything else. Cumulative
//!   sums accumulate from the smaller tail upward.

mod exact;
mod special;

pub use special::{chisq1_sf, reg_inc_beta};

pub(crate) use exact::rational_to_f64;

use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;

/// Largest trial count for which the exact big-rational mode is used.
pub const EXACT_N_MAX: u64 = 1024;

/// Evaluation mode of a model or of a probability value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Exact big-integer rational arithmetic.
    Exact,
    /// Log-space floating point.
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Theta {
    /// Reduced ratio num/den with 0 <= num <= den, den >= 1.
    Rational { num: u64, den: u64 },
    Real(f64),
}

impl Theta {
    fn as_f64(&self) -> f64 {
        match *self {
            Theta::Rational { num, den } => num as f64 / den as f64,
            Theta::Real(t) => t,
        }
    }
}

/// A probability, tagged with how it was computed.
///
/// Exact values convert to `f64` within one unit in the last place.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbValue {
    Exact(BigRational),
    Float(f64),
}

impl ProbValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            ProbValue::Exact(r) => exact::rational_to_f64(r),
            ProbValue::Float(x) => *x,
        }
    }

    pub fn mode(&self) -> EvalMode {
        match self {
            ProbValue::Exact(_) => EvalMode::Exact,
            ProbValue::Float(_) => EvalMode::Float,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ProbValue::Exact(r) => Some(r),
            ProbValue::Float(_) => None,
        }
    }
}

impl fmt::Display for ProbValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbValue::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            ProbValue::Float(x) => write!(f, "{x}"),
        }
    }
}

/// A binomial distribution: `n` trials with success chance `theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinomialModel {
    n: u64,
    theta: Theta,
    mode: EvalMode,
}

impl BinomialModel {
    /// Fair model, theta = 1/2.
    pub fn fair(n: u64) -> Result<Self> {
        Self::from_ratio(n, 1, 2)
    }

    /// Model with an exactly rational success chance num/den.
    ///
    /// Uses exact mode when `n <= EXACT_N_MAX`, log-space floats otherwise.
    pub fn from_ratio(n: u64, num: u64, den: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("trial count n must be at least 1"));
        }
        if den == 0 {
            return Err(Error::domain("theta denominator must be nonzero"));
        }
        if num > den {
            return Err(Error::domain(format!(
                "theta = {num}/{den} lies outside [0, 1]"
            )));
        }
        let g = gcd(num.max(1), den);
        let (num, den) = (num / g, den / g);
        let mode = if n <= EXACT_N_MAX { EvalMode::Exact } else { EvalMode::Float };
        Ok(BinomialModel { n, theta: Theta::Rational { num, den }, mode })
    }

    /// Model with a real-valued success chance; always float mode.
    pub fn from_theta(n: u64, theta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("trial count n must be at least 1"));
        }
        if !(0.0..=1.0).contains(&theta) || theta.is_nan() {
            return Err(Error::domain(format!("theta = {theta} lies outside [0, 1]")));
        }
        Ok(BinomialModel { n, theta: Theta::Real(theta), mode: EvalMode::Float })
    }

    /// The same distribution forced into float mode (for cross-checking the
    /// two evaluation paths).
    pub fn in_float_mode(&self) -> Self {
        BinomialModel { n: self.n, theta: self.theta, mode: EvalMode::Float }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn theta(&self) -> f64 {
        self.theta.as_f64()
    }

    /// The success chance as a reduced ratio, when it is one.
    pub fn theta_ratio(&self) -> Option<(u64, u64)> {
        match self.theta {
            Theta::Rational { num, den } => Some((num, den)),
            Theta::Real(_) => None,
        }
    }

    pub fn mode(&self) -> EvalMode {
        self.mode
    }

    fn check_k(&self, k: u64) -> Result<()> {
        if k > self.n {
            Err(Error::domain(format!(
                "count k = {k} is out of range for n = {} trials",
                self.n
            )))
        } else {
            Ok(())
        }
    }

    /// P(X = k).
    pub fn pmf(&self, k: u64) -> Result<ProbValue> {
        self.check_k(k)?;
        Ok(match (self.mode, self.theta) {
            (EvalMode::Exact, Theta::Rational { num, den }) => {
                ProbValue::Exact(exact::exact_pmf(self.n, num, den, k))
            }
            _ => ProbValue::Float(special::ln_binom_pmf(self.n, k, self.theta()).exp()),
        })
    }

    /// P(X <= k), monotone nondecreasing in k with cdf(n) = 1 exactly.
    pub fn cdf(&self, k: u64) -> Result<ProbValue> {
        self.check_k(k)?;
        Ok(match (self.mode, self.theta) {
            (EvalMode::Exact, Theta::Rational { num, den }) => {
                ProbValue::Exact(exact::exact_cdf(self.n, num, den, k))
            }
            _ => ProbValue::Float(self.float_cdf(k)),
        })
    }

    /// Sum whichever tail k falls in (relative to the mean n*theta),
    /// smallest terms first, with compensated accumulation. Summing the tail
    /// that k belongs to keeps full relative precision even when that tail
    /// mass is tiny.
    fn float_cdf(&self, k: u64) -> f64 {
        let n = self.n;
        let theta = self.theta();
        if k == n {
            return 1.0;
        }
        if (k as f64) < n as f64 * theta {
            let mut sum = KahanSum::new();
            for j in 0..=k {
                sum.add(special::ln_binom_pmf(n, j, theta).exp());
            }
            sum.value().min(1.0)
        } else {
            let mut sum = KahanSum::new();
            for j in (k + 1..=n).rev() {
                sum.add(special::ln_binom_pmf(n, j, theta).exp());
            }
            (1.0 - sum.value()).max(0.0)
        }
    }

    /// Smallest k with CDF(k) >= p.
    ///
    /// Satisfies CDF(k-1) < p <= CDF(k) for k >= 1, with comparisons made
    /// against this model's own `cdf`.
    pub fn quantile(&self, p: f64) -> Result<u64> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(Error::domain(format!(
                "quantile probability p = {p} lies outside [0, 1]"
            )));
        }
        match (self.mode, self.theta) {
            (EvalMode::Exact, Theta::Rational { .. }) => {
                let p_exact = BigRational::from_float(p).expect("finite p");
                if p_exact <= BigRational::zero() {
                    return Ok(0);
                }
                self.search_quantile(|k| *self.cdf(k).unwrap().as_rational().unwrap() >= p_exact)
            }
            _ => {
                if p <= 0.0 {
                    return Ok(0);
                }
                self.search_quantile(|k| self.cdf(k).unwrap().to_f64() >= p)
            }
        }
    }

    /// Binary search for the smallest k satisfying `pred`, followed by a
    /// local linear fixup so the bracket property holds even if rounding
    /// makes the float CDF locally flat.
    fn search_quantile(&self, pred: impl Fn(u64) -> bool) -> Result<u64> {
        let n = self.n;
        if !pred(n) {
            // only possible through float rounding; CDF(n) = 1 >= p always
            return Ok(n);
        }
        let (mut lo, mut hi) = (0u64, n);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if pred(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        while lo > 0 && pred(lo - 1) {
            lo -= 1;
        }
        while !pred(lo) {
            lo += 1;
        }
        Ok(lo)
    }

    /// All pmf values for k = 0..=n in one pass.
    pub fn pmf_table(&self) -> Vec<ProbValue> {
        match (self.mode, self.theta) {
            (EvalMode::Exact, Theta::Rational { num, den }) => {
                self.exact_tables(num, den).0
            }
            _ => {
                let theta = self.theta();
                (0..=self.n)
                    .map(|k| ProbValue::Float(special::ln_binom_pmf(self.n, k, theta).exp()))
                    .collect()
            }
        }
    }

    /// All cdf values for k = 0..=n in one pass. The last entry is exactly 1
    /// in exact mode.
    pub fn cdf_table(&self) -> Vec<ProbValue> {
        match (self.mode, self.theta) {
            (EvalMode::Exact, Theta::Rational { num, den }) => {
                self.exact_tables(num, den).1
            }
            _ => {
                let n = self.n;
                let theta = self.theta();
                let mean = n as f64 * theta;
                let pmf: Vec<f64> = (0..=n)
                    .map(|k| special::ln_binom_pmf(n, k, theta).exp())
                    .collect();
                let mut out = vec![0.0; n as usize + 1];
                // below the mean: prefix sums from the left tail
                let mut sum = KahanSum::new();
                for k in 0..=n {
                    if (k as f64) < mean {
                        sum.add(pmf[k as usize]);
                        out[k as usize] = sum.value().min(1.0);
                    }
                }
                // at or above the mean: one minus suffix sums from the right
                let mut sum = KahanSum::new();
                for k in (0..=n).rev() {
                    if (k as f64) >= mean {
                        out[k as usize] = (1.0 - sum.value()).max(0.0);
                        sum.add(pmf[k as usize]);
                    }
                }
                out[n as usize] = 1.0;
                out.into_iter().map(ProbValue::Float).collect()
            }
        }
    }

    fn exact_tables(&self, num: u64, den: u64) -> (Vec<ProbValue>, Vec<ProbValue>) {
        let n = self.n;
        let pmf: Vec<BigRational> = if num == 0 || num == den {
            (0..=n).map(|k| exact::exact_pmf(n, num, den, k)).collect()
        } else {
            let (weights, denom) = exact::exact_weights(n, num, den);
            weights
                .into_iter()
                .map(|w| BigRational::new(w.into(), denom.clone().into()))
                .collect()
        };
        let mut acc = BigRational::zero();
        let cdf: Vec<ProbValue> = pmf
            .iter()
            .map(|p| {
                acc += p;
                ProbValue::Exact(acc.clone())
            })
            .collect();
        (pmf.into_iter().map(ProbValue::Exact).collect(), cdf)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Compensated (Kahan) accumulator for nonnegative probability sums.
#[derive(Debug, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_pmf_values() {
        let m = BinomialModel::fair(1).unwrap();
        assert_eq!(m.pmf(0).unwrap().to_f64(), 0.5);
        let m = BinomialModel::fair(2).unwrap();
        assert_eq!(m.pmf(1).unwrap().to_f64(), 0.5);
    }

    #[test]
    fn full_support_cdf_is_one() {
        let m = BinomialModel::fair(2).unwrap();
        let c = m.cdf(2).unwrap();
        assert_eq!(c.as_rational().unwrap(), &BigRational::from_integer(1.into()));
        assert_eq!(c.to_f64(), 1.0);
    }

    #[test]
    fn out_of_range_k_is_domain_error() {
        let m = BinomialModel::fair(4).unwrap();
        let err = m.pmf(5).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert!(err.to_string().contains('5'));
        assert!(m.cdf(9).is_err());
    }

    #[test]
    fn quantile_extremes() {
        let m = BinomialModel::fair(4).unwrap();
        assert_eq!(m.quantile(1.0).unwrap(), 4);
        assert_eq!(m.quantile(0.0).unwrap(), 0);
        assert!(m.quantile(-0.1).is_err());
        assert!(m.quantile(1.5).is_err());
    }

    #[test]
    fn quantile_at_reference_session_tails() {
        let m = BinomialModel::fair(156).unwrap();
        assert_eq!(m.quantile(0.025).unwrap(), 66);
        assert_eq!(m.quantile(0.975).unwrap(), 90);
    }

    #[test]
    fn symmetry_identity_exact() {
        let m = BinomialModel::fair(156).unwrap();
        // cdf(77) = (1 - pmf(78)) / 2 exactly
        let lhs = m.cdf(77).unwrap().as_rational().unwrap().clone();
        let pmf78 = m.pmf(78).unwrap().as_rational().unwrap().clone();
        let one = BigRational::from_integer(1.into());
        let two = BigRational::from_integer(2.into());
        assert_eq!(lhs, (one - pmf78) / two);
    }

    #[test]
    fn mode_selection() {
        assert_eq!(BinomialModel::fair(156).unwrap().mode(), EvalMode::Exact);
        assert_eq!(BinomialModel::fair(1024).unwrap().mode(), EvalMode::Exact);
        assert_eq!(BinomialModel::fair(1025).unwrap().mode(), EvalMode::Float);
        assert_eq!(
            BinomialModel::from_theta(10, 0.3).unwrap().mode(),
            EvalMode::Float
        );
    }

    #[test]
    fn theta_is_reduced() {
        let m = BinomialModel::from_ratio(10, 2, 4).unwrap();
        assert_eq!(m.theta_ratio(), Some((1, 2)));
    }

    #[test]
    fn invalid_models_rejected() {
        assert!(BinomialModel::fair(0).is_err());
        assert!(BinomialModel::from_ratio(5, 3, 2).is_err());
        assert!(BinomialModel::from_ratio(5, 1, 0).is_err());
        assert!(BinomialModel::from_theta(5, -0.1).is_err());
        assert!(BinomialModel::from_theta(5, 1.1).is_err());
        assert!(BinomialModel::from_theta(5, f64::NAN).is_err());
    }

    #[test]
    fn degenerate_theta_exact() {
        let m = BinomialModel::from_ratio(5, 0, 1).unwrap();
        assert_eq!(m.pmf(0).unwrap().to_f64(), 1.0);
        assert_eq!(m.pmf(3).unwrap().to_f64(), 0.0);
        assert_eq!(m.cdf(0).unwrap().to_f64(), 1.0);
        let m = BinomialModel::from_ratio(5, 1, 1).unwrap();
        assert_eq!(m.pmf(5).unwrap().to_f64(), 1.0);
        assert_eq!(m.cdf(4).unwrap().to_f64(), 0.0);
    }

    #[test]
    fn tables_match_pointwise_queries() {
        let m = BinomialModel::fair(40).unwrap();
        let pmf = m.pmf_table();
        let cdf = m.cdf_table();
        for k in 0..=40u64 {
            assert_eq!(pmf[k as usize], m.pmf(k).unwrap());
            assert_eq!(cdf[k as usize], m.cdf(k).unwrap());
        }
    }

    #[test]
    fn float_tables_consistent() {
        let m = BinomialModel::from_theta(40, 0.37).unwrap();
        let pmf = m.pmf_table();
        let cdf = m.cdf_table();
        for k in 0..40usize {
            assert!(cdf[k].to_f64() <= cdf[k + 1].to_f64() + 1e-15);
        }
        let total: f64 = pmf.iter().map(|p| p.to_f64()).sum();
        assert!((total - 1.0).abs() < 1e-13);
    }
}
