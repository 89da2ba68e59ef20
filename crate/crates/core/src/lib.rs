//! Probability model of targeted throws on a bowling green.
//!
//! The crate provides exact big-rational and log-stable binomial kernels,
//! equal-tailed count intervals with recomputed coverage, likelihood-ratio
//! goodness of fit (G^2 with its chi-square(1) tail), the rival
//! uniform-prior Beta posterior with an exhaustive discrete oracle, exact
//! historical unit conversion (perch, yard, foot, metre), and a seeded,
//! fully reproducible Monte Carlo simulator of the tandem throwing
//! experiment: one placement throw of the Wood, then n scored throws of
//! the Jack.

pub mod bayesrule;
mod error;
pub mod exactprob;
pub mod gof;
pub mod greensim;
pub mod units;

pub use bayesrule::{CentralInterval, Convention, CountData, PosteriorQuery};
pub use error::{Error, Result};
pub use exactprob::{BinomialModel, EvalMode, ProbValue};
pub use gof::{FitReport, Verdict};
pub use greensim::{ErrorDist, ErrorKind, GreenGeometry, SessionSummary, WoodDist};
pub use units::{Quantity, Unit};
