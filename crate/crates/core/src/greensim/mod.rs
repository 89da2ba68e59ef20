//! Seeded Monte Carlo simulator of the tandem chance setup on a bowling
//! green: place the Wood once, throw the Jack n times with symmetric lateral
//! error, and score each throw by the side it passes the Wood on.
//!
//! Offsets are in yards. A throw's event is its sign: strictly positive is a
//! right pass. Exact zero offsets have probability zero under the continuous
//! error models; should one ever be realized (or appear in ingested data) it
//! is rejected rather than tie-broken, so the event stays unambiguous.
//! Throws that come to rest beyond the rink edge keep their sign and are
//! flagged, not resampled.

mod io;
mod rng;

pub use io::{all_records, read_offsets_csv, records_to_csv, summaries_to_json, RECORDS_CSV_HEADER};

use crate::bayesrule::CountData;
use crate::error::{Error, Result};
use crate::gof::{self, Verdict};
use rng::ThrowRng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Green and rink dimensions in yards. Defaults follow the historical
/// layout: a 10-perch (55 yd) green, a 1-perch (5.5 yd) rink, and a scoring
/// span equal to the rink width.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenGeometry {
    green_side_yd: f64,
    rink_width_yd: f64,
    span_ab_yd: f64,
}

impl Default for GreenGeometry {
    fn default() -> Self {
        GreenGeometry { green_side_yd: 55.0, rink_width_yd: 5.5, span_ab_yd: 5.5 }
    }
}

impl GreenGeometry {
    pub fn new(green_side_yd: f64, rink_width_yd: f64, span_ab_yd: f64) -> Result<Self> {
        if rink_width_yd.is_nan() || green_side_yd.is_nan()
            || rink_width_yd <= 0.0 || green_side_yd < rink_width_yd {
            return Err(Error::domain(format!(
                "need 0 < rink width <= green side, got {rink_width_yd} and {green_side_yd}"
            )));
        }
        if span_ab_yd.is_nan() || span_ab_yd <= 0.0 {
            return Err(Error::domain(format!("span must be positive, got {span_ab_yd}")));
        }
        Ok(GreenGeometry { green_side_yd, rink_width_yd, span_ab_yd })
    }

    pub fn green_side_yd(&self) -> f64 {
        self.green_side_yd
    }

    pub fn rink_width_yd(&self) -> f64 {
        self.rink_width_yd
    }

    pub fn span_ab_yd(&self) -> f64 {
        self.span_ab_yd
    }
}

/// Shape of the Jack's symmetric lateral error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    Gaussian,
    Uniform,
    Laplace,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ErrorKind::Gaussian => "gaussian",
            ErrorKind::Uniform => "uniform",
            ErrorKind::Laplace => "laplace",
        };
        f.write_str(s)
    }
}

impl FromStr for ErrorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(ErrorKind::Gaussian),
            "uniform" => Ok(ErrorKind::Uniform),
            "laplace" => Ok(ErrorKind::Laplace),
            other => Err(Error::domain(format!("unknown error distribution: {other}"))),
        }
    }
}

/// Lateral error distribution of a throw, centered on the Wood.
///
/// The scale is in yards: the standard deviation for gaussian, the
/// half-width for uniform, and the exponential decay length for laplace.
/// The default gaussian scale of 1 yard is synthetic, not a measured value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorDist {
    kind: ErrorKind,
    scale_yd: f64,
}

impl ErrorDist {
    pub fn new(kind: ErrorKind, scale_yd: f64) -> Result<Self> {
        if !scale_yd.is_finite() || scale_yd <= 0.0 {
            return Err(Error::domain(format!(
                "error scale must be strictly positive, got {scale_yd} (a zero scale makes every throw a tie)"
            )));
        }
        Ok(ErrorDist { kind, scale_yd })
    }

    pub fn kind(&self) -> ErrorKind {
        self.kind
    }

    pub fn scale_yd(&self) -> f64 {
        self.scale_yd
    }

    fn sample(&self, rng: &mut ThrowRng) -> f64 {
        match self.kind {
            ErrorKind::Gaussian => self.scale_yd * rng.next_normal(),
            ErrorKind::Uniform => self.scale_yd * (2.0 * rng.next_unit() - 1.0),
            ErrorKind::Laplace => {
                let v = rng.next_unit() - 0.5;
                -self.scale_yd * v.signum() * (1.0 - 2.0 * v.abs()).ln()
            }
        }
    }
}

/// Where the Wood comes to rest, measured from the rink centerline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WoodDist {
    /// Uniform across the rink width, shifted by a bias offset.
    UniformAcrossRink { bias_yd: f64 },
    /// Normal around a center position.
    Gaussian { center_yd: f64, sd_yd: f64 },
    /// A fixed resting position.
    Fixed { position_yd: f64 },
}

impl Default for WoodDist {
    fn default() -> Self {
        WoodDist::UniformAcrossRink { bias_yd: 0.0 }
    }
}

impl WoodDist {
    fn sample(&self, geometry: &GreenGeometry, rng: &mut ThrowRng) -> f64 {
        match *self {
            WoodDist::UniformAcrossRink { bias_yd } => {
                bias_yd + (rng.next_unit() - 0.5) * geometry.rink_width_yd
            }
            WoodDist::Gaussian { center_yd, sd_yd } => center_yd + sd_yd * rng.next_normal(),
            WoodDist::Fixed { position_yd } => position_yd,
        }
    }
}

/// Side of the Wood a throw passed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn letter(&self) -> char {
        match self {
            Side::Left => 'L',
            Side::Right => 'R',
        }
    }
}

/// One Jack throw: lateral offset from the Wood (yards) and its scoring.
#[derive(Debug, Clone, PartialEq)]
pub struct ThrowRecord {
    pub session: u64,
    /// 1-based trial index within the session.
    pub trial: u64,
    pub offset_yd: f64,
    pub side: Side,
    /// The Jack's absolute lateral position fell beyond the rink edge.
    pub out_of_rink: bool,
}

/// Per-session aggregate, serializable to the summaries JSON schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionSummary {
    pub session: u64,
    pub n: u64,
    pub k: u64,
    pub proportion: f64,
    pub wood_position_yd: f64,
    pub seed: u64,
}

/// A simulated session: ordered throw records plus their summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    pub records: Vec<ThrowRecord>,
    pub summary: SessionSummary,
}

/// Simulate one session: draw the Wood once (trial slot 0), then throw the
/// Jack n times (trial slots 1..=n). Identical (seed, session) keys
/// reproduce identical output bit for bit.
pub fn throw_session(
    geometry: &GreenGeometry,
    n: u64,
    wood: &WoodDist,
    error: &ErrorDist,
    seed: u64,
    session: u64,
) -> Result<Session> {
    if n == 0 {
        return Err(Error::domain("throw count n must be at least 1"));
    }
    let wood_position = wood.sample(geometry, &mut ThrowRng::for_trial(seed, session, 0));
    let half_rink = geometry.rink_width_yd / 2.0;
    let mut records = Vec::with_capacity(n as usize);
    let mut k = 0u64;
    for trial in 1..=n {
        let offset = error.sample(&mut ThrowRng::for_trial(seed, session, trial));
        let side = if offset > 0.0 {
            Side::Right
        } else if offset < 0.0 {
            Side::Left
        } else {
            return Err(Error::ZeroOffset { trial });
        };
        if side == Side::Right {
            k += 1;
        }
        records.push(ThrowRecord {
            session,
            trial,
            offset_yd: offset,
            side,
            out_of_rink: (wood_position + offset).abs() > half_rink,
        });
    }
    let summary = SessionSummary {
        session,
        n,
        k,
        proportion: k as f64 / n as f64,
        wood_position_yd: wood_position,
        seed,
    };
    Ok(Session { records, summary })
}

/// Simulate sessions 1..=count under one master seed.
pub fn simulate_sessions(
    geometry: &GreenGeometry,
    n: u64,
    wood: &WoodDist,
    error: &ErrorDist,
    seed: u64,
    count: u64,
) -> Result<Vec<Session>> {
    if count == 0 {
        return Err(Error::domain("session count must be at least 1"));
    }
    (1..=count)
        .map(|session| throw_session(geometry, n, wood, error, seed, session))
        .collect()
}

/// Score a sequence of signed offsets: k = strictly positive count.
pub fn score_sides(offsets: &[f64]) -> Result<CountData> {
    if offsets.is_empty() {
        return Err(Error::domain("no offsets to score"));
    }
    let mut k = 0u64;
    for (i, &x) in offsets.iter().enumerate() {
        let trial = i as u64 + 1;
        if x.is_nan() || x.is_infinite() {
            return Err(Error::domain(format!("offset at trial {trial} is not finite: {x}")));
        }
        if x == 0.0 {
            return Err(Error::ZeroOffset { trial });
        }
        if x > 0.0 {
            k += 1;
        }
    }
    CountData::new(offsets.len() as u64, k)
}

/// Replication report across sessions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateReport {
    /// Right-pass count of each session, in session order.
    pub session_ks: Vec<u64>,
    pub pooled_n: u64,
    pub pooled_k: u64,
    pub pooled_proportion: f64,
    /// Empirical distribution of k across sessions.
    pub k_distribution: BTreeMap<u64, u64>,
    /// Fit verdict of each session against theta0, in session order.
    pub verdicts: Vec<Verdict>,
    /// Fraction of sessions whose fit verdict is discrepant.
    pub rejection_rate: f64,
    pub theta0: f64,
    pub lr_threshold: f64,
}

/// Summarize sessions: pooled proportion, the empirical k distribution, and
/// a per-session likelihood-ratio fit verdict at the given threshold.
pub fn summarize_sessions(
    summaries: &[SessionSummary],
    theta0: f64,
    lr_threshold: f64,
) -> Result<AggregateReport> {
    if summaries.is_empty() {
        return Err(Error::domain("no sessions to summarize"));
    }
    let mut session_ks = Vec::with_capacity(summaries.len());
    let mut k_distribution: BTreeMap<u64, u64> = BTreeMap::new();
    let mut verdicts = Vec::with_capacity(summaries.len());
    let mut pooled_n = 0u64;
    let mut pooled_k = 0u64;
    let mut rejected = 0u64;
    for s in summaries {
        session_ks.push(s.k);
        *k_distribution.entry(s.k).or_insert(0) += 1;
        pooled_n += s.n;
        pooled_k += s.k;
        let report = gof::fit_counts(&CountData::new(s.n, s.k)?, theta0, lr_threshold)?;
        if report.verdict == Verdict::Discrepant {
            rejected += 1;
        }
        verdicts.push(report.verdict);
    }
    Ok(AggregateReport {
        session_ks,
        pooled_n,
        pooled_k,
        pooled_proportion: pooled_k as f64 / pooled_n as f64,
        k_distribution,
        verdicts,
        rejection_rate: rejected as f64 / summaries.len() as f64,
        theta0,
        lr_threshold,
    })
}
