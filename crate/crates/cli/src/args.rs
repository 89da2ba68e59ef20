//! Flag definitions for every subcommand.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "greenbayes",
    version,
    about = "Exact binomial intervals, likelihood-ratio fit checks, historical units, \
             and a reproducible bowling-green throw simulator"
)]
pub struct Cli {
    /// Output format (also via the GREENBAYES_FORMAT environment variable)
    #[arg(long, global = true, env = "GREENBAYES_FORMAT", value_enum, default_value_t = Format::Human)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equal-tailed central count interval with recomputed coverage and its
    /// physical width on the rink
    Interval(IntervalArgs),
    /// Likelihood-ratio goodness of fit of counts to a fixed-theta binomial
    Fit(FitArgs),
    /// Uniform-prior posterior probability of theta lying between two bounds,
    /// with an optional discrete-cell oracle
    Posterior(PosteriorArgs),
    /// Simulate tandem throwing sessions (Wood placed once, Jack thrown n
    /// times, sides scored)
    Simulate(SimulateArgs),
    /// Score an ingested offsets CSV into (n, k) counts
    Score(ScoreArgs),
    /// Convert a length between perch, yard, foot, and metre
    Convert(ConvertArgs),
    /// Recompute the reference 156-throw analysis and tag every figure
    /// matched or unmatched against the published values
    Reproduce,
}

#[derive(Debug, Args)]
pub struct IntervalArgs {
    /// Trial count
    #[arg(long)]
    pub n: u64,
    /// Success chance; a ratio like 1/2 or a decimal like 0.5 stays exact
    #[arg(long, default_value = "1/2")]
    pub theta: String,
    /// Total tail budget
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Physical span corresponding to the full count range
    #[arg(long, default_value_t = 1.0)]
    pub span: f64,
    /// Unit of the span
    #[arg(long, default_value = "perch")]
    pub unit: String,
    /// Endpoint convention: nonstrict-both or strict-lower-nonstrict-upper
    #[arg(long, default_value = "nonstrict-both")]
    pub convention: String,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Throw count
    #[arg(long)]
    pub n: u64,
    /// Right-pass count
    #[arg(long)]
    pub k: u64,
    /// Null success chance
    #[arg(long, default_value_t = 0.5)]
    pub theta0: f64,
    /// Consistency cutoff: the verdict is consistent while LR < threshold
    #[arg(long = "lr-threshold", default_value_t = 5.0)]
    pub lr_threshold: f64,
}

#[derive(Debug, Args)]
pub struct PosteriorArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: u64,
    /// Lower probability bound
    #[arg(long)]
    pub lo: f64,
    /// Upper probability bound
    #[arg(long)]
    pub hi: f64,
    /// Also evaluate the discrete posterior over this many equal cells
    #[arg(long)]
    pub cells: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Jack throws per session
    #[arg(long)]
    pub throws: u64,
    /// Number of sessions
    #[arg(long, default_value_t = 1)]
    pub sessions: u64,
    /// Error shape: gaussian, uniform, or laplace
    #[arg(long = "error-dist", default_value = "gaussian")]
    pub error_dist: String,
    /// Error scale in yards (sd / half-width / decay length)
    #[arg(long = "error-scale", default_value_t = 1.0)]
    pub error_scale: f64,
    /// Master seed; identical seeds reproduce identical output
    #[arg(long)]
    pub seed: u64,
    /// Bias offset of the Wood's uniform resting distribution, in yards
    #[arg(long = "wood-bias", default_value_t = 0.0)]
    pub wood_bias: f64,
    /// Write throw records CSV here and session summaries JSON alongside
    /// (same path with a .json extension)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Offsets CSV to ingest (needs an offset_yd column)
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long)]
    pub value: f64,
    #[arg(long)]
    pub from: String,
    #[arg(long)]
    pub to: String,
}
