//! One handler per subcommand; each returns the stdout payload.

use crate::args::{ConvertArgs, FitArgs, Format, IntervalArgs, PosteriorArgs, ScoreArgs, SimulateArgs};
use crate::output::{parse_theta, KvTable, ThetaSpec};
use anyhow::{anyhow, bail, Context, Result};
use greenbayes::bayesrule::{self, Convention, CountData, PosteriorQuery};
use greenbayes::gof;
use greenbayes::greensim::{
    self, records_to_csv, summaries_to_json, ErrorDist, GreenGeometry, WoodDist,
};
use greenbayes::units::{self, format_sig, Quantity, Unit};
use greenbayes::BinomialModel;
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

fn model_from_flags(n: u64, theta: &str) -> Result<BinomialModel> {
    let model = match parse_theta(theta).map_err(|e| anyhow!("invalid --theta: {e}"))? {
        ThetaSpec::Ratio(num, den) => BinomialModel::from_ratio(n, num, den),
        ThetaSpec::Real(t) => BinomialModel::from_theta(n, t),
    };
    model.map_err(|e| anyhow!("invalid model: {e}"))
}

#[derive(Serialize)]
struct IntervalOutput {
    n: u64,
    theta: f64,
    theta_exact: Option<String>,
    alpha: f64,
    convention: Convention,
    k_lo: u64,
    k_hi: u64,
    coverage: f64,
    coverage_exact: Option<String>,
    span: Quantity,
    width: Quantity,
    width_metres: Quantity,
}

pub fn interval(args: &IntervalArgs, format: Format) -> Result<String> {
    let model = model_from_flags(args.n, &args.theta)?;
    let convention: Convention =
        args.convention.parse().map_err(|e| anyhow!("invalid --convention: {e}"))?;
    let unit: Unit = args.unit.parse().map_err(|e| anyhow!("invalid --unit: {e}"))?;
    let iv = bayesrule::central_interval(&model, args.alpha, convention)
        .map_err(|e| anyhow!("invalid --alpha: {e}"))?;
    let span = Quantity::new(args.span, unit);
    let width = bayesrule::interval_to_distance(&iv, args.n, &span)
        .map_err(|e| anyhow!("invalid --span: {e}"))?;
    let width_metres = units::convert(&width, Unit::Metre)?;

    let out = IntervalOutput {
        n: args.n,
        theta: model.theta(),
        theta_exact: model.theta_ratio().map(|(a, b)| format!("{a}/{b}")),
        alpha: args.alpha,
        convention,
        k_lo: iv.k_lo(),
        k_hi: iv.k_hi(),
        coverage: iv.coverage().to_f64(),
        coverage_exact: iv.coverage().as_rational().map(|r| format!("{r}")),
        span,
        width,
        width_metres,
    };
    Ok(match format {
        Format::Json => to_json(&out)?,
        Format::Human => {
            let mut t = KvTable::new();
            t.row("n", out.n.to_string())
                .row("theta", out.theta_exact.clone().unwrap_or_else(|| out.theta.to_string()))
                .row("alpha", out.alpha.to_string())
                .row("convention", out.convention.to_string())
                .row("k_lo", out.k_lo.to_string())
                .row("k_hi", out.k_hi.to_string())
                .row("coverage", out.coverage.to_string());
            if let Some(exact) = &out.coverage_exact {
                t.row("coverage (exact)", exact.clone());
            }
            let fraction = format!("{}/{}", iv.width(), args.n);
            t.row(
                "width",
                format!(
                    "{fraction} of {} {} = {:.2} {} = {:.2} metre",
                    out.span.value,
                    out.span.unit,
                    out.width.value,
                    out.width.unit,
                    out.width_metres.value
                ),
            );
            t.render()
        }
        Format::Csv => bail!("csv format is not defined for interval output"),
    })
}

#[derive(Serialize)]
struct FitOutput {
    n: u64,
    k: u64,
    #[serde(flatten)]
    report: gof::FitReport,
}

pub fn fit(args: &FitArgs, format: Format) -> Result<String> {
    let data = CountData::new(args.n, args.k).map_err(|e| anyhow!("invalid --n/--k: {e}"))?;
    let report = gof::fit_counts(&data, args.theta0, args.lr_threshold)
        .map_err(|e| anyhow!("invalid --theta0/--lr-threshold: {e}"))?;
    Ok(match format {
        Format::Json => to_json(&FitOutput { n: args.n, k: args.k, report })?,
        Format::Human => {
            let mut t = KvTable::new();
            t.row("n", args.n.to_string())
                .row("k", args.k.to_string())
                .row("proportion", format_sig(data.proportion(), 3))
                .row("theta0", report.theta0.to_string())
                .row("LR", format_sig(report.lr, 2))
                .row("G2", format_sig(report.g2, 2))
                .row("p", format_sig(report.p_value, 2))
                .row(
                    "verdict",
                    format!("{} (LR {} {})", report.verdict,
                        if report.lr < report.threshold { "<" } else { ">=" },
                        report.threshold),
                );
            t.render()
        }
        Format::Csv => bail!("csv format is not defined for fit output"),
    })
}

#[derive(Serialize)]
struct PosteriorOutput {
    n: u64,
    k: u64,
    lo: f64,
    hi: f64,
    beta_prob: f64,
    cells: Option<usize>,
    discrete_prob: Option<f64>,
}

pub fn posterior(args: &PosteriorArgs, format: Format) -> Result<String> {
    let data = CountData::new(args.n, args.k).map_err(|e| anyhow!("invalid --n/--k: {e}"))?;
    let query =
        PosteriorQuery::new(args.lo, args.hi).map_err(|e| anyhow!("invalid --lo/--hi: {e}"))?;
    let beta_prob = bayesrule::beta_posterior_prob(&data, &query)?;
    let discrete_prob = match args.cells {
        Some(cells) => {
            let weights = bayesrule::discrete_posterior(&data, cells)
                .map_err(|e| anyhow!("invalid --cells: {e}"))?;
            Some(bayesrule::aggregate_cells(&weights, args.lo, args.hi))
        }
        None => None,
    };
    let out = PosteriorOutput {
        n: args.n,
        k: args.k,
        lo: args.lo,
        hi: args.hi,
        beta_prob,
        cells: args.cells,
        discrete_prob,
    };
    Ok(match format {
        Format::Json => to_json(&out)?,
        Format::Human => {
            let mut t = KvTable::new();
            t.row("n", out.n.to_string())
                .row("k", out.k.to_string())
                .row("query", format!("({}, {})", out.lo, out.hi))
                .row("beta posterior", out.beta_prob.to_string());
            if let (Some(cells), Some(d)) = (out.cells, out.discrete_prob) {
                t.row(format!("discrete ({cells} cells)"), d.to_string());
                t.row("difference", format!("{:e}", (d - out.beta_prob).abs()));
            }
            t.render()
        }
        Format::Csv => bail!("csv format is not defined for posterior output"),
    })
}

pub fn simulate(args: &SimulateArgs, format: Format) -> Result<String> {
    let kind = args.error_dist.parse().map_err(|e| anyhow!("invalid --error-dist: {e}"))?;
    let error =
        ErrorDist::new(kind, args.error_scale).map_err(|e| anyhow!("invalid --error-scale: {e}"))?;
    let wood = WoodDist::UniformAcrossRink { bias_yd: args.wood_bias };
    let geometry = GreenGeometry::default();
    let sessions =
        greensim::simulate_sessions(&geometry, args.throws, &wood, &error, args.seed, args.sessions)
            .map_err(|e| anyhow!("invalid --throws/--sessions: {e}"))?;

    let summaries: Vec<_> = sessions.iter().map(|s| s.summary.clone()).collect();
    let records_csv = records_to_csv(greensim::all_records(&sessions));
    let summaries_json = summaries_to_json(&summaries);

    if let Some(out_path) = &args.out {
        let json_path = summaries_path(out_path)?;
        write_atomically(out_path, &records_csv, &json_path, &summaries_json)?;
    }

    Ok(match format {
        Format::Json => summaries_json,
        Format::Csv => records_csv,
        Format::Human => {
            let mut t = KvTable::new();
            for s in &summaries {
                t.row(
                    format!("session {}", s.session),
                    format!(
                        "n {}  k {}  proportion {}  wood {} yd",
                        s.n,
                        s.k,
                        format_sig(s.proportion, 3),
                        format_sig(s.wood_position_yd, 3)
                    ),
                );
            }
            let pooled_k: u64 = summaries.iter().map(|s| s.k).sum();
            let pooled_n: u64 = summaries.iter().map(|s| s.n).sum();
            t.row(
                "pooled",
                format!(
                    "k {pooled_k} / n {pooled_n} = {}",
                    format_sig(pooled_k as f64 / pooled_n as f64, 3)
                ),
            );
            if let Some(out_path) = &args.out {
                t.row("records", out_path.display().to_string());
                t.row("summaries", summaries_path(out_path)?.display().to_string());
            }
            t.render()
        }
    })
}

fn summaries_path(records_path: &Path) -> Result<PathBuf> {
    let json_path = records_path.with_extension("json");
    if json_path == records_path {
        bail!(
            "--out {} would collide with the summaries JSON path; use a different extension",
            records_path.display()
        );
    }
    Ok(json_path)
}

/// Write both output files via temporaries and rename, so a failure leaves
/// no partial output behind.
fn write_atomically(csv_path: &Path, csv: &str, json_path: &Path, json: &str) -> Result<()> {
    let csv_tmp = tmp_sibling(csv_path);
    let json_tmp = tmp_sibling(json_path);
    let result = (|| -> Result<()> {
        fs::write(&csv_tmp, csv)
            .with_context(|| format!("cannot write records to {}", csv_tmp.display()))?;
        fs::write(&json_tmp, json)
            .with_context(|| format!("cannot write summaries to {}", json_tmp.display()))?;
        fs::rename(&csv_tmp, csv_path)?;
        match fs::rename(&json_tmp, json_path) {
            Ok(()) => Ok(()),
            Err(e) => {
                let _ = fs::remove_file(csv_path);
                Err(e.into())
            }
        }
    })();
    if result.is_err() {
        let _ = fs::remove_file(&csv_tmp);
        let _ = fs::remove_file(&json_tmp);
    }
    result
}

fn tmp_sibling(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    path.with_file_name(name)
}

#[derive(Serialize)]
struct ScoreOutput {
    n: u64,
    k: u64,
    proportion: f64,
}

pub fn score(args: &ScoreArgs, format: Format) -> Result<String> {
    let file = fs::File::open(&args.input)
        .with_context(|| format!("cannot open --in {}", args.input.display()))?;
    let offsets = greensim::read_offsets_csv(file)
        .map_err(|e| anyhow!("{}: {e}", args.input.display()))?;
    let data =
        greensim::score_sides(&offsets).map_err(|e| anyhow!("{}: {e}", args.input.display()))?;
    let out = ScoreOutput { n: data.n(), k: data.k(), proportion: data.proportion() };
    Ok(match format {
        Format::Json => to_json(&out)?,
        Format::Csv => format!("n,k,proportion\n{},{},{}\n", out.n, out.k, out.proportion),
        Format::Human => {
            let mut t = KvTable::new();
            t.row("n", out.n.to_string())
                .row("k", out.k.to_string())
                .row("proportion", out.proportion.to_string());
            t.render()
        }
    })
}

pub fn convert(args: &ConvertArgs, format: Format) -> Result<String> {
    let from: Unit = args.from.parse().map_err(|e| anyhow!("invalid --from: {e}"))?;
    let to: Unit = args.to.parse().map_err(|e| anyhow!("invalid --to: {e}"))?;
    let converted = units::convert(&Quantity::new(args.value, from), to)
        .map_err(|e| anyhow!("invalid --value: {e}"))?;
    Ok(match format {
        Format::Json => to_json(&converted)?,
        Format::Human => format!("{} {} = {} {}\n", args.value, from, converted.value, to),
        Format::Csv => bail!("csv format is not defined for convert output"),
    })
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
