//! Rendering helpers shared by the subcommands.

use std::fmt::Write as _;

/// Two-column key/value block for human output.
pub struct KvTable {
    rows: Vec<(String, String)>,
}

impl KvTable {
    pub fn new() -> Self {
        KvTable { rows: Vec::new() }
    }

    pub fn row(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.rows.push((key.into(), value.into()));
        self
    }

    pub fn render(&self) -> String {
        let width = self.rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }
}

/// Theta parsed from a command-line string: ratios ("1/2") and plain decimal
/// strings ("0.468") become exact rationals; anything else that parses as a
/// float (e.g. "1e-3") falls back to float mode.
pub enum ThetaSpec {
    Ratio(u64, u64),
    Real(f64),
}

pub fn parse_theta(s: &str) -> Result<ThetaSpec, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: u64 = num.trim().parse().map_err(|_| format!("bad ratio numerator in {s:?}"))?;
        let den: u64 = den.trim().parse().map_err(|_| format!("bad ratio denominator in {s:?}"))?;
        return Ok(ThetaSpec::Ratio(num, den));
    }
    if let Some((num, den)) = decimal_to_ratio(s) {
        return Ok(ThetaSpec::Ratio(num, den));
    }
    s.parse::<f64>()
        .map(ThetaSpec::Real)
        .map_err(|_| format!("cannot parse {s:?} as a probability"))
}

/// "0.468" -> (468, 1000); None when the string is not a plain decimal or
/// its exact form does not fit in u64.
fn decimal_to_ratio(s: &str) -> Option<(u64, u64)> {
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let den = 10u64.checked_pow(frac_part.len() as u32)?;
    let int_val: u64 = if int_part.is_empty() { 0 } else { int_part.parse().ok()? };
    let frac_val: u64 = if frac_part.is_empty() { 0 } else { frac_part.parse().ok()? };
    let num = int_val.checked_mul(den)?.checked_add(frac_val)?;
    Some((num, den))
}
