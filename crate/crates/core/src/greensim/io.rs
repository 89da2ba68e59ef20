//! CSV and JSON wire formats for throw records and session summaries.
//!
//! Records CSV: header `session,trial,offset_yd,side,out_of_rink`, side is
//! `L` or `R`, offsets carry full precision (shortest round-trip decimal).
//! Summaries JSON: array of objects with fields
//! `session, n, k, proportion, wood_position_yd, seed`.

use super::{Session, SessionSummary, ThrowRecord};
use crate::error::{Error, Result};
use std::io::Read;

pub const RECORDS_CSV_HEADER: &str = "session,trial,offset_yd,side,out_of_rink";

/// Serialize throw records to the records CSV format.
pub fn records_to_csv<'a>(records: impl IntoIterator<Item = &'a ThrowRecord>) -> String {
    let mut out = String::from(RECORDS_CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.session,
            r.trial,
            r.offset_yd,
            r.side.letter(),
            r.out_of_rink
        ));
    }
    out
}

/// Serialize session summaries to pretty-printed JSON.
pub fn summaries_to_json(summaries: &[SessionSummary]) -> String {
    let mut s = serde_json::to_string_pretty(summaries).expect("summaries serialize");
    s.push('\n');
    s
}

/// All records of a batch of sessions, in session order.
pub fn all_records(sessions: &[Session]) -> impl Iterator<Item = &ThrowRecord> {
    sessions.iter().flat_map(|s| s.records.iter())
}

/// Read signed offsets from a records CSV. The header must contain an
/// `offset_yd` column; other columns are ignored. Zero offsets are rejected
/// with the trial they occur at (the `trial` column when present, the row
/// position otherwise).
pub fn read_offsets_csv<R: Read>(reader: R) -> Result<Vec<f64>> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv_reader
        .headers()
        .map_err(|e| Error::Parse { line: 1, message: format!("unreadable header: {e}") })?
        .clone();
    let offset_col = headers
        .iter()
        .position(|h| h == "offset_yd")
        .ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("header has no offset_yd column: {}", headers.iter().collect::<Vec<_>>().join(",")),
        })?;
    let trial_col = headers.iter().position(|h| h == "trial");

    let mut offsets = Vec::new();
    for (i, row) in csv_reader.records().enumerate() {
        let line = i + 2; // 1-based, after the header
        let row = row.map_err(|e| Error::Parse { line, message: e.to_string() })?;
        let field = row.get(offset_col).ok_or_else(|| Error::Parse {
            line,
            message: "row is missing the offset_yd field".into(),
        })?;
        let offset: f64 = field.parse().map_err(|_| Error::Parse {
            line,
            message: format!("offset_yd is not a number: {field:?}"),
        })?;
        if offset == 0.0 {
            let trial = trial_col
                .and_then(|c| row.get(c))
                .and_then(|t| t.parse::<u64>().ok())
                .unwrap_or(i as u64 + 1);
            return Err(Error::ZeroOffset { trial });
        }
        offsets.push(offset);
    }
    Ok(offsets)
}
