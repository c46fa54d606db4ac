//! Sweep report CSV.
//!
//! ```text
//! family,n,r,theta,margin,classification
//! ramanujan,1,1,8.54710621780661837815378097375e-1,1.45289378219338162184621902625e-1,inside
//! ```
//!
//! ASCII, LF line endings, header mandatory, reals in scientific notation
//! with [`SIGNIFICANT_DIGITS`] significant digits.

use std::fmt::Write as _;

use crate::error::ParseError;
use crate::expansions::Family;
use crate::numerics::rational::{parse_decimal, BigRational};
use crate::verification::{Classification, SweepSummary, ThetaReport};

pub const HEADER: &str = "family,n,r,theta,margin,classification";
pub const SIGNIFICANT_DIGITS: usize = 30;

/// One parsed report row; reals are the exact values of the printed decimals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvRecord {
    pub family: Family,
    pub n: u64,
    pub r: usize,
    pub theta: BigRational,
    pub margin: BigRational,
    pub classification: Classification,
}

impl CsvRecord {
    /// Whether the printed margin supports the printed classification.
    pub fn is_consistent(&self) -> bool {
        Classification::from_margin(&self.margin) == self.classification
    }
}

pub fn format_row(report: &ThetaReport) -> String {
    format!(
        "{},{},{},{},{},{}",
        report.family,
        report.n,
        report.r,
        report.theta.to_scientific_string(SIGNIFICANT_DIGITS),
        report.margin.to_scientific_string(SIGNIFICANT_DIGITS),
        report.classification.name()
    )
}

pub fn write_csv(summary: &SweepSummary) -> String {
    let mut out = String::with_capacity(64 * (summary.reports.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for report in &summary.reports {
        let _ = writeln!(out, "{}", format_row(report));
    }
    out
}

/// Parses a report produced by [`write_csv`]. A trailing newline is optional;
/// CR characters are rejected.
pub fn parse_csv(text: &str) -> Result<Vec<CsvRecord>, ParseError> {
    let mut lines = text.split('\n').enumerate();
    match lines.next() {
        Some((_, HEADER)) => {}
        Some((_, "")) | None => return Err(ParseError::Empty),
        Some((i, _)) => return Err(report_error(i, "missing or malformed header")),
    }
    let mut records = Vec::new();
    let mut ended = false;
    for (i, line) in lines {
        if line.is_empty() {
            ended = true;
            continue;
        }
        if ended {
            return Err(report_error(i, "content after blank line"));
        }
        records.push(parse_row(i, line)?);
    }
    Ok(records)
}

fn report_error(index: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Report {
        line: index + 1,
        msg: msg.into(),
    }
}

fn parse_row(index: usize, line: &str) -> Result<CsvRecord, ParseError> {
    let fields: Vec<&str> = line.split(',').collect();
    let [family, n, r, theta, margin, classification] = fields[..] else {
        return Err(report_error(
            index,
            format!("expected 6 fields, found {}", fields.len()),
        ));
    };
    let family: Family = family.parse().map_err(|e: String| report_error(index, e))?;
    let n = parse_count(index, "n", n)?;
    let r = parse_count(index, "r", r)?;
    let r = usize::try_from(r).map_err(|_| report_error(index, "r out of range"))?;
    let theta = parse_decimal(theta).map_err(|e| report_error(index, format!("theta: {e}")))?;
    let margin = parse_decimal(margin).map_err(|e| report_error(index, format!("margin: {e}")))?;
    let classification = Classification::from_name(classification)
        .ok_or_else(|| report_error(index, format!("unknown classification {classification:?}")))?;
    Ok(CsvRecord {
        family,
        n,
        r,
        theta,
        margin,
        classification,
    })
}

fn parse_count(index: usize, name: &str, s: &str) -> Result<u64, ParseError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(report_error(index, format!("{name}: expected digits")));
    }
    s.parse()
        .map_err(|_| report_error(index, format!("{name}: out of range")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Precision;
    use crate::verification::sweep;

    #[test]
    fn round_trip_reproduces_verdicts() {
        let p = Precision::new(192).unwrap();
        let summary = sweep(Family::Ramanujan, 1..=4, 1..=3, p).unwrap();
        let csv = write_csv(&summary);
        assert!(csv.is_ascii());
        assert!(!csv.contains('\r'));
        let records = parse_csv(&csv).unwrap();
        assert_eq!(records.len(), summary.reports.len());
        for (rec, rep) in records.iter().zip(&summary.reports) {
            assert_eq!((rec.family, rec.n, rec.r), (rep.family, rep.n, rep.r));
            assert_eq!(rec.classification, rep.classification);
            assert!(rec.is_consistent());
        }
    }

    #[test]
    fn rejects_malformed() {
        assert_eq!(parse_csv(""), Err(ParseError::Empty));
        assert!(parse_csv("family,n\n").is_err());
        let bad_fields = format!("{HEADER}\nramanujan,1,1\n");
        assert!(matches!(
            parse_csv(&bad_fields),
            Err(ParseError::Report { line: 2, .. })
        ));
        let bad_family = format!("{HEADER}\nlodge,1,1,0.5,0.5,inside\n");
        assert!(parse_csv(&bad_family).is_err());
        let crlf = format!("{HEADER}\r\n");
        assert!(parse_csv(&crlf).is_err());
        let trailing = format!("{HEADER}\n\nramanujan,1,1,0.5,0.5,inside\n");
        assert!(parse_csv(&trailing).is_err());
    }

    #[test]
    fn header_only_is_empty_report() {
        assert_eq!(parse_csv(HEADER).unwrap(), vec![]);
        assert_eq!(parse_csv(&format!("{HEADER}\n")).unwrap(), vec![]);
    }

    #[test]
    fn inconsistent_rows_are_detected() {
        let text = format!("{HEADER}\ndtw,3,2,1.2e0,-2.0e-1,inside\n");
        let rec = &parse_csv(&text).unwrap()[0];
        assert!(!rec.is_consistent());
    }
}
