//! CSV output of sweep results.
//!
//! Columns are `ebn0_db,frames,frame_errors,fer,bit_errors,ber,seconds`,
//! optionally followed by a `label` column naming the curve. FER is written
//! in scientific notation with ten significant digits and re-derived from
//! the counts on reading.

use std::fmt::Write as _;
use std::path::Path;

use super::{FerRecord, HarnessError};

pub const HEADER: &str = "ebn0_db,frames,frame_errors,fer,bit_errors,ber,seconds";

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub label: Option<String>,
    pub record: FerRecord,
}

fn format_record(out: &mut String, r: &FerRecord) {
    let _ = write!(
        out,
        "{},{},{},{:.9e},{},{},{}",
        r.ebn0_db, r.frames, r.frame_errors, r.fer, r.bit_errors, r.ber, r.seconds
    );
}

pub fn format_csv(records: &[FerRecord]) -> String {
    let mut out = format!("{HEADER}\n");
    for r in records {
        format_record(&mut out, r);
        out.push('\n');
    }
    out
}

/// Labels may not contain commas, quotes or line breaks.
pub fn valid_label(label: &str) -> bool {
    !label.is_empty() && !label.contains([',', '"', '\n', '\r'])
}

pub fn format_labeled_csv(rows: &[(String, FerRecord)]) -> Result<String, HarnessError> {
    let mut out = format!("{HEADER},label\n");
    for (label, r) in rows {
        if !valid_label(label) {
            return Err(HarnessError::Config(format!("invalid curve label `{label}`")));
        }
        format_record(&mut out, r);
        let _ = writeln!(out, ",{label}");
    }
    Ok(out)
}

fn write_text(path: &Path, text: &str) -> Result<(), HarnessError> {
    std::fs::write(path, text).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_csv(records: &[FerRecord], path: &Path) -> Result<(), HarnessError> {
    write_text(path, &format_csv(records))
}

pub fn write_labeled_csv(rows: &[(String, FerRecord)], path: &Path) -> Result<(), HarnessError> {
    let text = format_labeled_csv(rows)?;
    write_text(path, &text)
}

pub fn parse_csv(text: &str, path: &str) -> Result<Vec<CsvRow>, HarnessError> {
    let err = |line: usize, message: String| HarnessError::Csv {
        path: path.to_string(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    let labeled = match lines.next() {
        Some((_, h)) if h == HEADER => false,
        Some((_, h)) if h.strip_suffix(",label") == Some(HEADER) => true,
        _ => return Err(err(1, format!("expected header `{HEADER}`"))),
    };
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let n = i + 1;
        let fields: Vec<&str> = line.split(',').collect();
        let expected = if labeled { 8 } else { 7 };
        if fields.len() != expected {
            return Err(err(n, format!("{} fields, expected {expected}", fields.len())));
        }
        let float = |k: usize| fields[k].parse::<f64>().map_err(|e| err(n, format!("{}: {e}", fields[k])));
        let int = |k: usize| fields[k].parse::<u64>().map_err(|e| err(n, format!("{}: {e}", fields[k])));
        let (frames, frame_errors) = (int(1)?, int(2)?);
        if frame_errors > frames {
            return Err(err(n, "more frame errors than frames".into()));
        }
        let record = FerRecord {
            ebn0_db: float(0)?,
            frames,
            frame_errors,
            fer: if frames == 0 { 0.0 } else { frame_errors as f64 / frames as f64 },
            bit_errors: int(4)?,
            ber: float(5)?,
            seconds: float(6)?,
        };
        rows.push(CsvRow {
            label: labeled.then(|| fields[7].to_string()),
            record,
        });
    }
    Ok(rows)
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_csv(&text, &path.display().to_string())
}
