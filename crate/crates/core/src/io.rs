//! Bitstring lists and result records.
//!
//! Bitstring files hold one binary string per line (leftmost character =
//! mode 0). Blank lines and lines starting with `#` are skipped.
//!
//! Result records are written one per line as JSON objects or CSV rows with
//! the fixed columns [`CSV_HEADER`]. Floats carry 17 significant digits so
//! that they read back to the same `f64`.

use std::fmt::Write as _;

use crate::circuit::BasisState;
use crate::engine::EstimateResult;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "bitstring,probability,trajectories_used,extent,seed,achieved_epsilon";

/// A bitstring with the 1-based line it was read from.
#[derive(Clone, Debug, PartialEq)]
pub struct BitstringEntry {
    pub line: usize,
    pub state: BasisState,
}

pub fn parse_bitstrings(text: &str, n: usize) -> Result<Vec<BitstringEntry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.chars().count() != n {
            return Err(Error::InvalidBitstring(format!(
                "line {}: length {} does not match {n} modes",
                i + 1,
                line.chars().count()
            )));
        }
        let state = BasisState::parse(line)
            .map_err(|e| Error::InvalidBitstring(format!("line {}: {e}", i + 1)))?;
        out.push(BitstringEntry { line: i + 1, state });
    }
    Ok(out)
}

/// Formats with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // Not representable as a JSON number.
        format!("\"{x}\"")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Jsonl,
    Csv,
}

pub fn json_record(b: &BasisState, r: &EstimateResult) -> String {
    let mut s = String::new();
    write!(
        s,
        "{{\"bitstring\":\"{b}\",\"probability\":{},\"trajectories_used\":{},\"extent\":{},\"seed\":{}",
        fmt_f64(r.probability),
        r.trajectories_used,
        fmt_f64(r.extent),
        r.seed
    )
    .unwrap();
    if let Some(e) = r.achieved_epsilon {
        write!(s, ",\"achieved_epsilon\":{}", fmt_f64(e)).unwrap();
    }
    if let Some(d) = r.failure_probability {
        write!(s, ",\"failure_probability\":{}", fmt_f64(d)).unwrap();
    }
    if let Some(k) = r.rounds {
        write!(s, ",\"rounds\":{k}").unwrap();
    }
    s.push('}');
    s
}

pub fn csv_record(b: &BasisState, r: &EstimateResult) -> String {
    format!(
        "{b},{},{},{},{},{}",
        fmt_f64(r.probability),
        r.trajectories_used,
        fmt_f64(r.extent),
        r.seed,
        r.achieved_epsilon.map(fmt_f64).unwrap_or_default()
    )
}

pub fn record(format: Format, b: &BasisState, r: &EstimateResult) -> String {
    match format {
        Format::Jsonl => json_record(b, r),
        Format::Csv => csv_record(b, r),
    }
}
