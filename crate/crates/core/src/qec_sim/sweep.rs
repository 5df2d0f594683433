//! Sweep tables in CSV form.
//!
//! Column order is fixed:
//!
//! ```text
//! d,p,trials,failures,p_l_hat,std_err,noise,failures_x,failures_z,over_ceiling
//! ```
//!
//! Files may begin with `#` comment lines carrying run metadata.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::fit::{Curve, FitPoint};
use super::monte_carlo::LogicalErrorEstimate;
use super::noise::NoiseKind;
use crate::error::{Error, Result};

pub const CSV_COLUMNS: [&str; 10] = [
    "d",
    "p",
    "trials",
    "failures",
    "p_l_hat",
    "std_err",
    "noise",
    "failures_x",
    "failures_z",
    "over_ceiling",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub d: u32,
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub p_l_hat: f64,
    pub std_err: f64,
    pub noise: NoiseKind,
    pub failures_x: u64,
    pub failures_z: u64,
    pub over_ceiling: u64,
}

impl SweepRow {
    pub fn new(d: u32, p: f64, noise: NoiseKind, est: &LogicalErrorEstimate) -> Self {
        Self {
            d,
            p,
            trials: est.trials,
            failures: est.failures,
            p_l_hat: est.p_l_hat,
            std_err: est.std_err,
            noise,
            failures_x: est.failures_x,
            failures_z: est.failures_z,
            over_ceiling: est.over_ceiling,
        }
    }

    pub fn fit_point(&self) -> FitPoint {
        FitPoint {
            p: self.p,
            d: self.d,
            p_l_hat: self.p_l_hat,
            std_err: self.std_err,
            failures: Some(self.failures),
        }
    }

    fn validate(&self, line: usize) -> Result<()> {
        let bad = |what: &str| Err(Error::Schema(format!("row {line}: {what}")));
        if self.d < 1 || self.d % 2 == 0 {
            return bad("d must be odd and positive");
        }
        if !(0.0..=1.0).contains(&self.p) {
            return bad("p outside [0, 1]");
        }
        if self.trials == 0 || self.failures > self.trials {
            return bad("failures must not exceed trials, trials must be positive");
        }
        if self.failures_x > self.failures || self.failures_z > self.failures {
            return bad("per-type failures exceed total failures");
        }
        let expected = self.failures as f64 / self.trials as f64;
        if (self.p_l_hat - expected).abs() > 1e-9 {
            return bad("p_l_hat inconsistent with failures/trials");
        }
        Ok(())
    }
}

/// Writes metadata comments, the header and rows.
pub fn write_csv<W: Write>(mut out: W, comments: &[String], rows: &[SweepRow]) -> Result<()> {
    for c in comments {
        for line in c.lines() {
            writeln!(out, "# {line}")?;
        }
    }
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(out);
    if rows.is_empty() {
        w.write_record(CSV_COLUMNS)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads and schema-checks a sweep CSV.
pub fn read_csv<R: BufRead>(input: R) -> Result<Vec<SweepRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(input);
    let headers = rdr.headers().map_err(|e| Error::Schema(e.to_string()))?.clone();
    let got: Vec<&str> = headers.iter().collect();
    if got != CSV_COLUMNS {
        return Err(Error::Schema(format!(
            "expected columns {:?}, found {:?}",
            CSV_COLUMNS, got
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.deserialize::<SweepRow>().enumerate() {
        let row = rec.map_err(|e| Error::Schema(format!("row {}: {e}", i + 1)))?;
        row.validate(i + 1)?;
        rows.push(row);
    }
    Ok(rows)
}

/// Groups rows into one curve per distance, sorted by `p`.
pub fn curves(rows: &[SweepRow]) -> Vec<Curve> {
    let mut ds: Vec<u32> = rows.iter().map(|r| r.d).collect();
    ds.sort_unstable();
    ds.dedup();
    ds.into_iter()
        .map(|d| {
            let mut points: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.d == d)
                .map(|r| (r.p, r.p_l_hat))
                .collect();
            points.sort_by(|a, b| a.0.total_cmp(&b.0));
            Curve { d, points }
        })
        .collect()
}
