//! `fit`: scaling-law fit and threshold estimate from a sweep CSV.

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use qec_blueprint::qec_sim::sweep::{curves, read_csv};
use qec_blueprint::qec_sim::{estimate_threshold, fit_scaling, ScalingFit, SweepRow};
use qec_blueprint::{Error, Result};

use crate::config::merge;
use crate::report::{Envelope, Provenance, Source, TOOL};
use crate::simulate::{crossings, Crossing};
use crate::{require, write_file, ReportOpts};

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitArgs {
    /// Sweep CSV written by `simulate`; `-` reads standard input.
    pub input: Option<PathBuf>,
    /// Fit only rows with p at or above this value.
    #[arg(long)]
    pub p_min: Option<f64>,
    /// Fit only rows with p at or below this value.
    #[arg(long)]
    pub p_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FitCmd {
    #[command(flatten)]
    pub args: FitArgs,
    #[command(flatten)]
    pub io: ReportOpts,
    /// Write a `fitted` scaling preset usable by `estimate --preset-file`.
    #[arg(long)]
    pub preset_out: Option<PathBuf>,
}

/// Scaling constants saved for reuse by `estimate`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FittedPreset {
    pub tool: String,
    pub version: String,
    pub preset: String,
    pub c1: f64,
    pub c2: f64,
    pub residual_r2: f64,
    pub threshold_estimate: Option<f64>,
    pub source: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Suppression {
    pub p: f64,
    /// `ln(c2_hat p)`; negative means larger codes help at this `p`.
    pub exponent: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub rows_read: usize,
    pub rows_in_range: usize,
    pub fit: ScalingFit,
    pub fitted_threshold: f64,
    pub suppression: Vec<Suppression>,
    /// Crossing of the two largest distances, over all rows read.
    pub threshold_estimate: Option<f64>,
    pub threshold_error: Option<String>,
    pub crossings: Vec<Crossing>,
}

pub fn read_rows(input: &Path) -> Result<Vec<SweepRow>> {
    if input.as_os_str() == "-" {
        return read_csv(io::stdin().lock());
    }
    let file = File::open(input)
        .map_err(|e| Error::Config(format!("cannot open sweep {}: {e}", input.display())))?;
    read_csv(BufReader::new(file))
}

pub fn analyse(rows: &[SweepRow], p_min: Option<f64>, p_max: Option<f64>) -> Result<FitResult> {
    let in_range: Vec<&SweepRow> = rows
        .iter()
        .filter(|r| p_min.is_none_or(|lo| r.p >= lo) && p_max.is_none_or(|hi| r.p <= hi))
        .collect();
    let points: Vec<_> = in_range.iter().map(|r| r.fit_point()).collect();
    let fit = fit_scaling(&points)?;
    let mut ps: Vec<f64> = fit.points_used.iter().map(|pt| pt.p).collect();
    ps.sort_by(f64::total_cmp);
    ps.dedup();
    let suppression = ps
        .into_iter()
        .map(|p| Suppression { p, exponent: fit.suppression_exponent(p) })
        .collect();
    let (threshold_estimate, threshold_error) = match estimate_threshold(&curves(rows)) {
        Ok(t) => (Some(t), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(FitResult {
        rows_read: rows.len(),
        rows_in_range: in_range.len(),
        fitted_threshold: 1.0 / fit.c2_hat,
        suppression,
        threshold_estimate,
        threshold_error,
        crossings: crossings(rows),
        fit,
    })
}

pub fn run(cmd: &FitCmd, out: &mut dyn Write) -> Result<()> {
    let args = merge(&cmd.args, cmd.io.config.as_deref())?;
    let input = require(args.input.clone(), "input")?;
    let rows = read_rows(&input)?;
    let result = analyse(&rows, args.p_min, args.p_max)?;

    if let Some(path) = &cmd.preset_out {
        let preset = FittedPreset {
            tool: TOOL.into(),
            version: qec_blueprint::VERSION.into(),
            preset: "fitted".into(),
            c1: result.fit.c1_hat,
            c2: result.fit.c2_hat,
            residual_r2: result.fit.residual_r2,
            threshold_estimate: result.threshold_estimate,
            source: input.display().to_string(),
        };
        write_file(path, &(serde_json::to_string_pretty(&preset)? + "\n"))?;
    }

    let mut prov = Provenance::new();
    prov.insert("input".into(), Source::User);
    prov.insert("fit.c1_hat".into(), Source::Fitted);
    prov.insert("fit.c2_hat".into(), Source::Fitted);
    prov.insert("threshold_estimate".into(), Source::Derived);
    let json = Envelope::new("fit", None, args, prov, result).to_json()?;
    cmd.io.emit(&json, out)
}
