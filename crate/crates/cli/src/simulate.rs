//! `simulate`: Monte Carlo sweep over distances and error rates.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use log::info;
use serde::{Deserialize, Serialize};

use qec_blueprint::qec_sim::fit::pairwise_crossing;
use qec_blueprint::qec_sim::monte_carlo::DEFAULT_DEFECT_CEILING;
use qec_blueprint::qec_sim::sweep::{curves, write_csv};
use qec_blueprint::qec_sim::{run_monte_carlo_on, NoiseKind, NoiseModel, PlanarLattice, SimConfig, SweepRow};
use qec_blueprint::surface_code::{CodeDistance, ErrorRate};
use qec_blueprint::{Error, Result};

use crate::config::merge;
use crate::report::{Envelope, Provenance, Source};
use crate::{require, write_file};

fn parse_noise(s: &str) -> std::result::Result<NoiseKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateArgs {
    /// Odd code distances, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub d: Option<Vec<u32>>,
    /// Physical error rates, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    /// Shots per (d, p) point [default: 10000].
    #[arg(long)]
    pub trials: Option<u64>,
    /// Base seed; shot i of every point uses seed + i [default: 1].
    #[arg(long)]
    pub seed: Option<u64>,
    /// code-capacity or phenomenological [default: code-capacity].
    #[arg(long, value_parser = parse_noise)]
    pub noise: Option<NoiseKind>,
    /// Syndrome measurement error rate (phenomenological) [default: p].
    #[arg(long)]
    pub measurement_error: Option<f64>,
    /// Noisy measurement rounds (phenomenological) [default: d].
    #[arg(long)]
    pub rounds: Option<u32>,
    /// Sample X errors only.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub x_only: Option<bool>,
    /// Worker threads [default: logical CPU count].
    #[arg(long)]
    pub workers: Option<usize>,
    /// Shots with more defects than this are counted in over_ceiling [default: 60].
    #[arg(long)]
    pub defect_ceiling: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimulateCmd {
    #[command(flatten)]
    pub args: SimulateArgs,
    /// JSON config file; explicit flags take precedence over its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write a JSON summary with crossings to this file.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

/// Everything that determines the CSV contents. Worker count is excluded:
/// results do not depend on it.
#[derive(Debug, Clone, Serialize)]
pub struct SimulateConfig {
    pub d: Vec<u32>,
    pub p: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub noise: NoiseKind,
    pub measurement_error: Option<f64>,
    pub rounds: Option<u32>,
    pub x_only: bool,
    pub defect_ceiling: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Crossing {
    pub d_small: u32,
    pub d_large: u32,
    pub p_cross: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateSummary {
    pub workers: usize,
    pub rows: Vec<SweepRow>,
    pub crossings: Vec<Crossing>,
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

pub fn resolve(args: &SimulateArgs, config: Option<&Path>) -> Result<(SimulateConfig, usize)> {
    let a = merge(args, config)?;
    let d = require(a.d, "d")?;
    let p = require(a.p, "p")?;
    if d.is_empty() || p.is_empty() {
        return Err(Error::Config("d and p lists must be non-empty".into()));
    }
    for &di in &d {
        if di % 2 == 0 || !(3..=25).contains(&di) {
            return Err(Error::InvalidInput(format!("distance {di} must be odd and in [3, 25]")));
        }
    }
    for &pi in &p {
        ErrorRate::new(pi)?;
    }
    let trials = a.trials.unwrap_or(10_000);
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let noise = a.noise.unwrap_or(NoiseKind::CodeCapacity);
    if noise == NoiseKind::CodeCapacity && (a.measurement_error.is_some() || a.rounds.is_some()) {
        return Err(Error::Config(
            "measurement_error and rounds only apply to phenomenological noise".into(),
        ));
    }
    if let Some(q) = a.measurement_error {
        ErrorRate::new(q)?;
    }
    if a.rounds == Some(0) {
        return Err(Error::InvalidInput("rounds must be at least 1".into()));
    }
    let workers = a.workers.unwrap_or_else(default_workers);
    if workers == 0 {
        return Err(Error::InvalidInput("workers must be at least 1".into()));
    }
    Ok((
        SimulateConfig {
            d,
            p,
            trials,
            seed: a.seed.unwrap_or(1),
            noise,
            measurement_error: a.measurement_error,
            rounds: a.rounds,
            x_only: a.x_only.unwrap_or(false),
            defect_ceiling: a.defect_ceiling.unwrap_or(DEFAULT_DEFECT_CEILING),
        },
        workers,
    ))
}

pub fn noise_model(c: &SimulateConfig, d: u32, p: f64) -> Result<NoiseModel> {
    let rate = ErrorRate::new(p)?;
    let model = match c.noise {
        NoiseKind::CodeCapacity => NoiseModel::code_capacity(rate),
        NoiseKind::Phenomenological => {
            let q = ErrorRate::new(c.measurement_error.unwrap_or(p))?;
            NoiseModel::phenomenological(rate, c.rounds.unwrap_or(d))?.with_measurement_error(q)?
        }
    };
    Ok(if c.x_only { model.x_only() } else { model })
}

/// Runs the sweep, one row per `(d, p)` in the order given.
pub fn sweep(c: &SimulateConfig, workers: usize) -> Result<Vec<SweepRow>> {
    let sim = SimConfig {
        defect_ceiling: c.defect_ceiling,
        workers: Some(workers),
    };
    let mut rows = Vec::with_capacity(c.d.len() * c.p.len());
    for &d in &c.d {
        let lattice = PlanarLattice::new(CodeDistance::new(d)?)?;
        for &p in &c.p {
            let noise = noise_model(c, d, p)?;
            let est = run_monte_carlo_on(&lattice, &noise, c.trials, c.seed, &sim)?;
            info!(
                "d={d} p={p}: {}/{} failures (p_l = {:.3e} +/- {:.1e})",
                est.failures, est.trials, est.p_l_hat, est.std_err
            );
            if est.over_ceiling > 0 {
                log::warn!("d={d} p={p}: {} shots exceeded the defect ceiling", est.over_ceiling);
            }
            rows.push(SweepRow::new(d, p, c.noise, &est));
        }
    }
    Ok(rows)
}

/// Comment lines that head the CSV.
pub fn csv_comments(c: &SimulateConfig) -> Result<Vec<String>> {
    Ok(vec![
        format!("{} {} simulate", crate::report::TOOL, qec_blueprint::VERSION),
        format!("seed: {}", c.seed),
        format!("config: {}", serde_json::to_string(c)?),
    ])
}

pub fn crossings(rows: &[SweepRow]) -> Vec<Crossing> {
    let cs = curves(rows);
    cs.windows(2)
        .map(|w| Crossing {
            d_small: w[0].d,
            d_large: w[1].d,
            p_cross: pairwise_crossing(&w[0], &w[1]).ok(),
        })
        .collect()
}

pub fn run(cmd: &SimulateCmd, out: &mut dyn Write) -> Result<()> {
    let (config, workers) = resolve(&cmd.args, cmd.config.as_deref())?;
    info!("sweeping {} points with {workers} workers", config.d.len() * config.p.len());
    let rows = sweep(&config, workers)?;
    let comments = csv_comments(&config)?;
    match &cmd.out {
        Some(path) => {
            let file = File::create(path)?;
            let mut w = BufWriter::new(file);
            write_csv(&mut w, &comments, &rows)?;
            w.flush()?;
        }
        None => write_csv(&mut *out, &comments, &rows)?,
    }
    if let Some(path) = &cmd.summary {
        let mut prov = Provenance::new();
        for key in ["d", "p", "trials", "seed", "noise"] {
            prov.insert(key.into(), Source::User);
        }
        prov.insert("crossings".into(), Source::Derived);
        let summary = SimulateSummary {
            workers,
            crossings: crossings(&rows),
            rows,
        };
        let json = Envelope::new("simulate", Some(config.seed), config, prov, summary).to_json()?;
        write_file(path, &json)?;
    }
    Ok(())
}
