//! `plan`: hardware bills of materials.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Subcommand};
use serde::{Deserialize, Serialize};

use qec_blueprint::hardware::{
    grid_summary, plan_ion_trap, plan_raussendorf_cells, plan_superconducting_bilinear,
    IonTrapParams, NvParams, SuperconductingParams,
};
use qec_blueprint::surface_code::CodeDistance;
use qec_blueprint::{Error, Result};

use crate::config::{load_params, merge};
use crate::report::{param_provenance, Envelope, Provenance, Source};
use crate::{require, ReportOpts};

#[derive(Debug, Subcommand)]
pub enum PlanCmd {
    /// X-junction sections, chips and wiring for a qubit count.
    Iontrap(Wrapped<IonTrapArgs>),
    /// Bi-linear array layout for logical qubits at a distance.
    Superconducting(Wrapped<SuperconductingArgs>),
    /// Raussendorf cell array of optically bonded NV centres.
    Nv(Wrapped<NvArgs>),
    /// Qubits, couplers and reachable distance of a transmon grid.
    Grid(Wrapped<GridArgs>),
}

#[derive(Debug, Args)]
pub struct Wrapped<A: Args> {
    #[command(flatten)]
    pub args: A,
    #[command(flatten)]
    pub io: ReportOpts,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IonTrapArgs {
    /// Physical (computational) qubits.
    #[arg(long)]
    pub qubits: Option<u64>,
    /// JSON parameter overrides.
    #[arg(long)]
    pub params: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperconductingArgs {
    /// Odd code distance.
    #[arg(long)]
    pub distance: Option<u32>,
    /// Logical qubits in the row [default: 1].
    #[arg(long)]
    pub logical: Option<u64>,
    /// JSON parameter overrides.
    #[arg(long)]
    pub params: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NvArgs {
    /// Lattice cells along x.
    #[arg(long)]
    pub cells_x: Option<u64>,
    /// Lattice cells along y.
    #[arg(long)]
    pub cells_y: Option<u64>,
    /// Qubits per lattice cell; required, there is no default.
    #[arg(long)]
    pub qubits_per_cell: Option<u64>,
    /// Connection efficiency per attempt [default: from parameters].
    #[arg(long)]
    pub efficiency: Option<f64>,
    /// Bond confidence [default: from parameters].
    #[arg(long)]
    pub confidence: Option<f64>,
    /// JSON parameter overrides.
    #[arg(long)]
    pub params: Option<PathBuf>,
}

fn parse_site(s: &str) -> std::result::Result<(u64, u64), String> {
    let (r, c) = s.split_once(':').ok_or_else(|| format!("expected ROW:COL, got '{s}'"))?;
    let r = r.trim().parse().map_err(|e| format!("row in '{s}': {e}"))?;
    let c = c.trim().parse().map_err(|e| format!("column in '{s}': {e}"))?;
    Ok((r, c))
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridArgs {
    /// Grid rows.
    #[arg(long)]
    pub rows: Option<u64>,
    /// Grid columns.
    #[arg(long)]
    pub cols: Option<u64>,
    /// Dead qubits as ROW:COL, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_site)]
    pub dead: Option<Vec<(u64, u64)>>,
}

#[derive(Debug, Serialize)]
pub struct PlanConfig<A, P> {
    pub platform: &'static str,
    #[serde(flatten)]
    pub args: A,
    pub resolved_params: P,
}

fn finish<A: Serialize, P: Serialize, R: Serialize>(
    platform: &'static str,
    args: A,
    params: P,
    prov: Provenance,
    result: R,
    io: &ReportOpts,
    out: &mut dyn Write,
) -> Result<()> {
    let config = PlanConfig { platform, args, resolved_params: params };
    let json = Envelope::new(format!("plan {platform}"), None, config, prov, result).to_json()?;
    io.emit(&json, out)
}

pub fn run(cmd: &PlanCmd, out: &mut dyn Write) -> Result<()> {
    let mut prov = Provenance::new();
    match cmd {
        PlanCmd::Iontrap(w) => {
            let a = merge(&w.args, w.io.config.as_deref())?;
            let params: IonTrapParams = load_params(a.params.as_deref())?;
            param_provenance("resolved_params", &params, &mut prov)?;
            prov.insert("qubits".into(), Source::User);
            let plan = plan_ion_trap(require(a.qubits, "qubits")?, &params)?;
            finish("iontrap", a, params, prov, plan, &w.io, out)
        }
        PlanCmd::Superconducting(w) => {
            let mut a = merge(&w.args, w.io.config.as_deref())?;
            a.logical = Some(a.logical.unwrap_or(1));
            let params: SuperconductingParams = load_params(a.params.as_deref())?;
            param_provenance("resolved_params", &params, &mut prov)?;
            prov.insert("distance".into(), Source::User);
            prov.insert("logical".into(), Source::User);
            prov.insert("chip_anchor".into(), Source::PaperAnchor);
            let d = CodeDistance::new(require(a.distance, "distance")?)?;
            let plan = plan_superconducting_bilinear(d, a.logical.unwrap_or(1), &params)?;
            finish("superconducting", a, params, prov, plan, &w.io, out)
        }
        PlanCmd::Nv(w) => {
            let mut a = merge(&w.args, w.io.config.as_deref())?;
            let mut params: NvParams = load_params(a.params.as_deref())?;
            if let Some(c) = a.confidence {
                params.confidence = c;
            }
            // echo the values actually used
            a.confidence = Some(params.confidence);
            a.efficiency = Some(a.efficiency.unwrap_or(params.default_connection_efficiency));
            param_provenance("resolved_params", &params, &mut prov)?;
            prov.insert("qubits_per_cell".into(), Source::User);
            let plan = plan_raussendorf_cells(
                require(a.cells_x, "cells_x")?,
                require(a.cells_y, "cells_y")?,
                a.qubits_per_cell,
                a.efficiency,
                &params,
            )?;
            finish("nv", a, params, prov, plan, &w.io, out)
        }
        PlanCmd::Grid(w) => {
            let mut a = merge(&w.args, w.io.config.as_deref())?;
            a.dead = Some(a.dead.unwrap_or_default());
            prov.insert("rows".into(), Source::User);
            prov.insert("cols".into(), Source::User);
            let dead = a.dead.clone().unwrap_or_default();
            let summary = grid_summary(require(a.rows, "rows")?, require(a.cols, "cols")?, &dead)?;
            if summary.qubit_count == 0 {
                return Err(Error::InvalidInput("every qubit in the grid is dead".into()));
            }
            finish("grid", a, (), prov, summary, &w.io, out)
        }
    }
}
