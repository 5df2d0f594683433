//! `estimate`: required distance, qubit totals, a platform plan and cost lines.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use qec_blueprint::cost::{machine_cost, PricePoint};
use qec_blueprint::hardware::{
    plan_ion_trap, plan_raussendorf_cells, plan_superconducting_bilinear, BilinearPlan,
    IonTrapParams, IonTrapPlan, NvParams, NvPlan, SuperconductingParams,
};
use qec_blueprint::surface_code::{
    logical_error_rate, qubits_for_distance, required_distance, CodeDistance, ErrorRate,
    ScalingParams,
};
use qec_blueprint::{Error, Result};

use crate::config::{load_params, merge};
use crate::fit::FittedPreset;
use crate::report::{param_provenance, Envelope, Provenance, Source};
use crate::{require, ReportOpts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// 0.7% threshold with prefactor 0.1.
    CircuitLevelAnchor,
    /// Constants fitted by `fit`, read from `--preset-file`.
    Fitted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Platform {
    Superconducting,
    Iontrap,
    Nv,
    None,
}

/// Default price points: $1000, $1 and $0.01 per qubit.
pub const DEFAULT_PPQ: [&str; 3] = ["1000", "1", "0.01"];

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateArgs {
    /// Physical error rate per qubit per round.
    #[arg(long)]
    pub p: Option<f64>,
    /// Target logical error rate per logical qubit per round.
    #[arg(long)]
    pub target_pl: Option<f64>,
    /// Logical qubits in the machine.
    #[arg(long)]
    pub logical_qubits: Option<u64>,
    /// Named scaling constants [default: circuit-level-anchor].
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Preset file written by `fit` (required with `--preset fitted`).
    #[arg(long)]
    pub preset_file: Option<PathBuf>,
    /// Explicit prefactor; must be given together with --c2.
    #[arg(long)]
    pub c1: Option<f64>,
    /// Explicit error-rate scale; the threshold is 1/c2.
    #[arg(long)]
    pub c2: Option<f64>,
    /// Use this distance instead of solving for the target.
    #[arg(long)]
    pub distance: Option<u32>,
    /// [default: superconducting]
    #[arg(long, value_enum)]
    pub platform: Option<Platform>,
    /// Prices per qubit in dollars, comma separated [default: 1000,1,0.01].
    #[arg(long, value_delimiter = ',')]
    pub ppq: Option<Vec<String>>,
    /// JSON overrides for the platform's hardware parameters.
    #[arg(long)]
    pub hardware_params: Option<PathBuf>,
    /// Qubits per lattice cell (NV platform; no default).
    #[arg(long)]
    pub qubits_per_cell: Option<u64>,
    /// NV connection efficiency per attempt [default: from parameters].
    #[arg(long)]
    pub efficiency: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EstimateCmd {
    #[command(flatten)]
    pub args: EstimateArgs,
    #[command(flatten)]
    pub io: ReportOpts,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingConfig {
    pub preset: Option<Preset>,
    pub preset_file: Option<PathBuf>,
    pub c1: f64,
    pub c2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateConfig {
    pub p: f64,
    pub target_pl: f64,
    pub logical_qubits: u64,
    pub scaling: ScalingConfig,
    pub distance_override: Option<u32>,
    pub platform: Platform,
    pub ppq_cents: Vec<u64>,
    /// Resolved parameter set of the chosen platform.
    pub hardware_params: Value,
    pub qubits_per_cell: Option<u64>,
    pub efficiency: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "platform", rename_all = "kebab-case")]
pub enum PlatformPlan {
    Superconducting(BilinearPlan),
    Iontrap(IonTrapPlan),
    Nv(NvPlan),
}

#[derive(Debug, Clone, Serialize)]
pub struct CostLine {
    pub ppq_cents: u64,
    pub ppq: String,
    /// Exact total in cents, as a decimal string.
    pub total_cents: String,
    pub total: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateResult {
    pub threshold: f64,
    pub distance: u32,
    pub distance_from_target: bool,
    pub logical_error_rate: f64,
    pub logical_error_rate_saturated: bool,
    pub meets_target: bool,
    pub physical_per_logical: u64,
    pub total_physical: u64,
    pub plan: Option<PlatformPlan>,
    pub costs: Vec<CostLine>,
    pub notes: Vec<String>,
}

fn read_preset(path: &Path) -> Result<FittedPreset> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read preset {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("preset {}: {e}", path.display())))
}

fn resolve_scaling(a: &EstimateArgs, prov: &mut Provenance) -> Result<ScalingConfig> {
    let explicit = match (a.c1, a.c2) {
        (Some(c1), Some(c2)) => Some(ScalingParams::new(c1, c2)?),
        (None, None) => None,
        _ => return Err(Error::Config("--c1 and --c2 must be given together".into())),
    };
    if let Some(s) = explicit {
        if a.preset.is_some() || a.preset_file.is_some() {
            return Err(Error::Config("explicit c1/c2 cannot be combined with a preset".into()));
        }
        prov.insert("scaling.c1".into(), Source::User);
        prov.insert("scaling.c2".into(), Source::User);
        return Ok(ScalingConfig { preset: None, preset_file: None, c1: s.c1, c2: s.c2 });
    }
    let preset = a.preset.unwrap_or(if a.preset_file.is_some() { Preset::Fitted } else { Preset::CircuitLevelAnchor });
    match preset {
        Preset::CircuitLevelAnchor => {
            if a.preset_file.is_some() {
                return Err(Error::Config("--preset-file only applies to the fitted preset".into()));
            }
            let s = ScalingParams::circuit_level_anchor();
            prov.insert("scaling.c1".into(), Source::PaperAnchor);
            prov.insert("scaling.c2".into(), Source::PaperAnchor);
            Ok(ScalingConfig { preset: Some(preset), preset_file: None, c1: s.c1, c2: s.c2 })
        }
        Preset::Fitted => {
            let path = a
                .preset_file
                .clone()
                .ok_or_else(|| Error::Config("the fitted preset needs --preset-file (written by `fit`)".into()))?;
            let f = read_preset(&path)?;
            let s = ScalingParams::new(f.c1, f.c2)?;
            prov.insert("scaling.c1".into(), Source::Fitted);
            prov.insert("scaling.c2".into(), Source::Fitted);
            Ok(ScalingConfig { preset: Some(preset), preset_file: Some(path), c1: s.c1, c2: s.c2 })
        }
    }
}

/// Near-square `(cells_x, cells_y)` layout holding at least `cells` cells.
pub fn square_layout(cells: u64) -> (u64, u64) {
    let mut x = cells.isqrt();
    if x * x < cells {
        x += 1;
    }
    (x, cells.div_ceil(x))
}

pub fn resolve(args: &EstimateArgs, config: Option<&Path>) -> Result<(EstimateConfig, Provenance)> {
    let a = merge(args, config)?;
    let mut prov = Provenance::new();
    let p = require(a.p, "p")?;
    let target_pl = require(a.target_pl, "target_pl")?;
    ErrorRate::new(p)?;
    if !(target_pl > 0.0 && target_pl < 1.0) {
        return Err(Error::InvalidInput(format!("target_pl {target_pl} must lie in (0, 1)")));
    }
    let logical_qubits = a.logical_qubits.unwrap_or(1);
    if logical_qubits == 0 {
        return Err(Error::InvalidInput("logical_qubits must be at least 1".into()));
    }
    prov.insert("p".into(), Source::User);
    prov.insert("target_pl".into(), Source::User);
    prov.insert("logical_qubits".into(), Source::User);
    let scaling = resolve_scaling(&a, &mut prov)?;

    let ppq_strings: Vec<String> = match &a.ppq {
        Some(v) => {
            prov.insert("ppq".into(), Source::User);
            v.clone()
        }
        None => {
            prov.insert("ppq".into(), Source::PaperAnchor);
            DEFAULT_PPQ.iter().map(|s| s.to_string()).collect()
        }
    };
    let ppq_cents = ppq_strings
        .iter()
        .map(|s| PricePoint::parse(s).map(|pp| pp.ppq_cents))
        .collect::<Result<Vec<u64>>>()?;

    let platform = a.platform.unwrap_or(Platform::Superconducting);
    let path = a.hardware_params.as_deref();
    let mut efficiency = a.efficiency;
    let hardware_params = match platform {
        Platform::Superconducting => {
            let hp: SuperconductingParams = load_params(path)?;
            param_provenance("hardware_params", &hp, &mut prov)?;
            serde_json::to_value(hp)?
        }
        Platform::Iontrap => {
            let hp: IonTrapParams = load_params(path)?;
            param_provenance("hardware_params", &hp, &mut prov)?;
            serde_json::to_value(hp)?
        }
        Platform::Nv => {
            let hp: NvParams = load_params(path)?;
            param_provenance("hardware_params", &hp, &mut prov)?;
            if a.qubits_per_cell.is_none() {
                return Err(Error::Config("the NV platform requires qubits_per_cell; it has no default".into()));
            }
            prov.insert("qubits_per_cell".into(), Source::User);
            efficiency = Some(efficiency.unwrap_or(hp.default_connection_efficiency));
            serde_json::to_value(hp)?
        }
        Platform::None => {
            if path.is_some() {
                return Err(Error::Config("hardware_params given without a platform".into()));
            }
            Value::Null
        }
    };
    if platform != Platform::Nv && (a.qubits_per_cell.is_some() || a.efficiency.is_some()) {
        return Err(Error::Config("qubits_per_cell and efficiency only apply to the NV platform".into()));
    }
    if a.distance.is_some() {
        prov.insert("distance".into(), Source::User);
    } else {
        prov.insert("distance".into(), Source::Derived);
    }
    prov.insert("threshold".into(), Source::Derived);

    Ok((
        EstimateConfig {
            p,
            target_pl,
            logical_qubits,
            scaling,
            distance_override: a.distance,
            platform,
            ppq_cents,
            hardware_params,
            qubits_per_cell: a.qubits_per_cell,
            efficiency,
        },
        prov,
    ))
}

pub fn compute(c: &EstimateConfig) -> Result<EstimateResult> {
    let s = ScalingParams::new(c.scaling.c1, c.scaling.c2)?;
    let p = ErrorRate::new(c.p)?;
    let mut notes = Vec::new();
    let d = match c.distance_override {
        Some(d) => CodeDistance::new(d)?,
        None => required_distance(p, c.target_pl, &s)?,
    };
    let pl = logical_error_rate(p, d, &s);
    let meets = pl.value <= c.target_pl * (1.0 + 1e-12);
    if !meets {
        notes.push(format!("distance {d} does not reach the target logical error rate {}", c.target_pl));
    }
    if pl.saturated {
        notes.push("the scaling law exceeds 1 here; the physical error rate is above threshold".into());
    }
    let per_logical = qubits_for_distance(d);
    let total = per_logical
        .checked_mul(c.logical_qubits)
        .ok_or_else(|| Error::InvalidInput("total physical qubit count overflows".into()))?;

    let plan = match c.platform {
        Platform::None => None,
        Platform::Superconducting => {
            let hp: SuperconductingParams = serde_json::from_value(c.hardware_params.clone())?;
            notes.push(
                "total_physical counts bare surface-code patches; the bi-linear plan adds spacer columns".into(),
            );
            Some(PlatformPlan::Superconducting(plan_superconducting_bilinear(d, c.logical_qubits, &hp)?))
        }
        Platform::Iontrap => {
            let hp: IonTrapParams = serde_json::from_value(c.hardware_params.clone())?;
            Some(PlatformPlan::Iontrap(plan_ion_trap(total, &hp)?))
        }
        Platform::Nv => {
            let hp: NvParams = serde_json::from_value(c.hardware_params.clone())?;
            let qpc = require(c.qubits_per_cell, "qubits_per_cell")?;
            if qpc == 0 {
                return Err(Error::Config("qubits_per_cell must be positive".into()));
            }
            let (x, y) = square_layout(total.div_ceil(qpc));
            Some(PlatformPlan::Nv(plan_raussendorf_cells(x, y, Some(qpc), c.efficiency, &hp)?))
        }
    };

    let costs = c
        .ppq_cents
        .iter()
        .map(|&cents| {
            let cost = machine_cost(total, &PricePoint::from_cents(cents)?)?;
            Ok(CostLine {
                ppq_cents: cents,
                ppq: cost.ppq.label.clone(),
                total_cents: cost.total_cents.to_string(),
                total: cost.formatted(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(EstimateResult {
        threshold: s.threshold().get(),
        distance: d.get(),
        distance_from_target: c.distance_override.is_none(),
        logical_error_rate: pl.value,
        logical_error_rate_saturated: pl.saturated,
        meets_target: meets,
        physical_per_logical: per_logical,
        total_physical: total,
        plan,
        costs,
        notes,
    })
}

pub fn run(cmd: &EstimateCmd, out: &mut dyn Write) -> Result<()> {
    let (config, prov) = resolve(&cmd.args, cmd.io.config.as_deref())?;
    let result = compute(&config)?;
    let json = Envelope::new("estimate", None, config, prov, result).to_json()?;
    cmd.io.emit(&json, out)
}
