//! NV-diamond blueprint: probabilistic optical bonds between cells of a
//! 2D+1 Raussendorf lattice.

use serde::{Deserialize, Serialize};

use super::checked;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NvParams {
    /// Highest per-attempt bond success considered physical.
    pub success_upper_bound: f64,
    pub default_connection_efficiency: f64,
    pub attempts_reference: u64,
    pub reference_window_us: f64,
    pub operating_temperature_k: f64,
    /// Probability that a bond has formed once the planned attempts are spent.
    pub confidence: f64,
}

impl Default for NvParams {
    fn default() -> Self {
        Self {
            success_upper_bound: 0.125,
            default_connection_efficiency: 0.01,
            attempts_reference: 100,
            reference_window_us: 3.0,
            operating_temperature_k: 4.0,
            confidence: 0.5,
        }
    }
}

impl NvParams {
    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if v > 0.0 && v <= 1.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("NV parameter {name} must lie in (0, 1]")))
            }
        };
        unit("success_upper_bound", self.success_upper_bound)?;
        unit("default_connection_efficiency", self.default_connection_efficiency)?;
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::Config("NV parameter confidence must lie in (0, 1)".into()));
        }
        if self.attempts_reference == 0 {
            return Err(Error::Config("NV parameter attempts_reference must be positive".into()));
        }
        if !(self.reference_window_us > 0.0 && self.reference_window_us.is_finite()) {
            return Err(Error::Config("NV parameter reference_window_us must be positive".into()));
        }
        if !(self.operating_temperature_k > 0.0) {
            return Err(Error::Config("NV parameter operating_temperature_k must be positive".into()));
        }
        Ok(())
    }

    fn efficiency_warning(&self, q: f64) -> Option<String> {
        (q > self.success_upper_bound).then(|| {
            format!(
                "connection efficiency {q} exceeds the physical upper bound {}",
                self.success_upper_bound
            )
        })
    }
}

fn check_efficiency(q: f64) -> Result<()> {
    if q > 0.0 && q <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("connection efficiency {q} must lie in (0, 1]")))
    }
}

fn success(q: f64, n: u64) -> f64 {
    // 1 - (1-q)^n without cancellation for small q
    -(n as f64 * (-q).ln_1p()).exp_m1()
}

/// Probability that at least one of `n` bond attempts succeeds, `1 - (1-q)^n`.
/// Efficiencies above the default upper bound are allowed but logged.
pub fn nv_bond_success_probability(q: f64, attempts: u64) -> Result<f64> {
    check_efficiency(q)?;
    if attempts == 0 {
        return Err(Error::InvalidInput("at least one bond attempt is required".into()));
    }
    if let Some(w) = NvParams::default().efficiency_warning(q) {
        log::warn!("{w}");
    }
    Ok(success(q, attempts))
}

/// Fewest attempts `n` with `1 - (1-q)^n >= confidence`.
pub fn nv_attempts_for_confidence(q: f64, confidence: f64) -> Result<u64> {
    check_efficiency(q)?;
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidInput(format!("confidence {confidence} must lie in (0, 1)")));
    }
    if q == 1.0 {
        return Ok(1);
    }
    let estimate = ((-confidence).ln_1p() / (-q).ln_1p()).ceil();
    if !(estimate < 1e18) {
        return Err(Error::InvalidInput(format!("efficiency {q} needs too many attempts")));
    }
    // the closed form can land one off when the ratio is an integer in exact arithmetic
    let mut n = (estimate as u64).max(1);
    while n > 1 && success(q, n - 1) >= confidence {
        n -= 1;
    }
    while success(q, n) < confidence {
        n += 1;
    }
    Ok(n)
}

/// Wall-clock time of `attempts` bond attempts, scaled from the reference window.
pub fn nv_bond_time(attempts: u64, params: &NvParams) -> Result<f64> {
    if attempts == 0 {
        return Err(Error::InvalidInput("at least one bond attempt is required".into()));
    }
    params.validate()?;
    Ok(attempts as f64 * params.reference_window_us / params.attempts_reference as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NvPlan {
    pub cells_x: u64,
    pub cells_y: u64,
    pub total_cells: u64,
    pub qubits_per_cell: u64,
    pub qubits_estimate: u64,
    pub connection_efficiency: f64,
    pub confidence: f64,
    pub attempts_per_bond: u64,
    pub bond_success_probability: f64,
    pub expected_bond_time_us: f64,
    pub operating_temperature_k: f64,
    pub warnings: Vec<String>,
}

/// Footprint of a `cells_x x cells_y` layer of lattice cells. `qubits_per_cell`
/// has no default and must be supplied; `efficiency` falls back to the
/// parameter set's default connection efficiency.
pub fn plan_raussendorf_cells(
    cells_x: u64,
    cells_y: u64,
    qubits_per_cell: Option<u64>,
    efficiency: Option<f64>,
    params: &NvParams,
) -> Result<NvPlan> {
    params.validate()?;
    let qubits_per_cell = qubits_per_cell.ok_or_else(|| {
        Error::Config("qubits_per_cell is required for an NV plan and has no default".into())
    })?;
    if qubits_per_cell == 0 {
        return Err(Error::Config("qubits_per_cell must be positive".into()));
    }
    if cells_x == 0 || cells_y == 0 {
        return Err(Error::InvalidInput("NV plan needs at least one cell in each direction".into()));
    }
    let q = efficiency.unwrap_or(params.default_connection_efficiency);
    check_efficiency(q)?;
    let total_cells = checked(cells_x.checked_mul(cells_y), "cell count")?;
    let qubits = checked(total_cells.checked_mul(qubits_per_cell), "qubit estimate")?;
    let attempts = nv_attempts_for_confidence(q, params.confidence)?;
    let warnings: Vec<String> = params.efficiency_warning(q).into_iter().collect();
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(NvPlan {
        cells_x,
        cells_y,
        total_cells,
        qubits_per_cell,
        qubits_estimate: qubits,
        connection_efficiency: q,
        confidence: params.confidence,
        attempts_per_bond: attempts,
        bond_success_probability: success(q, attempts),
        expected_bond_time_us: nv_bond_time(attempts, params)?,
        operating_temperature_k: params.operating_temperature_k,
        warnings,
    })
}
