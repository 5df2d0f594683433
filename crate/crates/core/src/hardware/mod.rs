//! Bill-of-materials calculators for three hardware blueprints.
//!
//! Every parameter set has embedded defaults and deserializes from JSON with
//! any subset of fields overridden; unknown fields are rejected.

mod iontrap;
mod nv;
mod superconducting;

pub use iontrap::{plan_ion_trap, IonTrapParams, IonTrapPlan};
pub use nv::{
    nv_attempts_for_confidence, nv_bond_success_probability, nv_bond_time, plan_raussendorf_cells,
    NvParams, NvPlan,
};
pub use superconducting::{
    grid_summary, plan_superconducting_bilinear, BilinearPlan, ChipAnchor, GridSummary,
    SuperconductingParams, CHIP_ANCHOR,
};

use serde::de::DeserializeOwned;

use crate::error::{Error, Result};

/// Parses a parameter override document. Missing fields keep their defaults.
pub fn params_from_json<T: DeserializeOwned>(json: &str) -> Result<T> {
    serde_json::from_str(json).map_err(|e| Error::Config(format!("hardware parameters: {e}")))
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

fn checked(v: Option<u64>, what: &str) -> Result<u64> {
    v.ok_or_else(|| Error::InvalidInput(format!("{what} overflows a 64-bit count")))
}
