//! Ion-trap blueprint: X-junction patches bundled into sections, sections
//! tiled onto chips, chips aligned so ions shuttle between them.

use serde::{Deserialize, Serialize};

use super::{ceil_div, checked};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IonTrapParams {
    pub junction_footprint_mm: f64,
    pub junctions_per_section: u64,
    pub section_side_mm: f64,
    pub sections_per_chip: u64,
    pub chip_side_mm: f64,
    pub dc_per_junction: u64,
    pub dc_extra_per_section: u64,
    pub fibres_per_junction: u64,
    pub dacs_per_section: u64,
    pub dac_channels: u64,
    pub dc_feedthrough_per_section: u64,
    pub fibre_feedthrough_per_section: u64,
    pub alignment_um: f64,
    pub qubits_per_junction: u64,
}

impl Default for IonTrapParams {
    fn default() -> Self {
        Self {
            junction_footprint_mm: 5.0,
            junctions_per_section: 16,
            section_side_mm: 20.0,
            sections_per_chip: 25,
            chip_side_mm: 100.0,
            dc_per_junction: 52,
            dc_extra_per_section: 8,
            fibres_per_junction: 3,
            dacs_per_section: 21,
            dac_channels: 40,
            dc_feedthrough_per_section: 8,
            fibre_feedthrough_per_section: 48,
            alignment_um: 5.0,
            qubits_per_junction: 1,
        }
    }
}

impl IonTrapParams {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("junctions_per_section", self.junctions_per_section),
            ("sections_per_chip", self.sections_per_chip),
            ("dc_per_junction", self.dc_per_junction),
            ("fibres_per_junction", self.fibres_per_junction),
            ("dacs_per_section", self.dacs_per_section),
            ("dac_channels", self.dac_channels),
            ("dc_feedthrough_per_section", self.dc_feedthrough_per_section),
            ("fibre_feedthrough_per_section", self.fibre_feedthrough_per_section),
            ("qubits_per_junction", self.qubits_per_junction),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::Config(format!("ion-trap parameter {name} must be positive")));
            }
        }
        let lengths = [
            ("junction_footprint_mm", self.junction_footprint_mm),
            ("section_side_mm", self.section_side_mm),
            ("chip_side_mm", self.chip_side_mm),
            ("alignment_um", self.alignment_um),
        ];
        for (name, v) in lengths {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("ion-trap parameter {name} must be positive")));
            }
        }
        Ok(())
    }

    /// DC electrode lines needed by one section (840 with defaults).
    pub fn dc_per_section(&self) -> u64 {
        self.dc_per_junction * self.junctions_per_section + self.dc_extra_per_section
    }

    /// Optical fibres needed by one section (48 with defaults).
    pub fn fibres_per_section(&self) -> u64 {
        self.fibres_per_junction * self.junctions_per_section
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IonTrapPlan {
    pub num_qubits: u64,
    pub junctions: u64,
    pub sections: u64,
    pub chips: u64,
    pub dc_voltages_total: u64,
    pub fibres_total: u64,
    pub dacs_total: u64,
    /// One vacuum feedthrough per section.
    pub feedthroughs_total: u64,
    /// DC lines crossing the vacuum wall after in-vacuum DAC multiplexing.
    pub feedthrough_dc_lines_total: u64,
    pub feedthrough_fibres_total: u64,
    /// Cooling ions, one per junction; informational only, not counted as qubits.
    pub cooling_ions: u64,
    pub trap_area_m2: f64,
    pub notes: Vec<String>,
}

pub fn plan_ion_trap(num_qubits: u64, params: &IonTrapParams) -> Result<IonTrapPlan> {
    params.validate()?;
    if num_qubits == 0 {
        return Err(Error::InvalidInput("ion-trap plan needs at least one qubit".into()));
    }
    let junctions = ceil_div(num_qubits, params.qubits_per_junction);
    let sections = ceil_div(junctions, params.junctions_per_section);
    let chips = ceil_div(sections, params.sections_per_chip);
    let per_section = |n: u64, what: &str| checked(sections.checked_mul(n), what);

    let mut notes = vec![
        "trap area counts surface traps only; a honeycomb vacuum system makes the facility \
         footprint much larger, and no packing ratio is modelled"
            .to_string(),
    ];
    let dac_capacity = params.dacs_per_section * params.dac_channels;
    if dac_capacity < params.dc_per_section() {
        notes.push(format!(
            "DAC capacity {dac_capacity} per section is below the {} DC lines required",
            params.dc_per_section()
        ));
    }

    // mm^2 -> m^2 after the integer-valued multiply keeps round numbers exact
    let footprint_mm2 = params.junction_footprint_mm * params.junction_footprint_mm;
    let trap_area_m2 = junctions as f64 * footprint_mm2 / 1e6;

    Ok(IonTrapPlan {
        num_qubits,
        junctions,
        sections,
        chips,
        dc_voltages_total: per_section(params.dc_per_section(), "DC voltages")?,
        fibres_total: per_section(params.fibres_per_section(), "fibres")?,
        dacs_total: per_section(params.dacs_per_section, "DACs")?,
        feedthroughs_total: sections,
        feedthrough_dc_lines_total: per_section(params.dc_feedthrough_per_section, "feedthrough DC lines")?,
        feedthrough_fibres_total: per_section(params.fibre_feedthrough_per_section, "feedthrough fibres")?,
        cooling_ions: junctions,
        trap_area_m2,
        notes,
    })
}
