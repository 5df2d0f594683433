//! Monte Carlo simulation of the planar surface code.
//!
//! Pauli errors are sampled on the data qubits of a `(2d-1) x (2d-1)`
//! lattice, the syndrome is decoded with exact minimum-weight perfect
//! matching, and the residual is checked for a logical operator. Aggregated
//! failure rates feed [`fit::fit_scaling`] and [`fit::estimate_threshold`].

pub mod blossom;
pub mod decoder;
pub mod fit;
pub mod lattice;
pub mod monte_carlo;
pub mod noise;
pub mod oracle;
pub mod sweep;

pub use decoder::{decode, decode_syndrome, logical_failure_check, DefectGraph, Matching, Partner};
pub use fit::{estimate_threshold, fit_scaling, pairwise_crossing, Curve, FitPoint, ScalingFit};
pub use lattice::{CheckType, Coord, PlanarLattice};
pub use monte_carlo::{run_monte_carlo, run_monte_carlo_on, run_trial, LogicalErrorEstimate, SimConfig, TrialOutcome};
pub use noise::{extract_syndrome, sample_errors, sample_shot, NoiseKind, NoiseModel, PauliErrorPattern, SyndromeSet};
pub use oracle::exact_logical_error_rate_d3;
pub use sweep::SweepRow;

use crate::error::Result;
use crate::surface_code::CodeDistance;

/// Builds the planar lattice for an odd distance in `[3, 25]`.
pub fn build_lattice(d: CodeDistance) -> Result<PlanarLattice> {
    PlanarLattice::new(d)
}
