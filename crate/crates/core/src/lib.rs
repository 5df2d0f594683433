//! Surface-code resource estimation for fault-tolerant quantum computers.
//!
//! The crate is split into four layers:
//!
//! * [`surface_code`]: closed-form distance/qubit relations and the
//!   logical-error scaling law `P_L = c1 (c2 p)^((d+1)/2)`.
//! * [`qec_sim`]: a planar surface-code Monte Carlo simulator with an exact
//!   minimum-weight perfect matching decoder, used to fit the scaling law.
//! * [`hardware`]: bill-of-materials calculators for ion-trap, NV-diamond and
//!   superconducting blueprints.
//! * [`cost`]: price-per-qubit arithmetic in exact integer cents.

pub mod cost;
pub mod error;
pub mod hardware;
pub mod qec_sim;
pub mod surface_code;

pub use error::{Error, Result};

/// Version string embedded in every emitted artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
