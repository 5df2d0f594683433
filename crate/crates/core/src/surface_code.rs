//! Closed-form surface-code arithmetic.
//!
//! A distance-`d` planar patch occupies a `(2d-1) x (2d-1)` square of physical
//! qubits. Its logical failure probability per round of correction follows
//!
//! ```text
//! P_L = c1 * (c2 * p)^((d+1)/2)
//! ```
//!
//! which, after substituting `N = (2d-1)^2`, becomes `c1 * (c2 * p)^((sqrt(N)+3)/4)`.
//! The threshold is `1/c2`: below it, growing the code suppresses `P_L`
//! exponentially; above it, growing the code makes things worse.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Code distance of a surface-code patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct CodeDistance(u32);

impl CodeDistance {
    pub fn new(d: u32) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidInput("code distance must be at least 1".into()));
        }
        Ok(Self(d))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 % 2 == 1
    }

    /// Side length `2d - 1` of the square qubit patch.
    pub fn patch_side(self) -> u64 {
        2 * u64::from(self.0) - 1
    }
}

impl TryFrom<u32> for CodeDistance {
    type Error = Error;
    fn try_from(d: u32) -> Result<Self> {
        Self::new(d)
    }
}

impl From<CodeDistance> for u32 {
    fn from(d: CodeDistance) -> u32 {
        d.0
    }
}

impl fmt::Display for CodeDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Physical error probability per qubit per round, in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ErrorRate(f64);

impl ErrorRate {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidInput(format!(
                "error rate {p} is not a probability in [0, 1]"
            )));
        }
        Ok(Self(p))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for ErrorRate {
    type Error = Error;
    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<ErrorRate> for f64 {
    fn from(p: ErrorRate) -> f64 {
        p.0
    }
}

/// Logical failure probability per round of correction.
///
/// The analytic law is not bounded by 1 above threshold. Such values are kept
/// raw and marked `saturated` so fit residuals stay meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogicalErrorRate {
    pub value: f64,
    pub saturated: bool,
}

impl LogicalErrorRate {
    pub fn new(value: f64) -> Result<Self> {
        if !(value >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "logical error rate {value} must be non-negative"
            )));
        }
        Ok(Self {
            value,
            saturated: value > 1.0,
        })
    }

    /// Value clamped to `[0, 1]` for reporting.
    pub fn clamped(self) -> f64 {
        self.value.min(1.0)
    }
}

/// Constants `c1`, `c2` of the logical-error law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingParams {
    pub c1: f64,
    pub c2: f64,
}

impl ScalingParams {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        if !(c1 > 0.0 && c1.is_finite() && c2 > 0.0 && c2.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "scaling constants must be positive and finite (c1={c1}, c2={c2})"
            )));
        }
        Ok(Self { c1, c2 })
    }

    /// Circuit-level anchor: threshold 0.7% with the conventional prefactor 0.1.
    pub fn circuit_level_anchor() -> Self {
        Self {
            c1: 0.1,
            c2: 1.0 / CIRCUIT_LEVEL_THRESHOLD,
        }
    }

    pub fn threshold(&self) -> ErrorRate {
        threshold(self)
    }
}

/// Error rate at which surface-code error correction becomes viable under
/// circuit-level noise.
pub const CIRCUIT_LEVEL_THRESHOLD: f64 = 0.007;

/// Number of physical qubits in a distance-`d` planar patch, `(2d-1)^2`.
pub fn qubits_for_distance(d: CodeDistance) -> u64 {
    let side = d.patch_side();
    side * side
}

/// Largest distance a square patch of `n` qubits supports, `floor((sqrt(n)+1)/2)`.
pub fn distance_for_qubits(n: u64) -> Result<CodeDistance> {
    if n < 1 {
        return Err(Error::InvalidInput("qubit count must be at least 1".into()));
    }
    // floor((sqrt(n)+1)/2) == floor((isqrt(n)+1)/2) for all n >= 1
    let root = n.isqrt();
    let d = u32::try_from((root + 1) / 2)
        .map_err(|_| Error::InvalidInput(format!("qubit count {n} too large")))?;
    CodeDistance::new(d)
}

fn scaling_law(p: ErrorRate, exponent: f64, s: &ScalingParams) -> LogicalErrorRate {
    let p = p.get();
    if p == 0.0 {
        return LogicalErrorRate {
            value: 0.0,
            saturated: false,
        };
    }
    // log space keeps large exponents from underflowing intermediate powers
    let log_pl = s.c1.ln() + exponent * (s.c2 * p).ln();
    let value = log_pl.exp();
    LogicalErrorRate {
        value,
        saturated: value > 1.0,
    }
}

/// `c1 * (c2 * p)^((d+1)/2)`.
pub fn logical_error_rate(p: ErrorRate, d: CodeDistance, s: &ScalingParams) -> LogicalErrorRate {
    scaling_law(p, (f64::from(d.get()) + 1.0) / 2.0, s)
}

/// The scaling law at a continuous (possibly even or fractional) distance.
pub fn logical_error_rate_continuous(p: ErrorRate, d: f64, s: &ScalingParams) -> LogicalErrorRate {
    scaling_law(p, (d + 1.0) / 2.0, s)
}

/// `c1 * (c2 * p)^((sqrt(n)+3)/4)`, the scaling law written in qubit count.
pub fn logical_error_rate_per_qubits(
    p: ErrorRate,
    n: u64,
    s: &ScalingParams,
) -> Result<LogicalErrorRate> {
    if n < 1 {
        return Err(Error::InvalidInput("qubit count must be at least 1".into()));
    }
    Ok(scaling_law(p, ((n as f64).sqrt() + 3.0) / 4.0, s))
}

/// Threshold error rate `1/c2`, clamped to at most 1.
pub fn threshold(s: &ScalingParams) -> ErrorRate {
    ErrorRate((1.0 / s.c2).min(1.0))
}

/// Smallest odd distance `d >= 3` whose logical error rate is at most `target`.
pub fn required_distance(
    p: ErrorRate,
    target: f64,
    s: &ScalingParams,
) -> Result<CodeDistance> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidInput(format!(
            "target logical error rate {target} must lie in (0, 1)"
        )));
    }
    let product = s.c2 * p.get();
    if product >= 1.0 {
        return Err(Error::AboveThreshold {
            p: p.get(),
            threshold: 1.0 / s.c2,
            product,
        });
    }
    let meets = |d: u64| -> bool {
        let exponent = (d as f64 + 1.0) / 2.0;
        // relative slack absorbs rounding when the target sits exactly on a grid value
        scaling_law(p, exponent, s).value <= target * (1.0 + 1e-12)
    };
    if p.get() == 0.0 {
        return Ok(CodeDistance(3));
    }

    // (d+1)/2 >= ln(target/c1) / ln(c2 p); start near the analytic root
    let k = ((target / s.c1).ln() / product.ln()).ceil();
    let mut d: u64 = if k.is_finite() && k > 2.0 {
        if k > f64::from(u32::MAX) {
            return Err(Error::InvalidInput(format!(
                "required distance for p={} exceeds the representable range",
                p.get()
            )));
        }
        2 * (k as u64) - 1
    } else {
        3
    };
    while d > 3 && meets(d - 2) {
        d -= 2;
    }
    while !meets(d) {
        d += 2;
    }
    let d = u32::try_from(d)
        .map_err(|_| Error::InvalidInput("required distance exceeds u32".into()))?;
    Ok(CodeDistance(d))
}

/// Bytes needed to store the full state vector of `n` qubits: two 8-byte
/// floats per amplitude, `16 * 2^n`.
pub fn statevector_memory_bytes(n_qubits: u32) -> BigUint {
    BigUint::from(16u32) << n_qubits as usize
}

/// Formats a byte count with decimal SI prefixes, rounded to whole units
/// (e.g. `144 PB`).
pub fn format_bytes_decimal(bytes: &BigUint) -> String {
    const UNITS: [&str; 9] = ["B", "kB", "MB", "GB", "TB", "PB", "EB", "ZB", "YB"];
    let thousand = BigUint::from(1000u32);
    let mut scale = BigUint::from(1u32);
    let mut unit = 0;
    while unit + 1 < UNITS.len() && bytes >= &(&scale * &thousand) {
        scale *= &thousand;
        unit += 1;
    }
    let rounded: BigUint = (bytes + (&scale >> 1usize)) / &scale;
    format!("{rounded} {}", UNITS[unit])
}
