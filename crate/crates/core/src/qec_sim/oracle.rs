//! Exhaustive reference for the distance-3 code under X-only code-capacity
//! noise: all 2^13 error patterns are decoded once with the production
//! decoder and failures are tallied by error weight.

use std::sync::OnceLock;

use super::decoder::{decode_syndrome, logical_failure_check};
use super::lattice::PlanarLattice;
use super::noise::{extract_syndrome, PauliErrorPattern};
use crate::error::{Error, Result};
use crate::surface_code::{CodeDistance, ErrorRate, LogicalErrorRate};

/// Number of failing X patterns of each weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureSpectrum {
    pub num_data: usize,
    pub failing_by_weight: Vec<u64>,
}

impl FailureSpectrum {
    /// Enumerates every X pattern on `lattice` (feasible only for small codes).
    pub fn enumerate(lattice: &PlanarLattice) -> Result<Self> {
        let n = lattice.num_data();
        if n > 24 {
            return Err(Error::InvalidInput(format!("{n} data qubits is too many to enumerate")));
        }
        let mut failing = vec![0u64; n + 1];
        for mask in 0u32..(1u32 << n) {
            let sites: Vec<usize> = (0..n).filter(|&q| mask >> q & 1 == 1).collect();
            let errors = PauliErrorPattern::with_x(lattice, &sites);
            let decoded = decode_syndrome(lattice, &extract_syndrome(lattice, &errors));
            let (x_failed, _) = logical_failure_check(lattice, &errors, &decoded.correction)?;
            if x_failed {
                failing[sites.len()] += 1;
            }
        }
        Ok(Self {
            num_data: n,
            failing_by_weight: failing,
        })
    }

    /// `sum_w failing[w] p^w (1-p)^(n-w)`.
    pub fn failure_probability(&self, p: f64) -> f64 {
        let n = self.num_data as i32;
        self.failing_by_weight
            .iter()
            .enumerate()
            .map(|(w, &count)| count as f64 * p.powi(w as i32) * (1.0 - p).powi(n - w as i32))
            .sum()
    }
}

fn d3_spectrum() -> &'static FailureSpectrum {
    static SPECTRUM: OnceLock<FailureSpectrum> = OnceLock::new();
    SPECTRUM.get_or_init(|| {
        let lattice = PlanarLattice::new(CodeDistance::new(3).unwrap()).unwrap();
        FailureSpectrum::enumerate(&lattice).expect("d=3 enumeration")
    })
}

/// Exact logical-X failure probability of the distance-3 code under
/// independent X errors of rate `p` with perfect syndrome measurement.
pub fn exact_logical_error_rate_d3(p: ErrorRate) -> LogicalErrorRate {
    let value = d3_spectrum().failure_probability(p.get());
    LogicalErrorRate {
        value,
        saturated: false,
    }
}

/// Same as [`exact_logical_error_rate_d3`] but for an arbitrary distance,
/// rejecting anything other than 3.
pub fn exact_logical_error_rate(d: CodeDistance, p: ErrorRate) -> Result<LogicalErrorRate> {
    if d.get() != 3 {
        return Err(Error::InvalidInput(format!(
            "exhaustive reference only exists for d=3, got d={d}"
        )));
    }
    Ok(exact_logical_error_rate_d3(p))
}

/// Failing-pattern counts of the distance-3 code, by weight.
pub fn d3_failure_spectrum() -> &'static FailureSpectrum {
    d3_spectrum()
}
