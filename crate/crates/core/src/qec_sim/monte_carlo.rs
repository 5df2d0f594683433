//! Monte Carlo estimation of the logical failure rate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::decoder::{decode_syndrome, logical_failure_check};
use super::lattice::PlanarLattice;
use super::noise::{sample_shot, NoiseModel};
use crate::error::{Error, Result};
use crate::surface_code::CodeDistance;

/// Desk-scale bound on defects per shot; shots above it are still decoded
/// but counted in [`LogicalErrorEstimate::over_ceiling`].
pub const DEFAULT_DEFECT_CEILING: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub logical_x_failed: bool,
    pub logical_z_failed: bool,
    pub defect_count: usize,
    pub seed: u64,
}

impl TrialOutcome {
    pub fn failed(&self) -> bool {
        self.logical_x_failed || self.logical_z_failed
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    pub defect_ceiling: usize,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            defect_ceiling: DEFAULT_DEFECT_CEILING,
            workers: None,
        }
    }
}

/// Aggregated failure statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogicalErrorEstimate {
    pub trials: u64,
    pub failures: u64,
    pub failures_x: u64,
    pub failures_z: u64,
    pub over_ceiling: u64,
    pub p_l_hat: f64,
    pub std_err: f64,
}

impl LogicalErrorEstimate {
    pub fn from_counts(trials: u64, failures: u64, failures_x: u64, failures_z: u64, over_ceiling: u64) -> Self {
        let (p_l_hat, std_err) = binomial(failures, trials);
        Self {
            trials,
            failures,
            failures_x,
            failures_z,
            over_ceiling,
            p_l_hat,
            std_err,
        }
    }
}

/// Point estimate and standard error `sqrt(p(1-p)/n)`.
pub fn binomial(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 0.0);
    }
    let p = successes as f64 / trials as f64;
    (p, (p * (1.0 - p) / trials as f64).sqrt())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    trials: u64,
    failures: u64,
    failures_x: u64,
    failures_z: u64,
    over_ceiling: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            trials: self.trials + o.trials,
            failures: self.failures + o.failures,
            failures_x: self.failures_x + o.failures_x,
            failures_z: self.failures_z + o.failures_z,
            over_ceiling: self.over_ceiling + o.over_ceiling,
        }
    }

    fn record(outcome: &TrialOutcome, ceiling: usize) -> Tally {
        Tally {
            trials: 1,
            failures: outcome.failed() as u64,
            failures_x: outcome.logical_x_failed as u64,
            failures_z: outcome.logical_z_failed as u64,
            over_ceiling: (outcome.defect_count > ceiling) as u64,
        }
    }
}

/// Simulates and decodes a single shot.
pub fn run_trial(lattice: &PlanarLattice, noise: &NoiseModel, seed: u64) -> Result<TrialOutcome> {
    let shot = sample_shot(lattice, noise, seed);
    let decoded = decode_syndrome(lattice, &shot.syndrome);
    let (logical_x_failed, logical_z_failed) =
        logical_failure_check(lattice, &shot.errors, &decoded.correction)?;
    Ok(TrialOutcome {
        logical_x_failed,
        logical_z_failed,
        defect_count: shot.syndrome.len(),
        seed,
    })
}

fn in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// Outcomes for seeds `base_seed .. base_seed + num_trials`, in seed order.
pub fn trial_outcomes(
    lattice: &PlanarLattice,
    noise: &NoiseModel,
    num_trials: u64,
    base_seed: u64,
    workers: Option<usize>,
) -> Result<Vec<TrialOutcome>> {
    noise.validate()?;
    in_pool(workers, || {
        (0..num_trials)
            .into_par_iter()
            .map(|i| run_trial(lattice, noise, base_seed.wrapping_add(i)))
            .collect()
    })?
}

/// Estimates the logical error rate from `num_trials` shots; trial `i` uses
/// seed `base_seed + i`. Counts are summed, so the result does not depend on
/// scheduling or worker count.
pub fn run_monte_carlo_on(
    lattice: &PlanarLattice,
    noise: &NoiseModel,
    num_trials: u64,
    base_seed: u64,
    config: &SimConfig,
) -> Result<LogicalErrorEstimate> {
    if num_trials < 1 {
        return Err(Error::InvalidInput("need at least one trial".into()));
    }
    noise.validate()?;
    let ceiling = config.defect_ceiling;
    let tally = in_pool(config.workers, || {
        (0..num_trials)
            .into_par_iter()
            .map(|i| run_trial(lattice, noise, base_seed.wrapping_add(i)).map(|o| Tally::record(&o, ceiling)))
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
    })??;
    Ok(LogicalErrorEstimate::from_counts(
        tally.trials,
        tally.failures,
        tally.failures_x,
        tally.failures_z,
        tally.over_ceiling,
    ))
}

pub fn run_monte_carlo(
    d: CodeDistance,
    noise: &NoiseModel,
    num_trials: u64,
    base_seed: u64,
) -> Result<LogicalErrorEstimate> {
    let lattice = PlanarLattice::new(d)?;
    run_monte_carlo_on(&lattice, noise, num_trials, base_seed, &SimConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface_code::ErrorRate;

    fn d(v: u32) -> CodeDistance {
        CodeDistance::new(v).unwrap()
    }

    #[test]
    fn zero_noise_never_fails() {
        let noise = NoiseModel::code_capacity(ErrorRate::new(0.0).unwrap());
        let est = run_monte_carlo(d(3), &noise, 1000, 9).unwrap();
        assert_eq!(est.failures, 0);
        assert_eq!(est.p_l_hat, 0.0);
        assert_eq!(est.trials, 1000);
    }

    #[test]
    fn deterministic_across_workers() {
        let l = PlanarLattice::new(d(5)).unwrap();
        let noise = NoiseModel::code_capacity(ErrorRate::new(0.08).unwrap());
        let one = run_monte_carlo_on(&l, &noise, 2000, 77, &SimConfig { workers: Some(1), ..Default::default() }).unwrap();
        let three = run_monte_carlo_on(&l, &noise, 2000, 77, &SimConfig { workers: Some(3), ..Default::default() }).unwrap();
        assert_eq!(one, three);
        let a = trial_outcomes(&l, &noise, 500, 77, Some(1)).unwrap();
        let b = trial_outcomes(&l, &noise, 500, 77, Some(4)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[10].seed, 87);
    }

    #[test]
    fn binomial_error() {
        let est = LogicalErrorEstimate::from_counts(100, 25, 20, 6, 0);
        assert_eq!(est.p_l_hat, 0.25);
        assert!((est.std_err - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        assert!(run_monte_carlo(d(3), &NoiseModel::code_capacity(ErrorRate::new(0.1).unwrap()), 0, 0).is_err());
    }

    #[test]
    fn ceiling_is_counted() {
        let l = PlanarLattice::new(d(5)).unwrap();
        let noise = NoiseModel::code_capacity(ErrorRate::new(0.5).unwrap());
        let cfg = SimConfig { defect_ceiling: 2, workers: None };
        let est = run_monte_carlo_on(&l, &noise, 200, 1, &cfg).unwrap();
        assert!(est.over_ceiling > 100);
    }
}
