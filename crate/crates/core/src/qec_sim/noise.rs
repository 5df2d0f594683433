//! Pauli noise models, error patterns and syndrome extraction.

use bitvec::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::lattice::{CheckType, Coord, PlanarLattice};
use crate::error::{Error, Result};
use crate::surface_code::ErrorRate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    /// Independent data errors, one perfect syndrome measurement.
    CodeCapacity,
    /// Data errors each round plus noisy syndrome measurements.
    Phenomenological,
}

impl NoiseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NoiseKind::CodeCapacity => "code-capacity",
            NoiseKind::Phenomenological => "phenomenological",
        }
    }
}

impl std::str::FromStr for NoiseKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "code-capacity" => Ok(NoiseKind::CodeCapacity),
            "phenomenological" => Ok(NoiseKind::Phenomenological),
            other => Err(Error::InvalidInput(format!("unknown noise model '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub p: ErrorRate,
    /// X and Z errors at equal rates. When false only X errors occur.
    pub balanced: bool,
    pub rounds: u32,
    pub measurement_error: ErrorRate,
}

impl NoiseModel {
    pub fn code_capacity(p: ErrorRate) -> Self {
        Self {
            kind: NoiseKind::CodeCapacity,
            p,
            balanced: true,
            rounds: 1,
            measurement_error: ErrorRate::new(0.0).unwrap(),
        }
    }

    /// `rounds` noisy measurement rounds followed by one perfect round;
    /// measurement error defaults to `p`.
    pub fn phenomenological(p: ErrorRate, rounds: u32) -> Result<Self> {
        if rounds < 1 {
            return Err(Error::InvalidInput("phenomenological noise needs at least one round".into()));
        }
        Ok(Self {
            kind: NoiseKind::Phenomenological,
            p,
            balanced: true,
            rounds,
            measurement_error: p,
        })
    }

    pub fn x_only(mut self) -> Self {
        self.balanced = false;
        self
    }

    pub fn with_measurement_error(mut self, q: ErrorRate) -> Result<Self> {
        if self.kind == NoiseKind::CodeCapacity && q.get() != 0.0 {
            return Err(Error::InvalidInput(
                "code-capacity noise has perfect measurement".into(),
            ));
        }
        self.measurement_error = q;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            NoiseKind::CodeCapacity => {
                if self.rounds != 1 || self.measurement_error.get() != 0.0 {
                    return Err(Error::InvalidInput(
                        "code-capacity noise requires one round and perfect measurement".into(),
                    ));
                }
            }
            NoiseKind::Phenomenological => {
                if self.rounds < 1 {
                    return Err(Error::InvalidInput("rounds must be at least 1".into()));
                }
            }
        }
        Ok(())
    }

    fn check_types(&self) -> &'static [CheckType] {
        if self.balanced {
            &[CheckType::Z, CheckType::X]
        } else {
            &[CheckType::Z]
        }
    }
}

/// X and Z error supports over data qubits. A Y error sets both bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliErrorPattern {
    pub x: BitVec,
    pub z: BitVec,
}

impl PauliErrorPattern {
    pub fn identity(num_data: usize) -> Self {
        Self {
            x: bitvec![0; num_data],
            z: bitvec![0; num_data],
        }
    }

    pub fn for_lattice(lattice: &PlanarLattice) -> Self {
        Self::identity(lattice.num_data())
    }

    pub fn with_x(lattice: &PlanarLattice, sites: &[usize]) -> Self {
        let mut e = Self::for_lattice(lattice);
        for &s in sites {
            e.x.set(s, true);
        }
        e
    }

    pub fn with_z(lattice: &PlanarLattice, sites: &[usize]) -> Self {
        let mut e = Self::for_lattice(lattice);
        for &s in sites {
            e.z.set(s, true);
        }
        e
    }

    pub fn num_data(&self) -> usize {
        self.x.len()
    }

    pub fn is_identity(&self) -> bool {
        self.x.not_any() && self.z.not_any()
    }

    pub fn x_weight(&self) -> usize {
        self.x.count_ones()
    }

    pub fn z_weight(&self) -> usize {
        self.z.count_ones()
    }

    /// Support relevant to a check type: Z-type checks see X errors.
    pub fn bits_for(&self, kind: CheckType) -> &BitSlice {
        match kind {
            CheckType::Z => &self.x,
            CheckType::X => &self.z,
        }
    }

    pub fn bits_for_mut(&mut self, kind: CheckType) -> &mut BitVec {
        match kind {
            CheckType::Z => &mut self.x,
            CheckType::X => &mut self.z,
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        Self {
            x: self.x.clone() ^ &other.x,
            z: self.z.clone() ^ &other.z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Defect {
    pub round: u32,
    pub kind: CheckType,
    pub coord: Coord,
}

/// Defects (flipped stabilizer outcomes, or changes between rounds under
/// repeated measurement), kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SyndromeSet {
    pub defects: Vec<Defect>,
}

impl SyndromeSet {
    pub fn is_empty(&self) -> bool {
        self.defects.is_empty()
    }

    pub fn len(&self) -> usize {
        self.defects.len()
    }

    pub fn of_type(&self, kind: CheckType) -> impl Iterator<Item = &Defect> {
        self.defects.iter().filter(move |d| d.kind == kind)
    }

    pub fn count(&self, kind: CheckType) -> usize {
        self.of_type(kind).count()
    }

    /// Symmetric difference of two defect sets.
    pub fn xor(&self, other: &Self) -> Self {
        let mut out: Vec<Defect> = Vec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.defects, &other.defects);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x == y => {
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push(*x);
                    i += 1;
                }
                (Some(_), Some(y)) => {
                    out.push(*y);
                    j += 1;
                }
                (Some(x), None) => {
                    out.push(*x);
                    i += 1;
                }
                (None, Some(y)) => {
                    out.push(*y);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Self { defects: out }
    }
}

/// Outcome bits of every check of one type for a given error support.
pub fn check_outcomes(lattice: &PlanarLattice, kind: CheckType, errors: &BitSlice) -> BitVec {
    lattice
        .checks(kind)
        .iter()
        .map(|c| c.support.iter().filter(|&&q| errors[q]).count() % 2 == 1)
        .collect()
}

/// Perfect single-round syndrome of an error pattern.
pub fn extract_syndrome(lattice: &PlanarLattice, errors: &PauliErrorPattern) -> SyndromeSet {
    let mut defects = Vec::new();
    for kind in [CheckType::Z, CheckType::X] {
        let outcomes = check_outcomes(lattice, kind, errors.bits_for(kind));
        for idx in outcomes.iter_ones() {
            defects.push(Defect {
                round: 0,
                kind,
                coord: lattice.checks(kind)[idx].coord,
            });
        }
    }
    defects.sort_unstable();
    SyndromeSet { defects }
}

/// Counter-based per-trial generator: trial `i` of a run uses `base_seed + i`.
pub fn trial_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Data errors and detection events of one simulated shot.
#[derive(Debug, Clone)]
pub struct Shot {
    /// Net data error accumulated over all rounds.
    pub errors: PauliErrorPattern,
    pub syndrome: SyndromeSet,
}

/// Samples a complete shot. Draw order is fixed (per round: X then Z per
/// data qubit, then measurement flips per check), so a shot is a pure
/// function of `(lattice, noise, seed)`.
pub fn sample_shot(lattice: &PlanarLattice, noise: &NoiseModel, seed: u64) -> Shot {
    let mut rng = trial_rng(seed);
    let p = noise.p.get();
    let n = lattice.num_data();
    let mut errors = PauliErrorPattern::identity(n);

    match noise.kind {
        NoiseKind::CodeCapacity => {
            draw_data_errors(&mut rng, p, noise.balanced, &mut errors);
            let syndrome = extract_syndrome(lattice, &errors);
            Shot { errors, syndrome }
        }
        NoiseKind::Phenomenological => {
            let q = noise.measurement_error.get();
            let kinds = noise.check_types();
            let mut previous: Vec<BitVec> = kinds
                .iter()
                .map(|&k| bitvec![0; lattice.checks(k).len()])
                .collect();
            let mut defects = Vec::new();
            for round in 0..=noise.rounds {
                let final_round = round == noise.rounds;
                if !final_round {
                    draw_data_errors(&mut rng, p, noise.balanced, &mut errors);
                }
                for (slot, &kind) in kinds.iter().enumerate() {
                    let mut measured = check_outcomes(lattice, kind, errors.bits_for(kind));
                    if !final_round {
                        for mut bit in measured.iter_mut() {
                            if rng.random::<f64>() < q {
                                *bit = !*bit;
                            }
                        }
                    }
                    let events = measured.clone() ^ &previous[slot];
                    for idx in events.iter_ones() {
                        defects.push(Defect {
                            round,
                            kind,
                            coord: lattice.checks(kind)[idx].coord,
                        });
                    }
                    previous[slot] = measured;
                }
            }
            defects.sort_unstable();
            Shot {
                errors,
                syndrome: SyndromeSet { defects },
            }
        }
    }
}

fn draw_data_errors(rng: &mut ChaCha8Rng, p: f64, balanced: bool, errors: &mut PauliErrorPattern) {
    for i in 0..errors.num_data() {
        if rng.random::<f64>() < p {
            let v = errors.x[i];
            errors.x.set(i, !v);
        }
        if balanced && rng.random::<f64>() < p {
            let v = errors.z[i];
            errors.z.set(i, !v);
        }
    }
}

/// Net data-error pattern of a shot.
pub fn sample_errors(lattice: &PlanarLattice, noise: &NoiseModel, seed: u64) -> PauliErrorPattern {
    sample_shot(lattice, noise, seed).errors
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface_code::CodeDistance;

    fn lattice(d: u32) -> PlanarLattice {
        PlanarLattice::new(CodeDistance::new(d).unwrap()).unwrap()
    }

    fn rate(p: f64) -> ErrorRate {
        ErrorRate::new(p).unwrap()
    }

    #[test]
    fn extreme_rates() {
        let l = lattice(5);
        let none = sample_errors(&l, &NoiseModel::code_capacity(rate(0.0)), 7);
        assert!(none.is_identity());
        let all = sample_errors(&l, &NoiseModel::code_capacity(rate(1.0)), 7);
        assert_eq!(all.x_weight(), l.num_data());
        assert_eq!(all.z_weight(), l.num_data());
        let x_only = sample_errors(&l, &NoiseModel::code_capacity(rate(1.0)).x_only(), 7);
        assert_eq!(x_only.z_weight(), 0);
    }

    #[test]
    fn sampling_is_deterministic() {
        let l = lattice(5);
        let noise = NoiseModel::phenomenological(rate(0.1), 5).unwrap();
        let a = sample_shot(&l, &noise, 42);
        let b = sample_shot(&l, &noise, 42);
        assert_eq!(a.errors, b.errors);
        assert_eq!(a.syndrome, b.syndrome);
    }

    #[test]
    fn mean_error_weight_matches_binomial() {
        let l = lattice(5);
        assert_eq!(l.num_data(), 41);
        let noise = NoiseModel::code_capacity(rate(0.1));
        let trials = 100_000u64;
        let total: usize = (0..trials).map(|s| sample_errors(&l, &noise, s).x_weight()).sum();
        let mean = total as f64 / trials as f64;
        let expected = 41.0 * 0.1;
        let sigma = (41.0 * 0.1 * 0.9 / trials as f64).sqrt();
        assert!((mean - expected).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn empty_errors_have_empty_syndrome() {
        let l = lattice(3);
        assert!(extract_syndrome(&l, &PauliErrorPattern::for_lattice(&l)).is_empty());
    }

    #[test]
    fn interior_x_error_flags_two_z_checks() {
        let l = lattice(3);
        let centre = l.data_index(Coord::new(2, 2)).unwrap();
        let s = extract_syndrome(&l, &PauliErrorPattern::with_x(&l, &[centre]));
        assert_eq!(s.len(), 2);
        let coords: Vec<_> = s.of_type(CheckType::Z).map(|d| d.coord).collect();
        assert_eq!(coords, vec![Coord::new(2, 1), Coord::new(2, 3)]);
        assert_eq!(s.count(CheckType::X), 0);
    }

    #[test]
    fn logical_row_is_silent() {
        let l = lattice(3);
        for row in [0, 2, 4] {
            let e = PauliErrorPattern::with_x(&l, &l.logical_x_row(row));
            assert!(extract_syndrome(&l, &e).is_empty());
        }
    }

    #[test]
    fn phenomenological_final_round_is_perfect() {
        // with p = 0 and q = 1 every noisy round flips every check; the
        // trailing perfect round closes each of those chains again
        let l = lattice(3);
        let noise = NoiseModel::phenomenological(rate(0.0), 3)
            .unwrap()
            .x_only()
            .with_measurement_error(rate(1.0))
            .unwrap();
        let shot = sample_shot(&l, &noise, 1);
        assert!(shot.errors.is_identity());
        let per_round = l.checks(CheckType::Z).len();
        // flips at round 0 and round 3; rounds 1 and 2 agree with round 0
        assert_eq!(shot.syndrome.len(), 2 * per_round);
        assert!(shot.syndrome.defects.iter().all(|d| d.round == 0 || d.round == 3));
    }

    #[test]
    fn code_capacity_rejects_measurement_noise() {
        let m = NoiseModel::code_capacity(rate(0.1));
        assert!(m.with_measurement_error(rate(0.1)).is_err());
        assert!(NoiseModel::phenomenological(rate(0.1), 0).is_err());
        assert!("bogus".parse::<NoiseKind>().is_err());
        assert_eq!("phenomenological".parse::<NoiseKind>().unwrap(), NoiseKind::Phenomenological);
    }
}
