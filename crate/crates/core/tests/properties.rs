use num_bigint::BigUint;
use proptest::prelude::*;

use qec_blueprint::cost::{format_usd, machine_cost, parse_usd, ppq_from_system, PricePoint};
use qec_blueprint::hardware::{
    grid_summary, nv_attempts_for_confidence, nv_bond_success_probability, plan_ion_trap,
    plan_superconducting_bilinear, IonTrapParams, SuperconductingParams,
};
use qec_blueprint::qec_sim::{
    decode, decode_syndrome, extract_syndrome, fit_scaling, logical_failure_check, sample_shot,
    CheckType, DefectGraph, FitPoint, NoiseModel, PauliErrorPattern, PlanarLattice,
};
use qec_blueprint::surface_code::*;

fn cd(d: u32) -> CodeDistance {
    CodeDistance::new(d).unwrap()
}

fn rate(p: f64) -> ErrorRate {
    ErrorRate::new(p).unwrap()
}

fn lattice(d: u32) -> PlanarLattice {
    PlanarLattice::new(cd(d)).unwrap()
}

/// Minimum total weight over all ways of pairing defects with each other
/// or sending them to the boundary, by exhaustive recursion.
fn brute_force_weight(g: &DefectGraph) -> i64 {
    fn go(g: &DefectGraph, left: &mut Vec<usize>) -> i64 {
        let Some(i) = left.pop() else { return 0 };
        let mut best = g.boundary_weight(i) + go(g, left);
        for k in 0..left.len() {
            let j = left.remove(k);
            best = best.min(g.pair_weight(i, j) + go(g, left));
            left.insert(k, j);
        }
        left.push(i);
        best
    }
    go(g, &mut (0..g.num_defects()).collect())
}

#[test]
fn decoder_is_minimum_weight_on_every_d3_pattern() {
    let l = lattice(3);
    let n = l.num_data();
    for mask in 0u32..(1 << n) {
        let sites: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
        let errors = PauliErrorPattern::with_x(&l, &sites);
        let syndrome = extract_syndrome(&l, &errors);
        let [gz, gx] = DefectGraph::from_syndrome(&l, &syndrome);
        assert_eq!(gx.num_defects(), 0);
        let m = decode(&gz);
        assert_eq!(m.total_weight, brute_force_weight(&gz), "mask {mask:#b}");
        let decoded = decode_syndrome(&l, &syndrome);
        assert!(decoded.correction.x_weight() as i64 <= m.total_weight);
        logical_failure_check(&l, &errors, &decoded.correction).unwrap();
    }
}

#[test]
fn low_weight_errors_are_always_corrected() {
    for d in [3u32, 5, 7] {
        let l = lattice(d);
        let t = (d as usize - 1) / 2;
        let n = l.num_data();
        // every single error, both types, and every pair when t >= 2
        let mut patterns: Vec<Vec<usize>> = (0..n).map(|q| vec![q]).collect();
        if t >= 2 {
            for a in 0..n {
                for b in (a + 1)..n {
                    patterns.push(vec![a, b]);
                }
            }
        }
        for sites in &patterns {
            for errors in [PauliErrorPattern::with_x(&l, sites), PauliErrorPattern::with_z(&l, sites)] {
                let decoded = decode_syndrome(&l, &extract_syndrome(&l, &errors));
                let (fx, fz) = logical_failure_check(&l, &errors, &decoded.correction).unwrap();
                assert!(!fx && !fz, "d={d} sites={sites:?}");
            }
        }
    }
}

#[test]
fn any_two_paulis_are_corrected_at_d5() {
    let l = lattice(5);
    let n = l.num_data();
    // 1 = X, 2 = Z, 3 = Y
    let apply = |e: &mut PauliErrorPattern, q: usize, kind: u8| {
        e.x.set(q, kind & 1 == 1);
        e.z.set(q, kind & 2 == 2);
    };
    for a in 0..n {
        for b in a..n {
            for ka in 1..=3u8 {
                for kb in 0..=3u8 {
                    let mut errors = PauliErrorPattern::for_lattice(&l);
                    apply(&mut errors, a, ka);
                    if b != a {
                        apply(&mut errors, b, kb);
                    }
                    let decoded = decode_syndrome(&l, &extract_syndrome(&l, &errors));
                    let (fx, fz) = logical_failure_check(&l, &errors, &decoded.correction).unwrap();
                    assert!(!fx && !fz, "sites {a}:{ka} {b}:{kb}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn distance_qubit_round_trip(d in 1u32..100_000) {
        prop_assert_eq!(distance_for_qubits(qubits_for_distance(cd(d))).unwrap(), cd(d));
    }

    #[test]
    fn distance_for_qubits_is_monotone(n in 1u64..u64::MAX / 2) {
        prop_assert!(distance_for_qubits(n).unwrap() <= distance_for_qubits(n + 1).unwrap());
        let d = u64::from(distance_for_qubits(n).unwrap().get());
        // the patch for the returned distance fits, the next one does not
        prop_assert!((2 * d - 1) * (2 * d - 1) <= n || d == 1);
        prop_assert!((2 * d + 1) * (2 * d + 1) > n);
    }

    #[test]
    fn two_forms_of_scaling_law_agree(d in 1u32..2000, p in 1e-6f64..1.0, c1 in 1e-3f64..10.0, c2 in 0.5f64..1000.0) {
        let s = ScalingParams::new(c1, c2).unwrap();
        let a = logical_error_rate(rate(p), cd(d), &s).value;
        let b = logical_error_rate_per_qubits(rate(p), qubits_for_distance(cd(d)), &s).unwrap().value;
        prop_assert!(a == b || (a - b).abs() <= 1e-9 * a.abs().max(1e-300), "{a} vs {b}");
    }

    #[test]
    fn memory_doubles_per_qubit(n in 0u32..2000) {
        prop_assert_eq!(statevector_memory_bytes(n + 1), statevector_memory_bytes(n) * 2u32);
    }

    #[test]
    fn required_distance_is_minimal(p in 1e-6f64..0.0099, exp in 1.0f64..15.0) {
        let s = ScalingParams::new(0.1, 100.0).unwrap();
        let target = 10f64.powf(-exp);
        let d = required_distance(rate(p), target, &s).unwrap();
        prop_assert!(d.is_odd() && d.get() >= 3);
        prop_assert!(logical_error_rate(rate(p), d, &s).value <= target * (1.0 + 1e-12));
        if d.get() > 3 {
            prop_assert!(logical_error_rate(rate(p), cd(d.get() - 2), &s).value > target);
        }
    }

    #[test]
    fn threshold_sets_direction(d in 1u32..200, c2 in 2.0f64..500.0, f in 0.05f64..0.95) {
        let s = ScalingParams::new(0.1, c2).unwrap();
        let below = rate(f / c2);
        prop_assert!(logical_error_rate(below, cd(d + 2), &s).value < logical_error_rate(below, cd(d), &s).value);
        let above = (1.0 + f) / c2;
        if above <= 1.0 {
            let above = rate(above);
            prop_assert!(logical_error_rate(above, cd(d + 2), &s).value > logical_error_rate(above, cd(d), &s).value);
        }
    }

    #[test]
    fn fit_recovers_exact_law(c1 in 0.01f64..1.0, c2 in 5.0f64..200.0) {
        let s = ScalingParams::new(c1, c2).unwrap();
        let mut pts = Vec::new();
        for d in [3u32, 5, 7] {
            for f in [0.1, 0.3, 0.6] {
                let p = f / c2;
                let v = logical_error_rate(rate(p), cd(d), &s).value;
                pts.push(FitPoint { p, d, p_l_hat: v, std_err: 0.0, failures: None });
            }
        }
        let fit = fit_scaling(&pts).unwrap();
        prop_assert!((fit.c1_hat / c1 - 1.0).abs() < 1e-6);
        prop_assert!((fit.c2_hat / c2 - 1.0).abs() < 1e-6);
        prop_assert!(fit.residual_r2 > 1.0 - 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn syndrome_is_linear(d in prop::sample::select(vec![3u32, 5, 7]), seed_a: u64, seed_b: u64) {
        let l = lattice(d);
        let noise = NoiseModel::code_capacity(rate(0.2));
        let a = sample_shot(&l, &noise, seed_a).errors;
        let b = sample_shot(&l, &noise, seed_b).errors;
        let lhs = extract_syndrome(&l, &a.xor(&b));
        let rhs = extract_syndrome(&l, &a).xor(&extract_syndrome(&l, &b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn decoder_is_minimum_weight_on_random_shots(
        d in prop::sample::select(vec![5u32, 7]),
        phenomenological: bool,
        seed: u64,
    ) {
        let l = lattice(d);
        let noise = if phenomenological {
            NoiseModel::phenomenological(rate(0.01), d).unwrap()
        } else {
            NoiseModel::code_capacity(rate(0.04))
        };
        let shot = sample_shot(&l, &noise, seed);
        for g in DefectGraph::from_syndrome(&l, &shot.syndrome) {
            // the exhaustive oracle is exponential; keep it small
            prop_assume!(g.num_defects() <= 9);
            prop_assert_eq!(decode(&g).total_weight, brute_force_weight(&g));
        }
        let decoded = decode_syndrome(&l, &shot.syndrome);
        if !phenomenological {
            prop_assert!(logical_failure_check(&l, &shot.errors, &decoded.correction).is_ok());
        }
    }

    #[test]
    fn weight_two_single_type_errors_never_fail_at_d5(a in 0usize..41, b in 0usize..41, z: bool) {
        let l = lattice(5);
        let sites: Vec<usize> = if a == b { vec![a] } else { vec![a, b] };
        let errors = if z { PauliErrorPattern::with_z(&l, &sites) } else { PauliErrorPattern::with_x(&l, &sites) };
        let decoded = decode_syndrome(&l, &extract_syndrome(&l, &errors));
        prop_assert_eq!(logical_failure_check(&l, &errors, &decoded.correction).unwrap(), (false, false));
    }
}

#[test]
fn check_types_detect_the_opposite_error() {
    let l = lattice(3);
    let x = extract_syndrome(&l, &PauliErrorPattern::with_x(&l, &[6]));
    assert!(x.count(CheckType::Z) > 0 && x.count(CheckType::X) == 0);
    let z = extract_syndrome(&l, &PauliErrorPattern::with_z(&l, &[6]));
    assert!(z.count(CheckType::X) > 0 && z.count(CheckType::Z) == 0);
}

proptest! {
    #[test]
    fn cost_is_linear_in_qubits(a in 1u64..1u64 << 40, b in 1u64..1u64 << 40, cents in 1u64..1u64 << 40) {
        let ppq = PricePoint::from_cents(cents).unwrap();
        let sum = machine_cost(a + b, &ppq).unwrap().total_cents;
        prop_assert_eq!(sum, machine_cost(a, &ppq).unwrap().total_cents + machine_cost(b, &ppq).unwrap().total_cents);
    }

    #[test]
    fn ppq_inverts_machine_cost(n in 1u64..1u64 << 40, cents in 1u64..1u64 << 40) {
        let ppq = PricePoint::from_cents(cents).unwrap();
        let total = machine_cost(n, &ppq).unwrap().total_cents;
        prop_assert_eq!(ppq_from_system(&total, n).unwrap().ppq_cents, cents);
    }

    #[test]
    fn currency_format_round_trips(hi: u64, lo: u64) {
        let cents = (BigUint::from(hi) << 64usize) + lo;
        prop_assert_eq!(parse_usd(&format_usd(&cents)).unwrap(), cents.clone());
        let small = BigUint::from(lo);
        prop_assert_eq!(parse_usd(&format_usd(&small)).unwrap(), small);
    }

    #[test]
    fn ion_trap_plans_are_monotone_and_closed(q in 1u64..1u64 << 40, extra in 0u64..1000) {
        let p = IonTrapParams::default();
        let a = plan_ion_trap(q, &p).unwrap();
        let b = plan_ion_trap(q + extra, &p).unwrap();
        prop_assert!(a.junctions >= q);
        prop_assert_eq!(a.sections, a.junctions.div_ceil(16));
        prop_assert_eq!(a.chips, a.sections.div_ceil(25));
        prop_assert_eq!(a.dc_voltages_total, 840 * a.sections);
        prop_assert_eq!(a.fibres_total, 48 * a.sections);
        prop_assert_eq!(a.dacs_total, 21 * a.sections);
        for (x, y) in [(a.junctions, b.junctions), (a.sections, b.sections), (a.chips, b.chips),
                       (a.dc_voltages_total, b.dc_voltages_total), (a.fibres_total, b.fibres_total)] {
            prop_assert!(x <= y);
        }
        prop_assert!(a.trap_area_m2 <= b.trap_area_m2);
    }

    #[test]
    fn bilinear_counts(k in 1u32..200, n in 1u64..10_000) {
        let d = cd(2 * k + 1);
        let m = d.patch_side();
        let a = plan_superconducting_bilinear(d, n, &SuperconductingParams::default()).unwrap();
        let b = plan_superconducting_bilinear(d, n + 1, &SuperconductingParams::default()).unwrap();
        prop_assert_eq!(a.physical_qubits_lattice_surgery, m * (m * n + n - 1));
        prop_assert_eq!(a.physical_qubits_bilinear_total, n * m * (m + 1));
        prop_assert_eq!(a.physical_qubits_bilinear_total - a.physical_qubits_lattice_surgery, m);
        prop_assert!(a.airbridges_per_resonator_max <= a.crossings_per_column_pair);
        prop_assert_eq!(a.within_validated_airbridge_budget, a.airbridges_per_resonator_max <= 20);
        prop_assert!(a.physical_qubits_bilinear_total < b.physical_qubits_bilinear_total);
        prop_assert!(a.chip_length_estimate_mm < b.chip_length_estimate_mm);
    }

    #[test]
    fn grid_couplers(rows in 1u64..60, cols in 1u64..60, dead in prop::collection::vec((0u64..60, 0u64..60), 0..20)) {
        let dead: Vec<(u64, u64)> = dead.into_iter().filter(|&(r, c)| r < rows && c < cols).collect();
        let g = grid_summary(rows, cols, &dead).unwrap();
        // independent count: edges between live sites
        let alive = |r: u64, c: u64| !dead.contains(&(r, c));
        let mut edges = 0;
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols && alive(r, c) && alive(r, c + 1) { edges += 1; }
                if r + 1 < rows && alive(r, c) && alive(r + 1, c) { edges += 1; }
            }
        }
        prop_assert_eq!(g.coupler_count_dead_adjusted, edges);
        prop_assert_eq!(g.coupler_count_raw, 2 * rows * cols - rows - cols);
    }

    #[test]
    fn nv_success_is_monotone_and_bounded(q in 1e-6f64..0.99, n in 1u64..10_000) {
        let a = nv_bond_success_probability(q, n).unwrap();
        prop_assert!(a > 0.0 && a <= 1.0);
        prop_assert!(nv_bond_success_probability(q, n + 1).unwrap() >= a);
        prop_assert!(nv_bond_success_probability((q * 1.01).min(1.0), n).unwrap() >= a);
    }

    #[test]
    fn nv_attempts_are_minimal(q in 1e-4f64..0.9, c in 0.01f64..0.99) {
        let n = nv_attempts_for_confidence(q, c).unwrap();
        prop_assert!(nv_bond_success_probability(q, n).unwrap() >= c);
        if n > 1 {
            prop_assert!(nv_bond_success_probability(q, n - 1).unwrap() < c);
        }
    }
}
