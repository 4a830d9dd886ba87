use num_complex::Complex64;
use origami_sim::anyons::{self, ModularData};
use origami_sim::interferometry::*;
use origami_sim::linalg::{self, c, CMat, CVec};
use origami_sim::mcg::MCGWord;
use origami_sim::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_1_SQRT_2;

fn two_mode(cutoff: usize) -> FockSystem {
    FockSystem::new(1, 2, cutoff).unwrap()
}

fn ket(sys: &FockSystem, occ: &[usize]) -> CVec {
    sys.basis_state(occ).unwrap()
}

fn close(a: &CVec, b: &CVec, tol: f64) -> bool {
    (a - b).norm() < tol
}

fn all_models() -> Vec<ModularData> {
    vec![
        anyons::toric_code(),
        anyons::double_semion(),
        anyons::laughlin(3).unwrap(),
        anyons::ising(),
        anyons::fibonacci(),
    ]
}

#[test]
fn tunneling_swap_moves_a_particle() {
    let sys = two_mode(2);
    let u = tunneling_swap(&sys, (0, 1)).unwrap();
    assert!(close(&(&u * ket(&sys, &[0, 1])), &ket(&sys, &[1, 0]), 1e-12));
    let sym = (ket(&sys, &[0, 1]) + ket(&sys, &[1, 0])) * c(FRAC_1_SQRT_2, 0.0);
    assert!(close(&(&u * &sym), &sym, 1e-12));
}

#[test]
fn tunneling_swap_matches_permutation_at_cutoff_three() {
    let sys = two_mode(3);
    let u = tunneling_swap(&sys, (0, 1)).unwrap();
    let p = site_swap(&sys, (0, 1)).unwrap();
    let cols = sys.faithful_indices(&[vec![0, 1]]);
    assert!(sys.column_diff(&u, &p, &cols) < 1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let psi = sys.random_state(&[vec![0, 1]], &mut rng);
    assert!(close(&(&u * &psi), &(&p * &psi), 1e-10));
    // The exponential is unitary on the whole truncated space.
    assert!(linalg::unitarity_defect(&u) < 1e-10);
}

#[test]
fn untuned_tunneling_picks_up_a_parity_sign() {
    // The plain product with the opposite phase equals (-1)^N SWAP.
    let sys = two_mode(2);
    let site = sys.single_site();
    let hop = site.hopping(0, 1);
    let n = site.number(0) + site.number(1);
    let u = linalg::expm_hermitian(&hop, -std::f64::consts::FRAC_PI_2)
        * linalg::expm_hermitian(&n, -std::f64::consts::FRAC_PI_2);
    let one = ket(&sys, &[0, 1]);
    assert!(close(&(&u * one), &(ket(&sys, &[1, 0]) * c(-1.0, 0.0)), 1e-12));
}

#[test]
fn beamsplitter_mode_map() {
    let sys = two_mode(3);
    let u = beamsplitter(&sys, (0, 1)).unwrap();
    assert!(close(&(&u * sys.vacuum()), &sys.vacuum(), 1e-12));
    let cols = sys.faithful_indices(&[vec![0, 1]]);
    let (a1, a2) = (sys.annihilation(0), sys.annihilation(1));
    let h = c(FRAC_1_SQRT_2, 0.0);
    let conj_a1 = &u * &a1 * u.adjoint();
    assert!(sys.column_diff(&conj_a1, &((&a1 + &a2) * h), &cols) < 1e-10);
    // U n_2 U† is the antisymmetric number operator.
    let conj_n2 = &u * sys.number(1) * u.adjoint();
    let expected = site_antisymmetric_number(&sys, (0, 1)).unwrap();
    assert!(sys.column_diff(&conj_n2, &expected, &cols) < 1e-10);
    let leak = sys.leakage(&u, &[vec![0, 1]]);
    assert!(leak.faithful_defect < 1e-10);
    assert!(leak.lost_norm > 0.1, "cutoff-3 columns with four particles should leak");
}

#[test]
fn bare_tunneling_splitter_is_not_the_parity_beamsplitter() {
    let sys = two_mode(2);
    let site = sys.single_site();
    let bare = linalg::expm_hermitian(&site.hopping(0, 1), std::f64::consts::FRAC_PI_4);
    let target = site_beamsplitter(&sys, (0, 1)).unwrap();
    assert!(!linalg::eq_up_to_phase(&bare, &target, 1e-3));
    let shifted = beamsplitter_from_tunneling(&sys, (0, 1)).unwrap();
    let cols = sys.faithful_indices(&[vec![0, 1]]);
    assert!(sys.column_diff(&shifted, &target, &cols) < 1e-10);
}

#[test]
fn parity_readout_simple_states() {
    let sys = two_mode(2);
    let anti = (ket(&sys, &[0, 1]) - ket(&sys, &[1, 0])) * c(FRAC_1_SQRT_2, 0.0);
    let sym = (ket(&sys, &[0, 1]) + ket(&sys, &[1, 0])) * c(FRAC_1_SQRT_2, 0.0);
    let r = swap_expectation_via_parity(&sys, (0, 1), &anti).unwrap();
    assert!((r.measured - c(-1.0, 0.0)).norm() < 1e-12);
    let r = swap_expectation_via_parity(&sys, (0, 1), &sym).unwrap();
    assert!((r.measured - c(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn parity_readout_random_sweep() {
    let sys = FockSystem::new(2, 2, 2).unwrap();
    let groups = sys.uniform_groups(&[vec![0, 1]]);
    let mut worst: f64 = 0.0;
    for seed in 0..100 {
        let psi = sys.random_state(&groups, &mut ChaCha8Rng::seed_from_u64(seed));
        worst = worst.max(swap_expectation_via_parity(&sys, (0, 1), &psi).unwrap().diff);
    }
    assert!(worst < 1e-10, "{worst:e}");
}

#[test]
fn parity_rejects_unrepresentable_states() {
    let sys = two_mode(1);
    let bad = ket(&sys, &[1, 1]);
    assert!(matches!(swap_expectation_via_parity(&sys, (0, 1), &bad), Err(Error::CutoffTooSmall { .. })));
}

#[test]
fn four_layer_region_readout() {
    let sys = FockSystem::new(2, 4, 1).unwrap();
    let groups = vec![vec![0, 3], vec![2, 1], vec![6, 7], vec![4, 5]];
    for seed in 0..20 {
        let psi = sys.random_state(&groups, &mut ChaCha8Rng::seed_from_u64(seed));
        let r = four_layer_region_parity(&psi).unwrap();
        assert!(r.diff < 1e-9);
    }
}

#[test]
fn twist_two_layers_is_swap() {
    let sys = FockSystem::new(2, 2, 2).unwrap();
    let groups = sys.uniform_groups(&[vec![0, 1]]);
    let psi = sys.random_state(&groups, &mut ChaCha8Rng::seed_from_u64(11));
    let t = twist_expectation(&sys, &[0, 1], &psi).unwrap();
    let s = swap_expectation_via_parity(&sys, (0, 1), &psi).unwrap();
    assert!((t.direct - s.direct).norm() < 1e-12);
    assert!((t.measured - s.measured).norm() < 1e-10);
}

#[test]
fn twist_vacuum_and_three_cycle() {
    let sys = FockSystem::new(1, 3, 2).unwrap();
    let v = twist_expectation(&sys, &[0, 1, 2], &sys.vacuum()).unwrap();
    assert!((v.measured - c(1.0, 0.0)).norm() < 1e-12);
    let psi = sys.random_state(&[vec![0, 1, 2]], &mut ChaCha8Rng::seed_from_u64(5));
    let t = twist_expectation(&sys, &[0, 1, 2], &psi).unwrap();
    assert!(t.diff < 1e-10);
    // The twist moves one particle from layer 0 to layer 1.
    let u = site_twist(&sys, &[0, 1, 2]).unwrap();
    assert!(close(&(&u * ket(&sys, &[1, 0, 0])), &ket(&sys, &[0, 1, 0]), 1e-12));
}

#[test]
fn twist_rejects_short_or_repeated_cycles() {
    let sys = FockSystem::new(1, 3, 1).unwrap();
    assert!(twist_expectation(&sys, &[0], &sys.vacuum()).is_err());
    assert!(twist_expectation(&sys, &[0, 0], &sys.vacuum()).is_err());
    assert!(twist_expectation(&sys, &[0, 5], &sys.vacuum()).is_err());
}

#[test]
fn controlled_swap_blocks() {
    let sys = FockSystem::new(2, 2, 2).unwrap();
    let u = cswap(&sys, (0, 1), 2).unwrap();
    let groups = sys.uniform_groups(&[vec![0, 1]]);
    let psi = sys.random_state(&groups, &mut ChaCha8Rng::seed_from_u64(9));
    let swap = sys.on_every_site(&site_swap(&sys, (0, 1)).unwrap());
    let as_mat = |v: &CVec| CMat::from_column_slice(v.len(), 1, v.as_slice());
    let with = |anc: &[Complex64]| {
        let a = CMat::from_column_slice(2, 1, anc);
        CVec::from_column_slice(linalg::kron(&as_mat(&psi), &a).as_slice())
    };
    let zero = with(&[c(1.0, 0.0), c(0.0, 0.0)]);
    assert!(close(&(&u * &zero), &zero, 1e-10));
    let one = with(&[c(0.0, 0.0), c(1.0, 0.0)]);
    let swapped = CVec::from_column_slice(
        linalg::kron(&as_mat(&(&swap * &psi)), &CMat::from_column_slice(2, 1, &[c(0.0, 0.0), c(1.0, 0.0)])).as_slice(),
    );
    assert!(close(&(&u * &one), &swapped, 1e-10));
    let h = c(FRAC_1_SQRT_2, 0.0);
    let plus = with(&[h, h]);
    let f = fredkin(&sys, (0, 1), 2).unwrap();
    assert!(close(&(&u * &plus), &(&f * &plus), 1e-10));
    assert!(cswap(&sys, (0, 1), 1).is_err());
}

#[test]
fn ramsey_examples() {
    let toric = anyons::toric_code();
    let t: MCGWord = "T".parse().unwrap();
    let s: MCGWord = "S".parse().unwrap();
    let em = parse_state_spec(&toric, "em").unwrap();
    let (re, im) = hadamard_test(&toric, &t, &em).unwrap();
    assert!((re + 1.0).abs() < 1e-12 && im.abs() < 1e-12);
    let (re, im) = hadamard_test(&toric, &s, &parse_state_spec(&toric, "|00⟩").unwrap()).unwrap();
    assert!((re - 0.5).abs() < 1e-12 && im.abs() < 1e-12);
    for m in all_models() {
        let psi = parse_state_spec(&m, &format!("{}+i*{}", m.labels[0], m.labels[1])).unwrap();
        let (re, im) = hadamard_test(&m, &MCGWord::empty(), &psi).unwrap();
        assert!((re - 1.0).abs() < 1e-12 && im.abs() < 1e-12);
    }
}

#[test]
fn ramsey_rejects_chiral_reflection() {
    let m = anyons::laughlin(3).unwrap();
    let w: MCGWord = "Ra".parse().unwrap();
    let psi = parse_state_spec(&m, "0").unwrap();
    assert!(matches!(hadamard_test(&m, &w, &psi), Err(Error::UnsupportedReflection { .. })));
}

#[test]
fn estimator_examples() {
    let b = ErrorBudget { n: 50, j: 1.0, dt: 0.005, ..Default::default() };
    let e = timing_error_overlap(&b);
    assert!((e.value - 0.875).abs() < 1e-12 && e.valid);
    assert_eq!(timing_error_overlap(&ErrorBudget::default()).value, 1.0);

    let b = ErrorBudget { n: 10, e_g: 10.0, t: 1.0, ..Default::default() };
    let e = thermal_fidelity(&b);
    assert!((e.value - 0.995_460_007_023_751_6).abs() < 1e-12 && e.valid);
    let b = ErrorBudget { n: 50, e_g: 5.0, t: 1.0, ..Default::default() };
    let e = thermal_fidelity(&b);
    assert!(e.value < 0.0 && !e.valid);
    assert_eq!(thermal_fidelity(&ErrorBudget { n: 50, t: 0.0, ..Default::default() }).value, 1.0);

    let r = |n, f| readout_fidelity(&ErrorBudget { n, f, ..Default::default() }).value;
    assert!((r(50, 0.99) - 0.605).abs() < 5e-4);
    assert!((r(100, 0.9993) - 0.932).abs() < 5e-4);
    assert_eq!(r(7, 1.0), 1.0);
}

#[test]
fn budget_validation() {
    assert!(ErrorBudget::default().validate().is_ok());
    assert!(ErrorBudget { f: 1.2, ..Default::default() }.validate().is_err());
    assert!(ErrorBudget { dt: -1.0, ..Default::default() }.validate().is_err());
}

#[test]
fn timing_estimate_is_second_order_accurate() {
    let sys = FockSystem::new(2, 2, 2).unwrap();
    let psi = antisymmetric_cat(&sys, (0, 1), 2).unwrap();
    let mut points = Vec::new();
    for x in [0.02, 0.01, 0.005] {
        let exact = timing_overlap_exact(&sys, (0, 1), &psi, x).unwrap();
        // Spread of Σ ñ_- is 2 on two sites, so N = 2 in the estimate.
        let est = timing_error_overlap(&ErrorBudget { n: 2, j: 1.0, dt: x, ..Default::default() }).value;
        assert!((exact - (4.0 * x).cos().abs()).abs() < 1e-12);
        points.push((x, (exact - est).abs()));
    }
    let slope = log_log_slope(&points);
    assert!(slope > 2.9, "residual exponent {slope}");
}

#[test]
fn extraction_round_trip_all_models() {
    for m in all_models() {
        let records = synthetic_measurements(&m).unwrap();
        let ex = extract_matrix_elements(&records, &m.conj_matrix()).unwrap();
        assert!(linalg::max_abs_diff(&ex.s, &m.s) < 1e-10, "{}", m.name);
        assert!(ex.residual < 1e-10, "{}", m.name);
        let expect = if m.conj.iter().enumerate().all(|(i, &j)| i == j) {
            ExtractionMethod::SelfConjugate
        } else {
            ExtractionMethod::ConjugationSolve
        };
        assert_eq!(ex.method, expect, "{}", m.name);
    }
}

#[test]
fn extraction_double_semion_is_hadamard() {
    let m = anyons::double_semion();
    let ex = extract_matrix_elements(&synthetic_measurements(&m).unwrap(), &m.conj_matrix()).unwrap();
    let h = FRAC_1_SQRT_2;
    assert!(linalg::max_abs_diff(&ex.s, &linalg::from_real_rows(&[&[h, h], &[h, -h]])) < 1e-10);
}

#[test]
fn extraction_needs_superpositions() {
    let m = anyons::toric_code();
    let records: Vec<_> = synthetic_measurements(&m)
        .unwrap()
        .into_iter()
        .filter(|r| matches!(r.preparation, Preparation::Basis { .. }))
        .collect();
    match extract_matrix_elements(&records, &m.conj_matrix()) {
        Err(Error::InsufficientMeasurements(missing)) => assert_eq!(missing.len(), 12),
        other => panic!("{other:?}"),
    }
}

#[test]
fn real_parts_alone_underdetermine_conjugate_models() {
    let m = anyons::laughlin(3).unwrap();
    let records: Vec<_> = synthetic_measurements(&m)
        .unwrap()
        .into_iter()
        .map(|r| MeasurementRecord { real_only: true, value: c(r.value.re, 0.0), ..r })
        .collect();
    assert!(matches!(extract_matrix_elements(&records, &m.conj_matrix()), Err(Error::InsufficientMeasurements(_))));
}

#[test]
fn records_round_trip_through_json() {
    let m = anyons::laughlin(3).unwrap();
    let records = synthetic_measurements(&m).unwrap();
    let text = serde_json::to_string(&records).unwrap();
    let back: Vec<MeasurementRecord> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, records);
    let ex = extract_matrix_elements(&back, &m.conj_matrix()).unwrap();
    assert!(linalg::max_abs_diff(&ex.s, &m.s) < 1e-10);
}

#[test]
fn sampled_records_converge() {
    let m = anyons::fibonacci();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let sampled: Vec<_> =
        synthetic_measurements(&m).unwrap().iter().map(|r| sample_record(r, 20_000, &mut rng)).collect();
    assert!(sampled.iter().all(|r| r.provenance == Provenance::Simulated && r.variance.is_some()));
    let ex = extract_matrix_elements(&sampled, &m.conj_matrix()).unwrap();
    assert!(linalg::max_abs_diff(&ex.s, &m.s) < 0.05);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parity_equals_swap_on_random_states(seed in any::<u64>()) {
        let sys = FockSystem::new(2, 2, 2).unwrap();
        let psi = sys.random_state(&sys.uniform_groups(&[vec![0, 1]]), &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(swap_expectation_via_parity(&sys, (0, 1), &psi).unwrap().diff < 1e-9);
    }

    #[test]
    fn fourier_formula_equals_twist(seed in any::<u64>(), sites in 1usize..3) {
        let sys = FockSystem::new(sites, 3, if sites == 1 { 3 } else { 1 }).unwrap();
        let psi = sys.random_state(&sys.uniform_groups(&[vec![2, 0, 1]]), &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(twist_expectation(&sys, &[2, 0, 1], &psi).unwrap().diff < 1e-9);
    }

    #[test]
    fn ramsey_stays_in_unit_disc(model in 0usize..5, word in "[ST]{0,6}", seed in any::<u64>()) {
        let m = &all_models()[model];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut psi = CVec::from_fn(m.rank(), |_, _| c(rand::Rng::gen_range(&mut rng, -1.0..1.0), rand::Rng::gen_range(&mut rng, -1.0..1.0)));
        let norm = psi.norm();
        psi /= c(norm, 0.0);
        let w: MCGWord = word.chars().map(|ch| ch.to_string()).collect::<Vec<_>>().join(" ").parse().unwrap_or_else(|_| MCGWord::empty());
        let (re, im) = hadamard_test(m, &w, &psi).unwrap();
        prop_assert!(re * re + im * im <= 1.0 + 1e-12);
    }

    #[test]
    fn estimators_are_monotone(n in 1usize..200, a in 0.0f64..0.1, b in 0.0f64..0.1, t1 in 0.01f64..5.0, t2 in 0.01f64..5.0, f1 in 0.5f64..1.0, f2 in 0.5f64..1.0) {
        let timing = |dt| timing_error_overlap(&ErrorBudget { n, dt, ..Default::default() }).value;
        let thermal = |t| thermal_fidelity(&ErrorBudget { n, t, ..Default::default() }).value;
        let readout = |f| readout_fidelity(&ErrorBudget { n, f, ..Default::default() }).value;
        let (lo, hi) = (a.min(b), a.max(b));
        prop_assert!(timing(hi) <= timing(lo));
        let (lo, hi) = (t1.min(t2), t1.max(t2));
        prop_assert!(thermal(hi) <= thermal(lo));
        let (lo, hi) = (f1.min(f2), f1.max(f2));
        prop_assert!(readout(lo) <= readout(hi));
    }
}
