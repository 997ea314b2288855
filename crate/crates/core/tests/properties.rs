use fockphase::algebra::{
    commutator_residuals, phase_operators, phase_unitarity_residuals, reorder, verify_bch_with, BchCheck, BchParams,
    Ordering, Su11Generators,
};
use fockphase::cli::parse_complex;
use fockphase::lattice::{default_steps_per_sample, exact_propagator, propagate, LatticeKind, LatticeSpec, Sign};
use fockphase::states::{
    bg_state, bg_state_ordered, eigen_residual, london_state, london_state_ordered, phase_state, su11_perelomov_state,
};
use fockphase::FockVector;
use num_complex::Complex64;
use proptest::prelude::*;

fn small_complex(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..=radius, -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn unit_complex() -> impl Strategy<Value = Complex64> {
    (-std::f64::consts::PI..std::f64::consts::PI).prop_map(|t| Complex64::from_polar(1.0, t))
}

fn ordering() -> impl Strategy<Value = Ordering> {
    prop_oneof![Just(Ordering::NormalFirst), Just(Ordering::AntinormalFirst)]
}

fn lattice_kind() -> impl Strategy<Value = LatticeKind> {
    prop_oneof![Just(LatticeKind::Su11), Just(LatticeKind::Uniform)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reorder_round_trips(p in small_complex(0.3), z in unit_complex(), m in small_complex(0.3), o in ordering()) {
        let b = BchParams::new(o, p, z, m).unwrap();
        let back = reorder(&reorder(&b).unwrap()).unwrap();
        prop_assert_eq!(back.ordering, b.ordering);
        prop_assert!((back.plus - b.plus).norm() <= 1e-13);
        prop_assert!((back.zero - b.zero).norm() <= 1e-13);
        prop_assert!((back.minus - b.minus).norm() <= 1e-13);
    }

    #[test]
    fn commutators_hold_for_any_size(dim in 2usize..80, twice_k in 1u32..6) {
        let g = Su11Generators::with_bargmann(dim, twice_k as f64 / 2.0).unwrap();
        // entries of K₊K₋ reach (N + 2k)², so rounding scales with that
        let scale = (dim as f64 + twice_k as f64).powi(2);
        prop_assert!(commutator_residuals(&g).unwrap().max() <= 1e-15 * scale);
        let (right, left) = phase_unitarity_residuals(&phase_operators(dim).unwrap()).unwrap();
        prop_assert!(right <= 1e-12);
        prop_assert_eq!(left, 0.0);
    }

    #[test]
    fn bg_forms_agree(alpha in small_complex(3.0)) {
        let a = bg_state(alpha, 24).unwrap();
        let b = bg_state_ordered(alpha, 24, 72).unwrap();
        prop_assert!(a.max_deviation(&b, 24).unwrap() <= 1e-9);
    }

    #[test]
    fn london_forms_agree(alpha in 0.01f64..3.0) {
        let a = london_state(alpha, 24).unwrap();
        let b = london_state_ordered(alpha, 24, 72).unwrap();
        prop_assert!(a.max_deviation(&b, 24).unwrap() <= 1e-9);
    }

    #[test]
    fn phase_state_is_shift_eigenvector(phi in -3.1f64..3.1, dim in 4usize..100) {
        let v = phase_operators(dim).unwrap().v;
        let r = eigen_residual(&v, &phase_state(phi, dim).unwrap(), Complex64::from_polar(1.0, phi), 1).unwrap();
        prop_assert!(r <= 1e-12);
    }

    #[test]
    fn perelomov_states_are_normalized(alpha in small_complex(0.9), twice_k in 1u32..5) {
        let v = su11_perelomov_state(alpha, twice_k as f64 / 2.0, 400).unwrap();
        prop_assert!((v.norm_sqr() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn complex_literals_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
        let text = format!("{re}{im:+}i");
        prop_assert_eq!(parse_complex(&text).unwrap(), Complex64::new(re, im));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bch_identity_for_random_parameters(p in small_complex(0.3), z in unit_complex(), m in small_complex(0.3), o in ordering()) {
        let b = BchParams::new(o, p, z, m).unwrap();
        let r = verify_bch_with(&b, &BchCheck::new(32)).unwrap();
        prop_assert!(r.residual <= 1e-9, "residual {}", r.residual);
    }

    #[test]
    fn propagation_preserves_norm(
        kind in lattice_kind(),
        amps in prop::collection::vec(small_complex(1.0), 8),
        plus in any::<bool>(),
    ) {
        prop_assume!(amps.iter().any(|a| a.norm() > 1e-3));
        let sign = if plus { Sign::PlusI } else { Sign::MinusI };
        let spec = LatticeSpec::new(kind, 120).with_sign(sign);
        let input = FockVector::new(amps).unwrap().padded(120).unwrap();
        let r = propagate(&spec, &input, 0.5, 10, 40).unwrap();
        prop_assert!(r.norm_drift <= 1e-10 * input.norm_sqr().max(1.0));
    }

    #[test]
    fn propagation_matches_matrix_exponential(kind in lattice_kind(), n in 0usize..12, plus in any::<bool>()) {
        let sign = if plus { Sign::PlusI } else { Sign::MinusI };
        let spec = LatticeSpec::new(kind, 160).with_sign(sign);
        let input = FockVector::basis(160, n).unwrap();
        let steps = default_steps_per_sample(&spec, 0.8, 4).unwrap();
        let r = propagate(&spec, &input, 0.8, 4, steps).unwrap();
        let exact = exact_propagator(&spec, 0.8).unwrap().apply(&input).unwrap();
        prop_assert!(r.fields[4].max_deviation(&exact, 160).unwrap() <= 1e-9);
    }
}
