mod common;

use common::{all_labelings, enumerate_min, rel_close};
use lpcut::energy::{evaluate_powered, max_term, normalize, power_transform};
use lpcut::oracle::{brute_force_min, brute_force_minimax, random_instance, TermPolicy};
use lpcut::reduction::{build_network, solve, Policy, SolveError};
use lpcut::EnergyFunction;
use proptest::prelude::*;

fn certified(max_n: usize) -> impl Strategy<Value = EnergyFunction> {
    (1..=max_n, 0.0..3.0f64, any::<u64>())
        .prop_map(|(n, ef, seed)| random_instance(n, ef, TermPolicy::Certified, seed))
}

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(2.0), Just(4.0), Just(8.0), 1.0..8.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solve_matches_the_oracle(e in certified(12), p in exponent()) {
        let s = solve(&e, p, Policy::RequireCertified).unwrap();
        let o = brute_force_min(&e, p).unwrap();
        prop_assert!(rel_close(s.powered_energy, o.min_value, 1e-6) || s.powered_energy == o.min_value);
        prop_assert!(rel_close(o.min_value, enumerate_min(&e, p), 1e-12) || o.min_value == 0.0);
    }

    #[test]
    fn cut_plus_offset_is_the_energy(e in certified(8), p in exponent()) {
        let (n, _) = normalize(&e);
        let powered = power_transform(&n, p).unwrap();
        let build = build_network(&powered).unwrap();
        for x in all_labelings(e.vertex_count()) {
            let lhs = build.cut_capacity(&x) + build.offset;
            let rhs = evaluate_powered(&powered, &x, 1.0).unwrap();
            prop_assert!(rel_close(lhs, rhs, 1e-9) || (lhs - rhs).abs() <= 1e-15);
        }
    }

    #[test]
    fn large_exponents_keep_full_relative_precision(e in certified(8), k in 0usize..3) {
        let p = [16.0, 32.0, 64.0][k];
        let (n, _) = normalize(&e);
        let powered = power_transform(&n, p).unwrap();
        let build = build_network(&powered).unwrap();
        for x in all_labelings(e.vertex_count()) {
            let lhs = build.cut_capacity(&x) + build.offset;
            let rhs = evaluate_powered(&powered, &x, 1.0).unwrap();
            prop_assert!(rel_close(lhs, rhs, 1e-9) || lhs == rhs, "{} vs {}", lhs, rhs);
        }
        let s = solve(&e, p, Policy::RequireCertified).unwrap();
        prop_assert!(brute_force_min(&e, p).unwrap().contains(&s.labeling));
    }

    #[test]
    fn solution_fields_are_consistent(e in certified(10), p in exponent()) {
        let s = solve(&e, p, Policy::RequireCertified).unwrap();
        prop_assert!(rel_close(s.powered_energy, evaluate_powered(&e, &s.labeling, p).unwrap(), 1e-12) || s.powered_energy == 0.0);
        prop_assert_eq!(s.max_term, max_term(&e, &s.labeling).unwrap());
        prop_assert!(s.max_term >= brute_force_minimax(&e).unwrap().min_value);
        let normalized_energy = (s.flow_value + s.offset) * s.scale.powf(p);
        prop_assert!(rel_close(normalized_energy, s.powered_energy, 1e-9) || s.powered_energy == 0.0);
    }

    #[test]
    fn unique_minimizer_survives_rescaling(e in certified(10), p in exponent(), k in 0usize..3) {
        let s = [0.01, 1.0, 137.0][k];
        let o = brute_force_min(&e, p).unwrap();
        prop_assume!(o.is_unique());
        let x = solve(&e.scaled(s).unwrap(), p, Policy::RequireCertified).unwrap().labeling;
        prop_assert_eq!(&x, &o.minimizers[0]);
    }

    #[test]
    fn per_p_policy_agrees_on_submodular_terms(seed in any::<u64>(), n in 2usize..9) {
        let e = random_instance(n, 1.5, TermPolicy::Submodular, seed);
        match solve(&e, 1.0, Policy::AllowPerPCheck) {
            Ok(s) => {
                let o = brute_force_min(&e, 1.0).unwrap();
                prop_assert!(rel_close(s.powered_energy, o.min_value, 1e-6));
            }
            Err(err) => prop_assert!(false, "p = 1 on submodular terms failed: {err}"),
        }
    }
}

#[test]
fn uncertified_terms_are_rejected_by_default() {
    let e = EnergyFunction::from_parts(&[(1.0, 0.0), (0.0, 1.0)], &[(0, 1, [3.0, 2.0, 2.0, 0.0])])
        .unwrap();
    assert!(matches!(
        solve(&e, 1.0, Policy::RequireCertified),
        Err(SolveError::Certification { .. })
    ));
    assert!(solve(&e, 1.0, Policy::AllowPerPCheck).is_ok());
    assert!(matches!(
        solve(&e, 2.0, Policy::AllowPerPCheck),
        Err(SolveError::Certification { .. })
    ));
}
