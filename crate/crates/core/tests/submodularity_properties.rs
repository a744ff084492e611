use lpcut::oracle::{random_term, TermPolicy};
use lpcut::submodularity::{
    certify_all_p, is_submodular, is_submodular_at, lemma_check, max_condition, CertificateStatus,
};
use lpcut::PairwiseTerm;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn table() -> impl Strategy<Value = PairwiseTerm> {
    prop::array::uniform4(0.0..10.0f64)
        .prop_map(|[a, b, c, d]| PairwiseTerm::new(a, b, c, d).unwrap())
}

fn certified() -> impl Strategy<Value = PairwiseTerm> {
    any::<u64>()
        .prop_map(|seed| random_term(&mut ChaCha8Rng::seed_from_u64(seed), TermPolicy::Certified))
}

proptest! {
    #[test]
    fn classification_ignores_swapping_b_and_c(t in table()) {
        let s = PairwiseTerm::new(t.a(), t.c(), t.b(), t.d()).unwrap();
        prop_assert_eq!(is_submodular(&t), is_submodular(&s));
        prop_assert_eq!(max_condition(&t), max_condition(&s));
        prop_assert_eq!(certify_all_p(&t).status, certify_all_p(&s).status);
    }

    #[test]
    fn classification_is_scale_invariant(t in table(), s in 1e-3..1e3f64) {
        let scaled = t.scaled(s).unwrap();
        prop_assert_eq!(certify_all_p(&t).status, certify_all_p(&scaled).status);
    }

    #[test]
    fn certified_terms_stay_submodular(t in certified(), p in 1.0..64.0f64) {
        prop_assert!(is_submodular_at(&t, p).unwrap());
    }

    #[test]
    fn certificate_agrees_with_its_parts(t in table()) {
        let expected = match (is_submodular(&t), max_condition(&t)) {
            (false, _) => CertificateStatus::NotSubmodular,
            (true, true) => CertificateStatus::CertifiedAllP,
            (true, false) => CertificateStatus::SubmodularUncertified,
        };
        prop_assert_eq!(certify_all_p(&t).status, expected);
    }

    #[test]
    fn power_sum_inequality(v in prop::array::uniform4(0.0..10.0f64), p in 1.0..64.0f64) {
        let [a, b, c, d] = v;
        prop_assert!(lemma_check(a, b, c, d, p));
    }

    #[test]
    fn power_sum_inequality_near_equality(c in 0.0..10.0f64, d in 0.0..10.0f64, shift in 0.0..1e-6f64, p in 1.0..64.0f64) {
        let a = c.max(d) - shift;
        let b = c.min(d);
        prop_assume!(a >= 0.0);
        prop_assert!(lemma_check(a, b, c, d, p));
    }
}
