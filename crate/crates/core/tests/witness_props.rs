use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use silp::seq::{Domination, Poly, Rational, RationalSequence};
use silp::witness::{
    extension_falsifier, order_unit_witness, representation_probe, BuiltinOracle, FalsifierOutcome, FunctionalOracle,
    OrderUnitVerdict, WitnessKind,
};

fn weight(lo: i64) -> impl Strategy<Value = Rational> {
    (lo..=6i64, 1i64..=3).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn support(lo: i64) -> impl Strategy<Value = BTreeMap<u64, Rational>> {
    prop::collection::btree_map(1u64..=40, weight(lo), 0..=5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn positive_finite_support_is_never_falsified(u in support(0)) {
        let oracle = BuiltinOracle::FiniteSupport(u.clone());
        match extension_falsifier(&oracle).unwrap() {
            FalsifierOutcome::NotFalsified { trace, .. } => prop_assert!(!trace.direct_mismatch),
            FalsifierOutcome::Witness(w) => prop_assert!(false, "falsified {:?} with {:?}", u, w),
        }
    }

    #[test]
    fn every_witness_is_nonnegative_and_consistent(u in support(-6)) {
        let oracle = BuiltinOracle::FiniteSupport(u);
        if let FalsifierOutcome::Witness(w) = extension_falsifier(&oracle).unwrap() {
            prop_assert!(w.y.certify_nonneg().is_certified());
            prop_assert!(w.claimed_value.is_negative());
            prop_assert!(!w.trace.direct_mismatch);
            if w.kind == WitnessKind::Construction {
                let direct = oracle.evaluate(&w.y).unwrap() / &w.trace.psi_one;
                prop_assert_eq!(direct, w.claimed_value);
            }
        }
    }

    #[test]
    fn fake_extensions_are_always_falsified(default in weight(-6)) {
        let oracle = BuiltinOracle::FakeExtension { default: default.clone() };
        match extension_falsifier(&oracle).unwrap() {
            FalsifierOutcome::Witness(w) => {
                prop_assert!(w.y.certify_nonneg().is_certified());
                prop_assert!(w.claimed_value.is_negative());
                if default.is_negative() {
                    prop_assert_eq!(w.kind, WitnessKind::NegativeOnIndex);
                } else {
                    prop_assert_eq!(w.kind, WitnessKind::Construction);
                    prop_assert!(w.trace.direct_mismatch);
                }
            }
            FalsifierOutcome::NotFalsified { reason, .. } => prop_assert!(false, "{}", reason),
        }
    }

    #[test]
    fn probes_recover_finite_support(u in support(-6), extra in 0u64..=10) {
        let horizon = u.keys().next_back().copied().unwrap_or(1) + extra;
        let report = representation_probe(&BuiltinOracle::FiniteSupport(u.clone()), horizon).unwrap();
        let nonzero: BTreeMap<u64, Rational> = u.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        prop_assert_eq!(report.support(), nonzero);
        prop_assert!(report.residual.is_zero());
        prop_assert!(report.agrees_on_probes);
    }

    #[test]
    fn probes_expose_limit_mass(u in support(-6), lambda in weight(-6)) {
        prop_assume!(!lambda.is_zero());
        let horizon = u.keys().next_back().copied().unwrap_or(1);
        let oracle = BuiltinOracle::SupportPlusLimit { support: u.clone(), lambda: lambda.clone() };
        let report = representation_probe(&oracle, horizon).unwrap();
        let nonzero: BTreeMap<u64, Rational> = u.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        prop_assert_eq!(report.support(), nonzero);
        prop_assert_eq!(report.residual, lambda);
        prop_assert!(!report.agrees_on_probes);
    }

    #[test]
    fn order_unit_witnesses_escape_domination(c in 1i64..=5, r in 0i64..=5, deg in 0u32..=2, prefix in prop::collection::vec(1i64..=9, 0..=3)) {
        let num = Poly::from_coeffs(vec![Rational::from_integer(r.into()), Rational::from_integer(c.into())]).pow(deg);
        let num = &num + &Poly::constant(Rational::from_integer(1.into()));
        let prefix = prefix.into_iter().map(|v| Rational::from_integer(v.into())).collect();
        let e = RationalSequence::new(prefix, num, Poly::one()).unwrap();
        let w = order_unit_witness(&e).unwrap();
        prop_assert_eq!(w.verdict, OrderUnitVerdict::NotOrderUnit);
        prop_assert_eq!(silp::seq::dominates(&e, &w.x).unwrap(), Domination::NoLambda);
        for lambda in [1i64, 10, 1000, 1_000_000] {
            let scaled = e.scale(&Rational::from_integer(lambda.into()));
            prop_assert!(!(&scaled - &w.x).certify_nonneg().is_certified());
        }
    }
}
