use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use silp::seq::{
    dominates, linear_combination, Domination, LimitResult, Poly, Rational, RationalSequence, SignCertificate,
};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// Prefix of up to three values, numerator of degree at most two and a
/// denominator with no positive real roots.
fn sequence() -> impl Strategy<Value = RationalSequence> {
    (prop::collection::vec(small_rational(), 0..=3), prop::collection::vec(small_rational(), 1..=3), 0usize..4, 0i64..=3)
        .prop_map(|(prefix, num, den_kind, shift)| {
            let shift = Rational::from_integer(shift.into());
            let den = match den_kind {
                0 => Poly::one(),
                1 => Poly::from_coeffs(vec![shift, Rational::one()]),
                2 => Poly::index().pow(2),
                _ => Poly::from_coeffs(vec![shift.clone() + Rational::one(), Rational::zero(), Rational::one()]),
            };
            RationalSequence::new(prefix, Poly::from_coeffs(num), den).expect("no positive poles")
        })
}

fn positive_sequence() -> impl Strategy<Value = RationalSequence> {
    sequence().prop_filter("strictly positive", |s| s.certify_positive().is_certified())
}

/// Products of linear factors `(i - r)` with rational roots in `[0, 60]`,
/// so sign changes land both on and between integers.
fn rooted_poly() -> impl Strategy<Value = Poly> {
    (prop::collection::vec((0i64..=120, 1i64..=2), 0..=4), small_rational().prop_filter("nonzero", |c| !c.is_zero()))
        .prop_map(|(roots, lead)| {
            roots.into_iter().fold(Poly::constant(lead), |acc, (n, d)| {
                &acc * &Poly::from_coeffs(vec![-Rational::new(n.into(), d.into()), Rational::one()])
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn integer_searches_match_a_scan(p in rooted_poly(), lo in 1u64..=10, len in 0u64..=100) {
        let hi = lo + len;
        let scan = |pred: &dyn Fn(&Rational) -> bool| (lo..=hi).find(|&i| pred(&p.eval_at(i)));
        prop_assert_eq!(p.first_integer_where(lo, hi, Signed::is_negative), scan(&|v: &Rational| v.is_negative()));
        prop_assert_eq!(p.first_integer_where(lo, hi, |v| !v.is_positive()), scan(&|v: &Rational| !v.is_positive()));
        prop_assert_eq!(p.first_integer_root(lo, hi), scan(&|v: &Rational| v.is_zero()));
        let sign = |i: u64| { let v = p.eval_at(i); (v.is_positive(), v.is_negative()) };
        let changes: Vec<u64> = (lo..hi).filter(|&c| sign(c) != sign(c + 1)).collect();
        prop_assert_eq!(p.sign_changes(lo, hi), changes);
    }

    #[test]
    fn combination_is_pointwise(a in small_rational(), b in small_rational(), s in sequence(), t in sequence(),
                                idx in prop::collection::vec(1u64..=1000, 8)) {
        let c = linear_combination(&[a.clone(), b.clone()], &[s.clone(), t.clone()]).unwrap();
        for i in idx {
            prop_assert_eq!(c.eval(i), &a * s.eval(i) + &b * t.eval(i));
        }
    }

    #[test]
    fn limit_is_linear_on_finite_limits(a in small_rational(), b in small_rational(), s in sequence(), t in sequence()) {
        if let (LimitResult::Finite(ls), LimitResult::Finite(lt)) = (s.limit(), t.limit()) {
            let c = &s.scale(&a) + &t.scale(&b);
            prop_assert_eq!(c.limit(), LimitResult::Finite(&a * ls + &b * lt));
        }
    }

    #[test]
    fn sign_certificates_agree_with_evaluation(s in sequence()) {
        match s.certify_nonneg() {
            SignCertificate::Certified => {
                for i in 1..=300 {
                    prop_assert!(!s.eval(i).is_negative(), "index {}", i);
                }
            }
            SignCertificate::Violated { index, value } => {
                prop_assert!(value.is_negative());
                prop_assert_eq!(s.eval(index), value);
                for i in 1..index {
                    prop_assert!(!s.eval(i).is_negative());
                }
            }
        }
    }

    #[test]
    fn domination_is_exact(e in positive_sequence(), x in sequence()) {
        match dominates(&e, &x).unwrap() {
            Domination::ExistsLambda(lambda) => {
                let upper = &e.scale(&lambda) - &x;
                let lower = &e.scale(&lambda) + &x;
                prop_assert!(upper.certify_nonneg().is_certified() && lower.certify_nonneg().is_certified());
                // lambda is the least multiplier: slightly less fails somewhere
                if lambda.is_positive() {
                    let less = &lambda * Rational::new(999.into(), 1000.into());
                    let u = &e.scale(&less) - &x;
                    let l = &e.scale(&less) + &x;
                    let ok = u.certify_nonneg().is_certified() && l.certify_nonneg().is_certified();
                    prop_assert!(!ok || lambda.is_zero());
                }
            }
            Domination::NoLambda => {
                for p in 0..=16 {
                    let lambda = Rational::from_integer((1i64 << p).into());
                    let u = &e.scale(&lambda) - &x;
                    let l = &e.scale(&lambda) + &x;
                    prop_assert!(!(u.certify_nonneg().is_certified() && l.certify_nonneg().is_certified()), "lambda {}", lambda);
                }
            }
        }
    }

    #[test]
    fn supremum_bounds_every_value(s in sequence()) {
        match s.supremum() {
            Some(sup) => {
                for i in 1..=300 {
                    prop_assert!(s.eval(i) <= sup);
                }
                let gap = &s - &RationalSequence::constant(sup.clone());
                prop_assert!((-&gap).certify_nonneg().is_certified());
            }
            None => prop_assert_eq!(s.limit(), LimitResult::PlusInfinity),
        }
    }

    #[test]
    fn arithmetic_is_exact(s in sequence(), t in sequence(), idx in prop::collection::vec(1u64..=200, 6)) {
        let p = &s * &t;
        let d = &s - &t;
        for i in idx {
            prop_assert_eq!(p.eval(i), s.eval(i) * t.eval(i));
            prop_assert_eq!(d.eval(i), s.eval(i) - t.eval(i));
        }
    }

    #[test]
    fn tail_expression_round_trips(s in sequence()) {
        let again = RationalSequence::parse(s.prefix().to_vec(), &s.tail_expr()).unwrap();
        prop_assert_eq!(again, s);
    }
}
