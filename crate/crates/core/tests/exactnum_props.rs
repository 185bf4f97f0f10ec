mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use chowglue::Coefficient;
use common::to_rational;

fn coefficient() -> impl Strategy<Value = Coefficient> {
    (-10_000i64..=10_000, 0u32..6, 0u32..6, any::<bool>()).prop_map(|(n, a, b, inv)| {
        let c = Coefficient::from_parts(n, a, b);
        if inv {
            c
        } else {
            // positive powers of 2 and 3 in the numerator as well
            &c * &Coefficient::from_int(BigInt::from(2).pow(a) * BigInt::from(3).pow(b))
        }
    })
}

fn nonzero() -> impl Strategy<Value = Coefficient> {
    coefficient().prop_filter("nonzero", |c| !c.is_zero())
}

/// The 6-free part of a nonzero rational with 6-smooth denominator.
fn six_free(q: &BigRational) -> BigInt {
    let mut n = q.numer().abs();
    for p in [2, 3] {
        let p = BigInt::from(p);
        while (&n % &p).is_zero() {
            n /= &p;
        }
    }
    n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn arithmetic_agrees_with_rationals(a in coefficient(), b in coefficient()) {
        let (qa, qb) = (to_rational(&a), to_rational(&b));
        prop_assert_eq!(to_rational(&(&a + &b)), &qa + &qb);
        prop_assert_eq!(to_rational(&(&a - &b)), &qa - &qb);
        prop_assert_eq!(to_rational(&(&a * &b)), &qa * &qb);
        prop_assert_eq!(to_rational(&(-&a)), -qa);
    }

    #[test]
    fn canonical_triples(a in coefficient(), b in coefficient()) {
        // equal values have identical representations
        let sum = &(&a + &b) - &b;
        prop_assert_eq!(&sum, &a);
        prop_assert_eq!(sum.numerator(), a.numerator());
        prop_assert_eq!((sum.exp2(), sum.exp3()), (a.exp2(), a.exp3()));
        if a.is_zero() {
            prop_assert_eq!((a.exp2(), a.exp3()), (0, 0));
        } else {
            let n: &BigInt = a.numerator();
            prop_assert!(!(n % 2u32).is_zero() && !(n % 3u32).is_zero());
        }
    }

    #[test]
    fn units_have_numerator_one(a in coefficient()) {
        let expect = !a.is_zero() && a.numerator().abs() == BigInt::from(1);
        prop_assert_eq!(a.is_unit(), expect);
        if a.is_unit() {
            prop_assert_eq!(to_rational(&a.inverse().unwrap()), to_rational(&a).recip());
        }
    }

    #[test]
    fn euclidean_division(a in coefficient(), b in nonzero()) {
        let (q, r) = a.euclidean_divide(&b).unwrap();
        let (qa, qb, qq, qr) = (to_rational(&a), to_rational(&b), to_rational(&q), to_rational(&r));
        prop_assert_eq!(&qa, &(&qq * &qb + &qr));
        if !qr.is_zero() {
            prop_assert!(six_free(&qr) < six_free(&qb));
        }
    }

    #[test]
    fn fraction_round_trip(a in coefficient()) {
        let (n, d) = a.to_fraction();
        prop_assert_eq!(Coefficient::from_fraction(&n, &d), Some(a.clone()));
        let s = a.to_string();
        prop_assert_eq!(s.parse::<Coefficient>().unwrap(), a);
    }
}

#[test]
fn foreign_denominators_rejected() {
    assert!(Coefficient::from_fraction(&BigInt::from(1), &BigInt::from(5)).is_none());
    assert!("1/10".parse::<Coefficient>().is_err());
    assert_eq!("5/10".parse::<Coefficient>().unwrap().to_string(), "1/2");
}

#[test]
fn small_sums() {
    let c = |s: &str| s.parse::<Coefficient>().unwrap();
    assert_eq!(&c("1/8") + &c("1/8"), c("1/4"));
    assert!((&c("247145/2916") + &c("-247145/2916")).is_zero());
    assert_eq!(&c("1/2") + &c("1/3"), c("5/6"));
}

#[test]
fn small_divisions() {
    let c = Coefficient::from_int;
    let (q, r) = c(7).euclidean_divide(&c(5)).unwrap();
    assert_eq!((q, r), (c(1), c(2)));
    let (q, r) = c(5).euclidean_divide(&c(10)).unwrap();
    assert_eq!((q.to_string(), r), ("1/2".to_string(), c(0)));
    let (q, r) = c(1).euclidean_divide(&c(5)).unwrap();
    assert_eq!((q, r), (c(0), c(1)));
}
