use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use dp3::laurent::{ExponentVector, NVARS};
use dp3::LaurentPoly;

fn exponent() -> impl Strategy<Value = ExponentVector> {
    prop::array::uniform6(-3i32..=3)
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((exponent(), -5i64..=5), 0..6)
        .prop_map(|ts| LaurentPoly::from_terms(ts.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
}

fn nonzero_poly() -> impl Strategy<Value = LaurentPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn point() -> impl Strategy<Value = [i64; NVARS]> {
    prop::array::uniform6(prop_oneof![-4i64..=-1, 1i64..=4])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&LaurentPoly::zero()), a.clone());
        prop_assert_eq!(a.mul(&LaurentPoly::one()), a.clone());
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn exact_division_round_trip(a in poly(), b in nonzero_poly()) {
        prop_assert_eq!(a.mul(&b).div_exact(&b).unwrap(), a);
    }

    #[test]
    fn specialization_is_a_ring_map(a in poly(), b in poly(), x in point()) {
        let v = |p: &LaurentPoly| p.specialize_int(&x).unwrap();
        prop_assert_eq!(v(&a.add(&b)), v(&a) + v(&b));
        prop_assert_eq!(v(&a.mul(&b)), v(&a) * v(&b));
    }

    #[test]
    fn text_round_trip(a in poly()) {
        let back: LaurentPoly = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn powers_agree_with_repeated_products(a in poly(), n in 0u32..5) {
        let slow = (0..n).fold(LaurentPoly::one(), |acc, _| acc.mul(&a));
        prop_assert_eq!(a.pow(n), slow);
    }
}

#[test]
fn large_coefficients_fall_back_to_big_integers() {
    let big: LaurentPoly = "170141183460469231731687303715884105727*x1 + x2".parse().unwrap();
    let sq = big.mul(&big);
    assert_eq!(sq.div_exact(&big).unwrap(), big);
    let one = BigRational::from_integer(BigInt::from(1));
    let at_ones = sq.specialize(&std::array::from_fn(|_| one.clone())).unwrap();
    assert_eq!(at_ones.to_integer(), sq.eval_at_ones());
}

#[test]
fn inexact_division_is_an_error() {
    let a: LaurentPoly = "x1 + x2".parse().unwrap();
    let b: LaurentPoly = "x1 + 2*x2".parse().unwrap();
    assert!(a.div_exact(&b).is_err());
    assert!(a.div_exact(&LaurentPoly::zero()).is_err());
}
