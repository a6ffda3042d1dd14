use parity_search::gf2m::{FieldElement, FieldSpec};
use proptest::prelude::*;

fn elements(f: &FieldSpec) -> Vec<FieldElement> {
    (0..f.order()).map(FieldElement).collect()
}

#[test]
fn axioms_exhaustive_up_to_degree_4() {
    for m in 1..=4 {
        let f = FieldSpec::new(m).unwrap();
        let all = elements(&f);
        for &a in &all {
            assert_eq!(f.add(a, FieldElement::ZERO), a);
            assert_eq!(f.mul(a, FieldElement::ONE), a);
            assert_eq!(f.add(a, a), FieldElement::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            }
            for &b in &all {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &all {
                    assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}

#[test]
fn no_zero_divisors_up_to_degree_8() {
    for m in 1..=8 {
        let f = FieldSpec::new(m).unwrap();
        for a in 1..f.order() {
            for b in 1..f.order() {
                assert!(!f.mul(FieldElement(a), FieldElement(b)).is_zero());
            }
        }
    }
}

fn field_and_pair() -> impl Strategy<Value = (FieldSpec, FieldElement, FieldElement)> {
    (1u32..=16).prop_flat_map(|m| {
        let f = FieldSpec::new(m).unwrap();
        (Just(f), 0..f.order(), 0..f.order()).prop_map(|(f, a, b)| (f, FieldElement(a), FieldElement(b)))
    })
}

proptest! {
    #[test]
    fn frobenius_is_additive((f, a, b) in field_and_pair()) {
        prop_assert_eq!(f.pow(f.add(a, b), 2), f.add(f.pow(a, 2), f.pow(b, 2)));
    }

    #[test]
    fn fermat((f, a, _b) in field_and_pair()) {
        prop_assert_eq!(f.pow(a, u64::from(f.order())), a);
    }

    #[test]
    fn division_inverts_multiplication((f, a, b) in field_and_pair()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(f.div(f.mul(a, b), b).unwrap(), a);
    }

    #[test]
    fn pow_adds_exponents((f, a, _b) in field_and_pair(), j in 0u64..200, k in 0u64..200) {
        prop_assert_eq!(f.mul(f.pow(a, j), f.pow(a, k)), f.pow(a, j + k));
    }
}
