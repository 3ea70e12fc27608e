use lietorus::CycScalar;
use proptest::prelude::*;

const CONDUCTORS: [u32; 8] = [1, 2, 3, 4, 5, 6, 8, 12];

/// Sum of `c_j z_n^j` with small integer or half-integer coefficients.
fn element(n: u32, coeffs: &[(i64, bool)]) -> CycScalar {
    coeffs.iter().enumerate().fold(CycScalar::zero(), |acc, (j, &(c, half))| {
        let c = if half { CycScalar::frac(c, 2) } else { CycScalar::from_int(c) };
        &acc + &(&c * &CycScalar::root_of_unity(n, j as i64))
    })
}

fn arb_element() -> impl Strategy<Value = CycScalar> {
    (0..CONDUCTORS.len(), proptest::collection::vec((-3i64..=3, any::<bool>()), 1..6))
        .prop_map(|(i, c)| element(CONDUCTORS[i], &c))
}

proptest! {
    #[test]
    fn ring_axioms(a in arb_element(), b in arb_element(), c in arb_element()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn nonzero_elements_are_invertible(a in arb_element()) {
        prop_assume!(!a.is_zero());
        let inv = a.inverse().unwrap();
        prop_assert!((&a * &inv).is_one());
    }

    #[test]
    fn promotion_is_a_homomorphism(a in arb_element(), b in arb_element(), mult in 1u32..4) {
        let n = a.conductor() * b.conductor() * mult;
        let pa = a.promote(n).unwrap();
        let pb = b.promote(n).unwrap();
        prop_assert_eq!((&a * &b).promote(n).unwrap(), &pa * &pb);
        prop_assert_eq!((&a + &b).promote(n).unwrap(), &pa + &pb);
        prop_assert_eq!(pa, a);
    }

    #[test]
    fn roots_of_unity_have_their_order(i in 0..CONDUCTORS.len(), k in -20i64..20) {
        let n = CONDUCTORS[i];
        let z = CycScalar::root_of_unity(n, k);
        prop_assert!(z.pow(n as i64).unwrap().is_one());
        prop_assert_eq!(z.pow(-1).unwrap(), CycScalar::root_of_unity(n, -k));
    }
}

#[test]
fn prime_root_sums_vanish() {
    for p in [2u32, 3, 5, 7, 11] {
        let s = (0..p as i64).fold(CycScalar::zero(), |acc, j| &acc + &CycScalar::root_of_unity(p, j));
        assert!(s.is_zero(), "p = {p}");
    }
}

#[test]
fn zero_has_no_inverse() {
    assert!(CycScalar::zero().inverse().is_err());
}
