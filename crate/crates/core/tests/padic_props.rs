use dwork_zeta::padic::{self, PadicRing, PiElem};
use num_bigint::BigInt;
use num_rational::Ratio;
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11, 13])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn teichmuller_is_multiplicative(p in prime(), n in 1u32..10, a in 0u64..1000, b in 0u64..1000) {
        let ring = PadicRing::new(p, n).unwrap();
        let ta = padic::teichmuller(&ring, a);
        let tb = padic::teichmuller(&ring, b);
        prop_assert_eq!(&ta * &tb, padic::teichmuller(&ring, a * b));
        prop_assert_eq!(ta.pow(p), ta);
    }

    #[test]
    fn valuation_is_additive(p in prime(), x in 1i64..50_000, y in 1i64..50_000) {
        let ring = PadicRing::new(p, 20).unwrap();
        let a = padic::from_i64(&ring, x);
        let b = padic::from_i64(&ring, y);
        let va = a.valuation().value;
        let vb = b.valuation().value;
        prop_assert_eq!((&a * &b).valuation().value, va + vb);
        let s = &a + &b;
        prop_assert!(s.valuation().value >= va.min(vb));
    }

    #[test]
    fn centered_lift_round_trip(p in prime(), n in 1u32..8, x in -10_000i64..10_000) {
        let ring = PadicRing::new(p, n).unwrap();
        let m = BigInt::from(p).pow(n);
        let a = padic::from_i64(&ring, x);
        let c = a.centered_lift();
        prop_assert!(c.magnitude() * 2u32 <= m.magnitude().clone());
        prop_assert_eq!(padic::from_bigint(&ring, &c), a);
    }

    #[test]
    fn inverse_of_units(p in prime(), x in 1u64..100_000) {
        let ring = PadicRing::new(p, 6).unwrap();
        let a = padic::from_u64(&ring, x);
        match a.inverse() {
            Some(inv) => prop_assert_eq!(&a * &inv, padic::one(&ring)),
            None => prop_assert!(x % p == 0),
        }
    }

    #[test]
    fn pi_elem_ring_axioms(p in prime(), cs in prop::collection::vec(-500i64..500, 36)) {
        let ring = PadicRing::new(p, 6).unwrap();
        let k = (p - 1) as usize;
        let mk = |off: usize| {
            let v: Vec<_> = (0..k).map(|i| padic::from_i64(&ring, cs[(off + i) % cs.len()])).collect();
            PiElem::from_coeffs(&v).unwrap()
        };
        let (a, b, c) = (mk(0), mk(12), mk(24));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, PiElem::zero(&ring));
        prop_assert_eq!(&a * &PiElem::one(&ring), a.clone());
    }
}

#[test]
fn pi_power_is_minus_p() {
    for p in [3u64, 5, 7, 13] {
        let ring = PadicRing::new(p, 5).unwrap();
        let pp = PiElem::pi(&ring).pow(p - 1);
        assert_eq!(pp.to_padic().unwrap(), padic::from_i64(&ring, -(p as i64)));
        assert_eq!(PiElem::pi(&ring).valuation().value, Ratio::new(1, p as i64 - 1));
    }
}

#[test]
fn mismatched_rings_are_rejected() {
    let a = padic::one(&PadicRing::new(5, 3).unwrap());
    let b = padic::one(&PadicRing::new(5, 4).unwrap());
    assert!(a.try_add(&b).is_err());
    assert!(PadicRing::new(4, 3).is_err());
    assert!(PadicRing::new(2, 3).is_err());
}

#[test]
fn legendre_matches_squares() {
    for p in [5u64, 7, 13, 17] {
        let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
        for a in 1..p {
            let l = padic::legendre_i64(a as i64, p).unwrap();
            assert_eq!(l == 1, squares.contains(&a), "({a}/{p})");
        }
    }
}
