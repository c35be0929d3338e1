use dwork_zeta::series::{charpoly_to_traces, newton_polygon, traces_to_charpoly, TruncSeries};
use dwork_zeta::zeta::{verify_report, zeta_fit, FunctionalEquation, ZetaData};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn affine_space() {
    let (p, n) = (5u64, 3u32);
    let q = BigInt::from(p).pow(n);
    let counts: Vec<(u32, BigInt)> = (1..=3).map(|s| (s, q.pow(s))).collect();
    let z = zeta_fit(p, n as usize, 1, &counts, &[], 1, true, None).unwrap();
    assert_eq!(z.numerator, vec![BigInt::from(1), -q]);
}

#[test]
fn fermat_cubic_from_two_counts() {
    let counts = vec![(1, BigInt::from(6)), (2, BigInt::from(36))];
    let z = zeta_fit(5, 3, 3, &counts, &[(1, 0), (1, 1)], 2, false, None).unwrap();
    assert_eq!(z.numerator, ints(&[1, 0, 5]));
    assert_eq!(z.regenerate_counts(2), counts);
    let rep = verify_report(&z).unwrap();
    assert!(rep.all_ok());
    for (re, im) in rep.reciprocal_roots {
        assert!(re.abs() < 1e-9);
        assert!((im.abs() - 5f64.sqrt()).abs() < 1e-9);
    }
}

#[test]
fn single_point() {
    let counts: Vec<(u32, BigInt)> = (1..=4).map(|s| (s, BigInt::from(1))).collect();
    let z = zeta_fit(7, 1, 1, &counts, &[(1, 0)], 0, false, None).unwrap();
    assert_eq!(z.numerator, ints(&[1]));
}

#[test]
fn symmetry_completes_missing_coefficients() {
    // (1 - 2T + 5T²) for an elliptic curve over F_5 with a = 2: N_1 = 5 + 1 - 2 = 4
    let counts = vec![(1, BigInt::from(4))];
    let fe = FunctionalEquation { weight: 1, sign: Some(1) };
    let z = zeta_fit(5, 3, 3, &counts, &[(1, 0), (1, 1)], 2, false, Some(fe)).unwrap();
    assert_eq!(z.numerator, ints(&[1, -2, 5]));
    assert!(zeta_fit(5, 3, 3, &counts, &[(1, 0), (1, 1)], 2, false, None).is_err());
}

#[test]
fn inconsistent_counts_are_rejected() {
    let counts = vec![(1, BigInt::from(6)), (2, BigInt::from(37)), (3, BigInt::from(126))];
    assert!(zeta_fit(5, 3, 3, &counts, &[(1, 0), (1, 1)], 2, false, None).is_err());
}

#[test]
fn weil_failure_is_flagged() {
    let z = ZetaData {
        p: 5,
        n: 3,
        d: 3,
        gamma: None,
        method: "test".into(),
        numerator: ints(&[1, 0, 7]),
        numerator_is_inverted: false,
        denominator_factors: vec![(1, 0), (1, 1)],
        counts: vec![],
    };
    let rep = verify_report(&z).unwrap();
    assert!(!rep.weil_ok);
    assert!(!rep.all_ok());
}

#[test]
fn json_schema_fields() {
    let counts = vec![(1, BigInt::from(6)), (2, BigInt::from(36))];
    let z = zeta_fit(5, 3, 3, &counts, &[(1, 0), (1, 1)], 2, false, None).unwrap();
    let v = z.to_json(serde_json::json!({}));
    for key in ["p", "n", "d", "method", "numerator", "denominator_factors", "counts", "checks"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["numerator"], serde_json::json!([1, 0, 5]));
    assert_eq!(v["denominator_factors"], serde_json::json!([[1, 0], [1, 1]]));
}

#[test]
fn newton_polygon_identity() {
    let pts: Vec<(usize, Ratio<i64>)> =
        vec![(0, 0.into()), (1, 1.into()), (2, 1.into()), (3, 3.into()), (4, 4.into())];
    let np = newton_polygon(&pts).unwrap();
    let total: Ratio<i64> = np.segments.iter().map(|(s, l)| s * Ratio::from_integer(*l as i64)).sum();
    assert_eq!(total, Ratio::from_integer(4));
    assert_eq!(np.slope_multiset().len(), 4);
}

#[test]
fn binomial_power_squares_back() {
    let s = TruncSeries::<BigRational>::from_ints(&[1, 3, -2, 0, 0, 0, 0, 0]);
    let half = s.binomial_power(&BigRational::new(1.into(), 2.into())).unwrap();
    assert_eq!(half.mul(&half), s);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn traces_charpoly_round_trip(cs in prop::collection::vec(-50i64..50, 1..7)) {
        let mut coeffs = vec![BigRational::from_integer(1.into())];
        coeffs.extend(cs.iter().map(|&c| BigRational::from_integer(c.into())));
        let m = coeffs.len() - 1;
        let t = charpoly_to_traces(&coeffs, m);
        let back = traces_to_charpoly(&t, m).unwrap();
        prop_assert_eq!(back.coeffs(), &coeffs[..]);
    }

    #[test]
    fn count_round_trip(a in -4i64..=4) {
        // genus one numerator 1 - aT + 5T²
        let z = ZetaData {
            p: 5, n: 3, d: 3, gamma: None, method: "test".into(),
            numerator: ints(&[1, -a, 5]), numerator_is_inverted: false,
            denominator_factors: vec![(1, 0), (1, 1)], counts: vec![],
        };
        let counts = z.regenerate_counts(3);
        let fit = zeta_fit(5, 3, 3, &counts, &[(1, 0), (1, 1)], 2, false, None).unwrap();
        prop_assert_eq!(fit.numerator, z.numerator);
    }
}
