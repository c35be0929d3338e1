use dwork_zeta::oracle::{count_projective, count_projective_with, ff_build, ff_build_capped, inclusion_exclusion, ZERO};
use dwork_zeta::poly::Polynomial;
use dwork_zeta::ZetaError;

#[test]
fn field_axioms_small_fields() {
    for (p, s) in [(3u64, 2u32), (5, 2), (7, 2), (3, 3)] {
        let t = ff_build(p, s).unwrap();
        let q = t.q();
        assert_eq!(q, p.pow(s));
        let elems: Vec<u32> = (0..q).map(|i| t.from_index(i)).collect();
        for &a in &elems {
            assert_eq!(t.pow(a, q), a);
            assert_eq!(t.add(a, ZERO), a);
            let mut acc = ZERO;
            for _ in 0..p {
                acc = t.add(acc, a);
            }
            assert_eq!(acc, ZERO);
            for &b in elems.iter().step_by(3) {
                assert_eq!(t.mul(a, b), t.mul(b, a));
                assert_eq!(t.frobenius(t.add(a, b)), t.add(t.frobenius(a), t.frobenius(b)));
            }
        }
    }
}

#[test]
fn strata_decomposition() {
    for (text, p, s) in [
        ("x1^3+x2^3+x3^3", 5u64, 2u32),
        ("x1^4+x2^4+x3^4+x4^4-8*x1*x2*x3*x4", 5, 1),
        ("x1*x2-x3^2", 7, 2),
        ("x1^2+x2^2+x3^2+x4^2", 3, 2),
    ] {
        let f = Polynomial::parse(text, p, None).unwrap();
        let (lhs, rhs) = inclusion_exclusion(&f, &ff_build(p, s).unwrap()).unwrap();
        assert_eq!(lhs as i128, rhs, "{text}");
    }
}

#[test]
fn serial_and_parallel_agree() {
    let f = Polynomial::parse("x1^3+2*x2^3+x3^3+x1*x2*x3", 7, None).unwrap();
    let t = ff_build(7, 2).unwrap();
    assert_eq!(count_projective_with(&f, &t, false).unwrap(), count_projective_with(&f, &t, true).unwrap());
}

#[test]
fn smooth_conic_has_q_plus_one_points() {
    let f = Polynomial::parse("x1^2+x2^2+x3^2", 7, None).unwrap();
    for s in 1..=3 {
        assert_eq!(count_projective(&f, &ff_build(7, s).unwrap()).unwrap(), 7u64.pow(s) + 1);
    }
}

#[test]
fn table_cap_is_enforced() {
    assert!(matches!(ff_build_capped(13, 4, 1000), Err(ZetaError::Capacity(_))));
    assert!(Polynomial::parse("x1^^2", 5, None).is_err());
}
