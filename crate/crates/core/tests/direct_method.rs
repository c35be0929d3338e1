use dwork_zeta::fredholm::{
    all_subset_traces, counts_from_traces, fredholm_det, torus_identity_residual, truncation_degree, u_matrix,
    u_matrix_unchecked, zeta_direct,
};
use dwork_zeta::oracle::{count_projective, count_torus, ff_build};
use dwork_zeta::padic::PadicRing;
use dwork_zeta::poly::Polynomial;
use dwork_zeta::zeta::verify_report;
use dwork_zeta::ZetaError;
use num_bigint::BigInt;

fn oracle(f: &Polynomial, s: u32) -> BigInt {
    BigInt::from(count_projective(f, &ff_build(f.p(), s).unwrap()).unwrap())
}

#[test]
fn hesse_cubic_matches_oracle() {
    let f = Polynomial::parse("x1^3+x2^3+x3^3+x1*x2*x3", 5, None).unwrap();
    let run = zeta_direct(&f, 8, None).unwrap();
    for (s, c) in &run.zeta.counts {
        assert_eq!(c, &oracle(&f, *s), "N_{s}");
    }
    assert!(verify_report(&run.zeta).unwrap().all_ok());
    assert_eq!(run.stability_violations, 0);
    assert_eq!(run.valuation_violations, 0);
}

#[test]
fn counts_match_oracle_for_small_instances() {
    for (text, p, prec) in [("x1^2+x2^2+x3^2", 5u64, 8u32), ("x1^2+2*x2^2-x3^2", 7, 8), ("x1+x2+x3", 5, 6)] {
        let f = Polynomial::parse(text, p, None).unwrap();
        let d = f.homogeneous_degree().unwrap();
        let u = u_matrix(&f, d, prec, None).unwrap();
        let t = all_subset_traces(&u, 1);
        assert_eq!(counts_from_traces(&t, 1).unwrap(), oracle(&f, 1), "{text}");
    }
}

#[test]
fn torus_identity_uses_the_full_trace() {
    let f = Polynomial::parse("x1^3+x2^3+x3^3", 5, None).unwrap();
    let u = u_matrix(&f, 3, 8, None).unwrap();
    let t = all_subset_traces(&u, 2);
    for s in 1..=2u32 {
        let torus = count_torus(&f, &ff_build(5, s).unwrap()).unwrap();
        let r = torus_identity_residual(&t.traces[0][s as usize - 1], 5, 3, s, torus).unwrap();
        assert!(r.is_zero(), "s = {s}");
    }
}

#[test]
fn truncation_below_certificate_is_rejected() {
    let f = Polynomial::parse("x1^3+x2^3+x3^3", 5, None).unwrap();
    assert_eq!(truncation_degree(5, 8), 9);
    assert!(matches!(u_matrix(&f, 3, 8, Some(4)), Err(ZetaError::Precision(_))));
    assert!(matches!(zeta_direct(&f, 3, None), Err(ZetaError::Precision(_))));
}

#[test]
fn determinant_is_nontrivial_and_windowed() {
    let f = Polynomial::parse("x1^3+x2^3+x3^3", 5, None).unwrap();
    let ring = PadicRing::new(5, 8).unwrap();
    let u = u_matrix_unchecked(&f, 3, &ring, 2).unwrap();
    let det = fredholm_det(&u, 8).unwrap();
    assert!(det.coeffs()[1..].iter().any(|c| c != &num_rational::BigRational::from_integer(0.into())));
    let small = PadicRing::new(5, 2).unwrap();
    let u2 = u_matrix_unchecked(&f, 3, &small, 1).unwrap();
    assert!(fredholm_det(&u2, 30).is_err());
}
