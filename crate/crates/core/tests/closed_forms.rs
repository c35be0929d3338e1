use dwork_zeta::deformation::{assemble_p, block_factors, dwork_family, picard_fuchs_check, solve_three_by_three};
use dwork_zeta::diagonal::{cubic_swap_zeta, diagonal_fermat_zeta, fermat_quartic_p, h0_basis, h0_dimension};
use dwork_zeta::fredholm::zeta_direct;
use dwork_zeta::oracle::{count_projective, ff_build};
use dwork_zeta::poly::Polynomial;
use dwork_zeta::series::TruncSeries;
use dwork_zeta::zeta::verify_report;
use dwork_zeta::ZetaError;
use num_bigint::BigInt;
use num_rational::BigRational;

fn oracle(f: &Polynomial, s: u32) -> BigInt {
    BigInt::from(count_projective(f, &ff_build(f.p(), s).unwrap()).unwrap())
}

#[test]
fn h0_dimensions() {
    assert_eq!(h0_dimension(3, 3), 2);
    assert_eq!(h0_dimension(4, 4), 21);
    assert_eq!(h0_dimension(3, 4), 6);
    assert_eq!(h0_basis(4, 4).unwrap().elements.len(), 21);
}

#[test]
fn diagonal_and_direct_routes_agree_for_the_cubic_at_7() {
    let diag = diagonal_fermat_zeta(3, 3, 7, None).unwrap();
    let f = Polynomial::parse("x1^3+x2^3+x3^3", 7, None).unwrap();
    let direct = zeta_direct(&f, 7, None).unwrap();
    assert_eq!(diag.numerator, direct.zeta.numerator);
}

#[test]
fn plane_quartic_at_13() {
    let z = diagonal_fermat_zeta(3, 4, 13, None).unwrap();
    assert_eq!(z.numerator_degree(), 6);
    let f = Polynomial::parse("x1^4+x2^4+x3^4", 13, None).unwrap();
    for s in 1..=2 {
        assert_eq!(z.predicted_count(s), oracle(&f, s));
    }
    assert!(verify_report(&z).unwrap().all_ok());
}

#[test]
fn quartic_surface_at_5() {
    let z = fermat_quartic_p(5, None).unwrap();
    let f = Polynomial::parse("x1^4+x2^4+x3^4+x4^4", 5, None).unwrap();
    assert_eq!(z.predicted_count(2), oracle(&f, 2));
    assert!(matches!(fermat_quartic_p(7, None), Err(ZetaError::Unsupported(_))));
}

#[test]
fn cubic_swap_against_oracle() {
    for (p, a) in [(5u64, [1u64, 1, 1]), (5, [2, 3, 4]), (11, [1, 2, 5]), (17, [3, 1, 1])] {
        let z = cubic_swap_zeta(p, a, None).unwrap();
        assert_eq!(z.numerator, vec![BigInt::from(1), BigInt::from(0), BigInt::from(p)]);
        let text = format!("{}*x1^3+{}*x2^3+{}*x3^3", a[0], a[1], a[2]);
        let f = Polynomial::parse(&text, p, None).unwrap();
        for s in 1..=2 {
            assert_eq!(z.predicted_count(s), oracle(&f, s), "p={p} a={a:?} s={s}");
        }
    }
    assert!(cubic_swap_zeta(7, [1, 1, 1], None).is_err());
}

#[test]
fn dwork_family_at_13_for_every_admissible_gamma() {
    for g in 1..13u64 {
        if g.pow(4) % 13 == 1 {
            continue;
        }
        let z = assemble_p(13, g, None).unwrap();
        assert_eq!(z.numerator_degree(), 21);
        let f = dwork_family(13, g).unwrap();
        assert_eq!(z.predicted_count(2), oracle(&f, 2), "gamma={g}");
        assert!(verify_report(&z).unwrap().all_ok(), "gamma={g}");
    }
}

#[test]
fn dwork_family_at_17() {
    for g in [2u64, 3] {
        let z = assemble_p(17, g, None).unwrap();
        let f = dwork_family(17, g).unwrap();
        assert_eq!(z.predicted_count(2), oracle(&f, 2), "gamma={g}");
        let bf = block_factors(17, g).unwrap();
        assert_eq!(bf.known_roots().len(), 19);
    }
}

#[test]
fn picard_fuchs_report() {
    let r = picard_fuchs_check(40).unwrap();
    assert!(r.odes_ok());
    assert_eq!(r.det_normalized, None);
    // C1(0) = I pins the constant term of det C1 to 1, not -1/64
    assert_eq!(r.det_constant_term, "1");
    assert_eq!(r.det_printed, Some(0));
    let c = TruncSeries::<BigRational>::from_ints(&[1, 0, 0, 0, -1, 0, 0, 0, 0])
        .binomial_power(&BigRational::new((-1).into(), 2.into()))
        .unwrap();
    assert_eq!(c.coeffs()[4], BigRational::new(1.into(), 2.into()));
    assert_eq!(c.coeffs()[8], BigRational::new(3.into(), 8.into()));
    let c3 = solve_three_by_three(8);
    assert_eq!(c3[0][0].coeffs()[0], BigRational::from_integer(1.into()));
    assert!(picard_fuchs_check(2).is_err());
}
