//! Closed-form zeta numerators for diagonal hypersurfaces through Γ_p.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dwork::{gamma_p_roberts, roberts_default_terms, splitting_coeffs, SplittingCoeffs};
use crate::error::{Result, ZetaError};
use crate::fredholm::MonomialIndex;
use crate::oracle::{count_projective, ff_build};
use crate::padic::{self, check_odd_prime, PadicInt, PadicRing};
use crate::poly::Polynomial;
use crate::series::poly_mul_int;
use crate::zeta::{hypersurface_denominator, ZetaData};

/// The interior exponents 0 < v_i < d with d | Σ v_i, v₀ = Σ v_i / d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H0Basis {
    pub n: usize,
    pub d: u32,
    pub elements: Vec<MonomialIndex>,
}

pub fn h0_dimension(n: usize, d: u32) -> i64 {
    let dm = d as i64 - 1;
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    (dm.pow(n as u32) + sign * dm) / d as i64
}

pub fn h0_basis(n: usize, d: u32) -> Result<H0Basis> {
    if d < 2 {
        return Err(ZetaError::InvalidArgument("degree must be at least 2".into()));
    }
    let mut elements = Vec::new();
    let mut v = vec![1u32; n];
    loop {
        let s: u32 = v.iter().sum();
        if s.is_multiple_of(d) {
            let mut e = vec![s / d];
            e.extend_from_slice(&v);
            elements.push(MonomialIndex(e));
        }
        let mut k = n;
        loop {
            if k == 0 {
                elements.sort();
                return Ok(H0Basis { n, d, elements });
            }
            k -= 1;
            if v[k] + 1 < d {
                v[k] += 1;
                break;
            }
            v[k] = 1;
        }
    }
}

fn binom(n: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Least precision recovering every coefficient bounded by C(m,k)·p^{⌈wk/2⌉}.
pub fn reconstruction_precision(p: u64, m: usize, w: u32) -> u32 {
    let bound = (0..=m as u64)
        .map(|k| binom(m as u64, k) * BigInt::from(p).pow((w as u64 * k).div_ceil(2) as u32))
        .max()
        .unwrap_or_else(BigInt::one)
        * 2u32;
    let mut n = 0u32;
    let mut pn = BigInt::one();
    while pn <= bound {
        pn *= p;
        n += 1;
    }
    n
}

/// Γ_p(v/d) for d | p-1, by the Roberts sum with a = (p-1)v/d.
pub fn gamma_fraction(v: u64, d: u64, sc: &SplittingCoeffs) -> Result<PadicInt> {
    let ring = sc.ring();
    let p = ring.p();
    if !(p - 1).is_multiple_of(d) {
        return Err(ZetaError::InvalidArgument(format!("{d} does not divide p-1 = {}", p - 1)));
    }
    let z = padic::from_rational(ring, &BigRational::new(BigInt::from(v), BigInt::from(d)))?;
    let a = (p - 1) / d * v;
    gamma_p_roberts(&z, a, sc, roberts_default_terms(p, a, ring.precision()))
}

pub fn roberts_coeffs(ring: &Arc<PadicRing>) -> Result<SplittingCoeffs> {
    let p = ring.p();
    let k = (0..p).map(|a| roberts_default_terms(p, a, ring.precision())).max().unwrap_or(0);
    splitting_coeffs(ring, (p - 1) as usize + k * p as usize)
}

/// Eigenvalues e_v/p of 𝔘(0)/p on the H₀ basis of x1^d + … + xn^d, p ≡ 1 mod d.
pub fn diagonal_eigenvalues(n: usize, d: u32, ring: &Arc<PadicRing>) -> Result<Vec<(MonomialIndex, PadicInt)>> {
    let p = ring.p();
    if !(p - 1).is_multiple_of(d as u64) {
        return Err(ZetaError::Unsupported(format!("p = {p} is not 1 mod {d}")));
    }
    let sc = roberts_coeffs(ring)?;
    let gammas: Vec<PadicInt> = (0..d as u64).map(|v| gamma_fraction(v, d as u64, &sc)).collect::<Result<_>>()?;
    let basis = h0_basis(n, d)?;
    Ok(basis
        .elements
        .into_iter()
        .map(|v| {
            let v0 = v.v0();
            let mut e = padic::from_bigint(ring, &BigInt::from(p).pow(v0 - 1));
            if v0 % 2 == 1 {
                e = -&e;
            }
            for &vi in &v.0[1..] {
                e = &e * &gammas[vi as usize];
            }
            (v, e)
        })
        .collect())
}

/// Reduces ∏ (1 - e T) mod p^N and lifts to integers, checking the Weil size bound.
fn integer_product(roots: &[PadicInt], p: u64, w: u32) -> Result<Vec<BigInt>> {
    let ring = roots[0].ring();
    let mut poly = vec![padic::one(ring)];
    for e in roots {
        let mut next = vec![padic::zero(ring); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i] = &next[i] + c;
            next[i + 1] = &next[i + 1] - &(c * e);
        }
        poly = next;
    }
    let m = roots.len() as u64;
    let mut out = Vec::with_capacity(poly.len());
    for (k, c) in poly.iter().enumerate() {
        let v = c.centered_lift();
        let bound = binom(m, k as u64) * BigInt::from(p).pow((w as u64 * k as u64).div_ceil(2) as u32);
        if v.magnitude() > bound.magnitude() {
            return Err(ZetaError::Precision(format!(
                "coefficient of T^{k} lifts to {v}, beyond the Weil bound {bound}"
            )));
        }
        out.push(v);
    }
    Ok(out)
}

fn oracle_gate(z: &ZetaData, f: &Polynomial) -> Result<u64> {
    let n1 = count_projective(f, &ff_build(z.p, 1)?)?;
    let pred = z.predicted_count(1);
    if pred != BigInt::from(n1) {
        return Err(ZetaError::Inconsistent(format!("closed form predicts N_1 = {pred}, oracle counts {n1}")));
    }
    Ok(n1)
}

fn fermat_poly(p: u64, n: usize, d: u32) -> Polynomial {
    let terms = (0..n).map(|i| {
        let mut e = vec![0u32; n];
        e[i] = d;
        (e, 1i64)
    });
    Polynomial::new(p, n, terms).expect("well-formed")
}

/// Numerator of Z(T) for x1^d + … + xn^d over F_p with p ≡ 1 mod d,
/// from P(T) = ∏_{v∈S} (1 - e_v T/p); `prec` defaults to the reconstruction bound.
pub fn diagonal_fermat_zeta(n: usize, d: u32, p: u64, prec: Option<u32>) -> Result<ZetaData> {
    check_odd_prime(p)?;
    if n < 2 {
        return Err(ZetaError::InvalidArgument("need at least two variables".into()));
    }
    let m = h0_dimension(n, d) as usize;
    let w = n as u32 - 2;
    let prec = prec.unwrap_or_else(|| reconstruction_precision(p, m, w));
    let ring = PadicRing::new(p, prec)?;
    let eig = diagonal_eigenvalues(n, d, &ring)?;
    let roots: Vec<PadicInt> = eig.into_iter().map(|(_, e)| e).collect();
    let numerator = integer_product(&roots, p, w)?;
    let mut z = ZetaData {
        p,
        n,
        d,
        gamma: None,
        method: "diagonal".into(),
        numerator,
        numerator_is_inverted: n.is_multiple_of(2),
        denominator_factors: hypersurface_denominator(n),
        counts: vec![],
    };
    let n1 = oracle_gate(&z, &fermat_poly(p, n, d))?;
    z.counts.push((1, BigInt::from(n1)));
    Ok(z)
}

/// Degree-21 numerator for the Fermat quartic surface, p ≡ 1 mod 4.
pub fn fermat_quartic_p(p: u64, prec: Option<u32>) -> Result<ZetaData> {
    if p % 4 != 1 {
        return Err(ZetaError::Unsupported(format!(
            "p = {p} is 3 mod 4; the diagonal quartic route needs p = 1 mod 4"
        )));
    }
    diagonal_fermat_zeta(4, 4, p, prec)
}

/// The two transition coefficients of the swap (1,1,1) ↔ (2,2,2) for a diagonal
/// cubic with p ≡ 2 mod 3: (p² S_a³, -p S_b³).
pub fn cubic_swap_coefficients(ring: &Arc<PadicRing>) -> Result<(PadicInt, PadicInt)> {
    let p = ring.p();
    let sc = roberts_coeffs(ring)?;
    let a = (2 * p - 1) / 3;
    let b = (p - 2) / 3;
    let two_thirds = padic::from_rational(ring, &BigRational::new(2.into(), 3.into()))?;
    let one_third = padic::from_rational(ring, &BigRational::new(1.into(), 3.into()))?;
    let sa = gamma_p_roberts(&two_thirds, a, &sc, roberts_default_terms(p, a, ring.precision()))?;
    let sb = gamma_p_roberts(&one_third, b, &sc, roberts_default_terms(p, b, ring.precision()))?;
    let p2 = padic::from_u64(ring, p * p);
    let alpha1 = &p2 * &sa.pow(3);
    let alpha2 = -&(&padic::from_u64(ring, p) * &sb.pow(3));
    Ok((alpha1, alpha2))
}

/// Z(T) = (1 + αT²)/((1-T)(1-pT)) for a1 x1³ + a2 x2³ + a3 x3³, p ≡ 2 mod 3.
pub fn cubic_swap_zeta(p: u64, a: [u64; 3], prec: Option<u32>) -> Result<ZetaData> {
    check_odd_prime(p)?;
    if p % 3 != 2 {
        return Err(ZetaError::Unsupported(format!("p = {p} is not 2 mod 3")));
    }
    if a.iter().any(|&x| x % p == 0) {
        return Err(ZetaError::Singular("a diagonal coefficient vanishes mod p".into()));
    }
    let prec = prec.unwrap_or_else(|| reconstruction_precision(p, 2, 1) + 2);
    let ring = PadicRing::new(p, prec)?;
    let (a1, a2) = cubic_swap_coefficients(&ring)?;
    // P(T) = det(1 - 𝔘T/p) on span{(1,1,1),(2,2,2)} = 1 - (α₁α₂/p²) T²
    let prod = (&a1 * &a2).centered_lift();
    let p2 = BigInt::from(p * p);
    if !(&prod % &p2).is_zero() {
        return Err(ZetaError::Precision("swap product is not divisible by p^2".into()));
    }
    let alpha = -(prod / p2);
    if alpha.magnitude() > BigInt::from(p).magnitude() {
        return Err(ZetaError::Precision(format!("alpha = {alpha} exceeds the Weil bound {p}")));
    }
    let numerator = poly_mul_int(&[BigInt::one()], &[BigInt::one(), BigInt::zero(), alpha]);
    let mut z = ZetaData {
        p,
        n: 3,
        d: 3,
        gamma: None,
        method: "diagonal-swap".into(),
        numerator,
        numerator_is_inverted: false,
        denominator_factors: hypersurface_denominator(3),
        counts: vec![],
    };
    let f = Polynomial::new(
        p,
        3,
        (0..3).map(|i| {
            let mut e = vec![0u32; 3];
            e[i] = 3;
            (e, a[i] as i64)
        }),
    )?;
    let n1 = oracle_gate(&z, &f)?;
    z.counts.push((1, BigInt::from(n1)));
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_sizes() {
        assert_eq!(h0_basis(4, 4).unwrap().elements.len(), 21);
        let b = h0_basis(3, 3).unwrap();
        assert_eq!(b.elements, vec![MonomialIndex(vec![1, 1, 1, 1]), MonomialIndex(vec![2, 2, 2, 2])]);
        assert_eq!(h0_basis(5, 5).unwrap().elements.len(), 204);
        for d in 2..=6u32 {
            for n in 2..=6usize {
                assert_eq!(h0_basis(n, d).unwrap().elements.len() as i64, h0_dimension(n, d));
            }
        }
    }

    #[test]
    fn precision_rule() {
        // largest bound is 21·13^20 at k = 20, far above C(21,10)·13^10
        let n = reconstruction_precision(13, 21, 2);
        let top = binom(21, 20) * BigInt::from(13).pow(20) * 2u32;
        assert!(BigInt::from(13).pow(n) > top);
        assert!(BigInt::from(13).pow(n - 1) <= top);
        assert_eq!(n, 22);
    }

    #[test]
    fn swap_p5() {
        let z = cubic_swap_zeta(5, [1, 1, 1], None).unwrap();
        assert_eq!(z.numerator, vec![BigInt::from(1), BigInt::from(0), BigInt::from(5)]);
        let z = cubic_swap_zeta(5, [2, 3, 4], None).unwrap();
        assert_eq!(z.numerator[2], BigInt::from(5));
    }

    #[test]
    fn cubic_p7_matches_oracle() {
        let z = diagonal_fermat_zeta(3, 3, 7, None).unwrap();
        assert_eq!(z.numerator_degree(), 2);
        let n2 = count_projective(&fermat_poly(7, 3, 3), &ff_build(7, 2).unwrap()).unwrap();
        assert_eq!(z.predicted_count(2), BigInt::from(n2));
    }
}
