//! Coefficients of the splitting function exp(π(x - x^p)), the Morita p-adic
//! gamma function and the additive character Θ_p.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Result, ZetaError};
use crate::padic::{self, check_odd_prime, PadicInt, PadicRing, PiElem};

pub fn mobius(mut k: u64) -> i32 {
    let mut mu = 1;
    let mut d = 2;
    while d * d <= k {
        if k.is_multiple_of(d) {
            k /= d;
            if k.is_multiple_of(d) {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if k > 1 {
        mu = -mu;
    }
    mu
}

/// Multiplies `f` in place by (1 - y^k)^e, truncated at f.len().
fn mul_binomial_factor(f: &mut [BigRational], k: usize, e: &BigRational) {
    let n = f.len();
    let jmax = (n - 1) / k;
    let mut b = Vec::with_capacity(jmax + 1);
    let mut binom = BigRational::one();
    b.push(BigRational::one());
    for j in 1..=jmax {
        binom = binom * (e - BigRational::from_integer(BigInt::from(j - 1))) / BigRational::from_integer(BigInt::from(j));
        let term = if j % 2 == 1 { -binom.clone() } else { binom.clone() };
        b.push(term);
    }
    for i in (0..n).rev() {
        let mut acc = f[i].clone();
        for j in 1..=(i / k) {
            let src = &f[i - j * k];
            if !src.is_zero() {
                acc += &b[j] * src;
            }
        }
        f[i] = acc;
    }
}

/// Exact coefficients c_0..c_{n_max} of exp(y + y^p/p), i.e. λ_n = c_n π^n,
/// from the Möbius product for the Artin–Hasse exponential.
pub fn splitting_rationals(p: u64, n_max: usize) -> Result<Vec<BigRational>> {
    check_odd_prime(p)?;
    let mut f = vec![BigRational::zero(); n_max + 1];
    f[0] = BigRational::one();
    let p2 = (p * p) as usize;
    for k in 1..=n_max {
        if (k as u64).is_multiple_of(p) {
            continue;
        }
        let mu = mobius(k as u64);
        if mu == 0 {
            continue;
        }
        let e = BigRational::new(BigInt::from(-mu), BigInt::from(k));
        mul_binomial_factor(&mut f, k, &e);
        if k * p2 <= n_max {
            let e2 = BigRational::new(BigInt::from(mu), BigInt::from(k * p2));
            mul_binomial_factor(&mut f, k * p2, &e2);
        }
    }
    Ok(f)
}

/// Lower bound for ord_p(c_n): -(2m + max(0, m-1)/(p-1)) with m = ⌊n/p²⌋.
pub fn c_valuation_floor(p: u64, n: u64) -> BigRational {
    let m = n / (p * p);
    let tail = if m > 0 { BigRational::new(BigInt::from(m - 1), BigInt::from(p - 1)) } else { BigRational::zero() };
    -(BigRational::from_integer(BigInt::from(2 * m)) + tail)
}

/// The x^n coefficients λ_n of the splitting function, reduced mod p^N.
#[derive(Clone, Debug)]
pub struct SplittingCoeffs {
    ring: Arc<PadicRing>,
    c: Vec<BigRational>,
    lambda: Vec<PiElem>,
}

impl SplittingCoeffs {
    pub fn ring(&self) -> &Arc<PadicRing> {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn n_max(&self) -> usize {
        self.c.len() - 1
    }

    pub fn lambda(&self, n: usize) -> Option<&PiElem> {
        self.lambda.get(n)
    }

    pub fn lambdas(&self) -> &[PiElem] {
        &self.lambda
    }

    pub fn c(&self, n: usize) -> Option<&BigRational> {
        self.c.get(n)
    }
}

pub fn splitting_coeffs(ring: &Arc<PadicRing>, n_max: usize) -> Result<SplittingCoeffs> {
    if n_max < 1 {
        return Err(ZetaError::InvalidArgument("n_max must be at least 1".into()));
    }
    let p = ring.p();
    let c = splitting_rationals(p, n_max)?;
    let e = (p - 1) as usize;
    let mut lambda = Vec::with_capacity(n_max + 1);
    for (n, cn) in c.iter().enumerate() {
        let q = (n / e) as u32;
        let mut scale = BigRational::from_integer(BigInt::from(p).pow(q));
        if q % 2 == 1 {
            scale = -scale;
        }
        let v = padic::from_rational(ring, &(cn * scale))?;
        let mut coeffs = vec![padic::zero(ring); e];
        coeffs[n % e] = v;
        lambda.push(PiElem::from_coeffs(&coeffs)?);
    }
    Ok(SplittingCoeffs { ring: ring.clone(), c, lambda })
}

pub const GAMMA_PRODUCT_CAP: u64 = 5_000_000;

/// Morita's Γ_p(m) = (-1)^m ∏_{0<j<m, p∤j} j mod p^N.
pub fn gamma_p_product(ring: &Arc<PadicRing>, m: u64) -> Result<PadicInt> {
    if m > GAMMA_PRODUCT_CAP {
        return Err(ZetaError::Capacity(format!(
            "gamma product over {} factors exceeds the cap {}; use the Roberts route",
            m, GAMMA_PRODUCT_CAP
        )));
    }
    let p = ring.p();
    let acc = match ring.modulus().to_u64() {
        Some(md) => {
            let md = md as u128;
            let mut acc: u128 = 1;
            for j in 1..m {
                if j % p != 0 {
                    acc = acc * (j as u128 % md) % md;
                }
            }
            padic::from_u64(ring, acc as u64)
        }
        None => {
            let mut acc = BigUint::one();
            for j in 1..m {
                if j % p != 0 {
                    acc = (acc * j) % ring.modulus();
                }
            }
            padic::from_bigint(ring, &BigInt::from(acc))
        }
    };
    Ok(if m % 2 == 1 { -&acc } else { acc })
}

/// Γ_p(z) for z ∈ Z_p, through the nonnegative representative of z mod p^N.
pub fn gamma_p_at(z: &PadicInt) -> Result<PadicInt> {
    let m = z.residue().to_u64().filter(|&m| m <= GAMMA_PRODUCT_CAP).ok_or_else(|| {
        ZetaError::Capacity(format!(
            "representative {} of z exceeds the product cap {}; use the Roberts route",
            z.residue(),
            GAMMA_PRODUCT_CAP
        ))
    })?;
    gamma_p_product(z.ring(), m)
}

/// Least K such that every Roberts term with index k > K has valuation ≥ N.
pub fn roberts_terms_needed(p: u64, a: u64, prec: u32) -> usize {
    let n = BigRational::from_integer(BigInt::from(prec));
    let slope = BigRational::one() - BigRational::new(BigInt::from(2 * p - 1), BigInt::from(p * (p - 1)));
    let offset = BigRational::new(BigInt::from(a * (2 * p - 1)), BigInt::from(p * p * (p - 1)));
    let mut last_bad = 0usize;
    let mut k = 0u64;
    loop {
        let bound = BigRational::from_integer(BigInt::from(k)) + c_valuation_floor(p, a + k * p);
        if bound < n {
            last_bad = k as usize;
        }
        let linear = &slope * BigRational::from_integer(BigInt::from(k)) - &offset;
        if linear >= n {
            break;
        }
        k += 1;
    }
    last_bad
}

/// Default number of Roberts terms: N + 2, raised to the certified count.
pub fn roberts_default_terms(p: u64, a: u64, prec: u32) -> usize {
    (prec as usize + 2).max(roberts_terms_needed(p, a, prec))
}

/// Γ_p(pz - a) = Σ_k c_{a+kp} p^k (z)_k, summed through k = K.
pub fn gamma_p_roberts(z: &PadicInt, a: u64, sc: &SplittingCoeffs, k_terms: usize) -> Result<PadicInt> {
    let ring = z.ring();
    let p = ring.p();
    if a >= p {
        return Err(ZetaError::InvalidArgument(format!("a = {a} must lie in 0..p-1")));
    }
    let need = roberts_terms_needed(p, a, ring.precision());
    if k_terms < need {
        return Err(ZetaError::Insufficient(format!(
            "{k_terms} Roberts terms requested, {need} needed for precision {}",
            ring.precision()
        )));
    }
    let top = a as usize + k_terms * p as usize;
    if sc.n_max() < top {
        return Err(ZetaError::Insufficient(format!(
            "splitting coefficients known through {}, need {}",
            sc.n_max(),
            top
        )));
    }
    let mut acc = padic::zero(ring);
    let mut poch = padic::one(ring);
    let mut pk = BigRational::one();
    let pr = BigRational::from_integer(BigInt::from(p));
    for k in 0..=k_terms {
        if k > 0 {
            let zk = z + &padic::from_u64(ring, (k - 1) as u64);
            poch = &poch * &zk;
            pk *= &pr;
        }
        if poch.is_zero() {
            break;
        }
        let coef = sc.c(a as usize + k * p as usize).expect("checked length") * &pk;
        let c = padic::from_rational(ring, &coef)?;
        acc = &acc + &(&c * &poch);
    }
    Ok(acc)
}

/// Γ_p(x) for a p-integral rational x through the Roberts sum, writing x = pz - a.
pub fn gamma_p_rational(ring: &Arc<PadicRing>, x: &BigRational) -> Result<PadicInt> {
    let p = ring.p();
    let xp = padic::from_rational(ring, x)?;
    let a = (ring.modulus() - xp.residue()) % BigUint::from(p);
    let a = a.to_u64().expect("below p");
    let z = BigRational::new(x.numer() + BigInt::from(a) * x.denom(), x.denom() * BigInt::from(p));
    let z = padic::from_rational(ring, &z)?;
    let k = roberts_default_terms(p, a, ring.precision());
    let sc = splitting_coeffs(ring, a as usize + k * p as usize)?;
    gamma_p_roberts(&z, a, &sc, k)
}

/// Θ_p(x) = 𝔍(Teich(x)).
pub fn dwork_character(x: u64, sc: &SplittingCoeffs) -> Result<PiElem> {
    let ring = sc.ring();
    let p = ring.p();
    let need = (ring.precision() as u64 * p * p).div_ceil(p - 1) as usize;
    if sc.n_max() < need {
        return Err(ZetaError::Insufficient(format!(
            "character needs splitting coefficients through {}, have {}",
            need,
            sc.n_max()
        )));
    }
    let t = padic::teichmuller(ring, x);
    let mut acc = PiElem::zero(ring);
    let mut tn = padic::one(ring);
    for lam in &sc.lambda[..=need] {
        acc = &acc + &lam.scale(&tn);
        tn = &tn * &t;
        if tn.is_zero() {
            break;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::ord_p_rational;

    /// (n+1) c_{n+1} = c_n + c_{n+1-p}, from differentiating exp(y + y^p/p).
    fn recurrence(p: usize, n_max: usize) -> Vec<BigRational> {
        let mut c = vec![BigRational::one()];
        for n in 0..n_max {
            let mut v = c[n].clone();
            if n + 1 >= p {
                v += &c[n + 1 - p];
            }
            c.push(v / BigRational::from_integer(BigInt::from(n + 1)));
        }
        c
    }

    #[test]
    fn product_matches_recurrence() {
        for p in [3u64, 5, 7] {
            assert_eq!(splitting_rationals(p, 120).unwrap(), recurrence(p as usize, 120));
        }
    }

    #[test]
    fn valuation_floor_holds() {
        for p in [3u64, 5, 7] {
            let c = recurrence(p as usize, 400);
            for (n, cn) in c.iter().enumerate() {
                if let Some(v) = ord_p_rational(cn, p) {
                    assert!(BigRational::from_integer(v.into()) >= c_valuation_floor(p, n as u64), "p={p} n={n}");
                }
            }
        }
    }

    #[test]
    fn first_lambdas() {
        let ring = PadicRing::new(5, 4).unwrap();
        let sc = splitting_coeffs(&ring, 10).unwrap();
        assert_eq!(sc.lambda(0).unwrap(), &PiElem::one(&ring));
        assert_eq!(sc.lambda(1).unwrap(), &PiElem::pi(&ring));
    }

    #[test]
    fn gamma_small() {
        let ring = PadicRing::new(5, 3).unwrap();
        assert_eq!(gamma_p_product(&ring, 0).unwrap(), padic::one(&ring));
        assert_eq!(gamma_p_product(&ring, 1).unwrap(), padic::from_i64(&ring, -1));
        assert_eq!(gamma_p_product(&ring, 3).unwrap(), padic::from_u64(&ring, 123));
    }

    #[test]
    fn roberts_at_integers() {
        let ring = PadicRing::new(5, 4).unwrap();
        let sc = splitting_coeffs(&ring, 200).unwrap();
        let z0 = padic::zero(&ring);
        let k = roberts_default_terms(5, 0, 4);
        assert_eq!(gamma_p_roberts(&z0, 0, &sc, k).unwrap(), padic::one(&ring));
        for a in 0..5u64 {
            let k = roberts_default_terms(5, a, 4);
            let g = gamma_p_roberts(&padic::one(&ring), a, &sc, k).unwrap();
            assert_eq!(g, gamma_p_product(&ring, 5 - a).unwrap(), "a={a}");
        }
    }

    #[test]
    fn mobius_values() {
        let mu: Vec<i32> = (1..=10).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }
}
