//! Fixed absolute precision arithmetic in Z/p^N and in the ramified ring
//! Z_p[π]/(π^(p-1) + p).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::error::{Result, ZetaError};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(ZetaError::InvalidPrime(p));
    }
    Ok(())
}

/// The ring Z/p^N.
#[derive(Debug, PartialEq, Eq)]
pub struct PadicRing {
    p: u64,
    prec: u32,
    modulus: BigUint,
}

impl PadicRing {
    pub fn new(p: u64, prec: u32) -> Result<Arc<PadicRing>> {
        check_odd_prime(p)?;
        if prec == 0 {
            return Err(ZetaError::InvalidArgument("precision must be at least 1".into()));
        }
        let modulus = BigUint::from(p).pow(prec);
        Ok(Arc::new(PadicRing { p, prec, modulus }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }
}

fn same_ring(a: &Arc<PadicRing>, b: &Arc<PadicRing>) -> bool {
    Arc::ptr_eq(a, b) || (a.p == b.p && a.prec == b.prec)
}

fn mismatch(a: &PadicRing, b: &PadicRing) -> ZetaError {
    ZetaError::Contract(format!(
        "mismatched p-adic rings: (p={}, N={}) vs (p={}, N={})",
        a.p, a.prec, b.p, b.prec
    ))
}

pub fn zero(ring: &Arc<PadicRing>) -> PadicInt {
    PadicInt { ring: ring.clone(), residue: BigUint::zero() }
}

pub fn one(ring: &Arc<PadicRing>) -> PadicInt {
    from_u64(ring, 1)
}

pub fn from_u64(ring: &Arc<PadicRing>, a: u64) -> PadicInt {
    PadicInt { ring: ring.clone(), residue: BigUint::from(a) % &ring.modulus }
}

pub fn from_bigint(ring: &Arc<PadicRing>, a: &BigInt) -> PadicInt {
    let m = BigInt::from(ring.modulus.clone());
    let r = a.mod_floor(&m);
    PadicInt { ring: ring.clone(), residue: r.to_biguint().expect("nonnegative") }
}

pub fn from_i64(ring: &Arc<PadicRing>, a: i64) -> PadicInt {
    from_bigint(ring, &BigInt::from(a))
}

/// Reduces a rational whose denominator is prime to p.
pub fn from_rational(ring: &Arc<PadicRing>, r: &BigRational) -> Result<PadicInt> {
    let den = from_bigint(ring, r.denom());
    let inv = den.inverse().ok_or_else(|| {
        ZetaError::NotIntegral(format!("{} has p = {} in its denominator", r, ring.p))
    })?;
    Ok(&from_bigint(ring, r.numer()) * &inv)
}

/// p-adic valuation, capped at the precision when the data cannot see further.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Valuation {
    pub value: Ratio<i64>,
    pub at_least: bool,
}

impl Valuation {
    pub fn exact(v: Ratio<i64>) -> Self {
        Valuation { value: v, at_least: false }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.at_least {
            write!(f, ">= {}", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

pub fn ord_p_biguint(x: &BigUint, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let pb = BigUint::from(p);
    let mut k = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(&pb);
        if !r.is_zero() {
            return Some(k);
        }
        y = q;
        k += 1;
    }
}

pub fn ord_p_bigint(x: &BigInt, p: u64) -> Option<u32> {
    ord_p_biguint(x.magnitude(), p)
}

/// Exact p-adic valuation of a rational; `None` for zero.
pub fn ord_p_rational(x: &BigRational, p: u64) -> Option<i64> {
    let a = ord_p_bigint(x.numer(), p)? as i64;
    let b = ord_p_bigint(x.denom(), p).unwrap_or(0) as i64;
    Some(a - b)
}

/// An element of Z/p^N.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicInt {
    ring: Arc<PadicRing>,
    residue: BigUint,
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.ring.p, self.ring.prec)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl PadicInt {
    pub fn ring(&self) -> &Arc<PadicRing> {
        &self.ring
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !(&self.residue % self.ring.p).is_zero()
    }

    fn wrap(&self, residue: BigUint) -> PadicInt {
        PadicInt { ring: self.ring.clone(), residue }
    }

    pub fn try_add(&self, o: &PadicInt) -> Result<PadicInt> {
        if !same_ring(&self.ring, &o.ring) {
            return Err(mismatch(&self.ring, &o.ring));
        }
        let mut r = &self.residue + &o.residue;
        if r >= self.ring.modulus {
            r -= &self.ring.modulus;
        }
        Ok(self.wrap(r))
    }

    pub fn try_sub(&self, o: &PadicInt) -> Result<PadicInt> {
        if !same_ring(&self.ring, &o.ring) {
            return Err(mismatch(&self.ring, &o.ring));
        }
        let r = if self.residue >= o.residue {
            &self.residue - &o.residue
        } else {
            &self.ring.modulus - &o.residue + &self.residue
        };
        Ok(self.wrap(r))
    }

    pub fn try_mul(&self, o: &PadicInt) -> Result<PadicInt> {
        if !same_ring(&self.ring, &o.ring) {
            return Err(mismatch(&self.ring, &o.ring));
        }
        Ok(self.wrap((&self.residue * &o.residue) % &self.ring.modulus))
    }

    pub fn pow(&self, e: u64) -> PadicInt {
        self.wrap(self.residue.modpow(&BigUint::from(e), &self.ring.modulus))
    }

    pub fn mul_u64(&self, k: u64) -> PadicInt {
        self.wrap((&self.residue * k) % &self.ring.modulus)
    }

    pub fn inverse(&self) -> Option<PadicInt> {
        if !self.is_unit() {
            return None;
        }
        let m = BigInt::from(self.ring.modulus.clone());
        let a = BigInt::from(self.residue.clone());
        let e = a.extended_gcd(&m);
        let inv = e.x.mod_floor(&m);
        Some(self.wrap(inv.to_biguint().expect("nonnegative")))
    }

    pub fn valuation(&self) -> Valuation {
        match ord_p_biguint(&self.residue, self.ring.p) {
            Some(k) => Valuation::exact(Ratio::from_integer(k as i64)),
            None => Valuation { value: Ratio::from_integer(self.ring.prec as i64), at_least: true },
        }
    }

    /// Representative in (-p^N/2, p^N/2].
    pub fn centered_lift(&self) -> BigInt {
        let r = BigInt::from(self.residue.clone());
        let m = BigInt::from(self.ring.modulus.clone());
        if &r * 2 > m {
            r - m
        } else {
            r
        }
    }
}

impl Add for &PadicInt {
    type Output = PadicInt;
    fn add(self, o: &PadicInt) -> PadicInt {
        self.try_add(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &PadicInt {
    type Output = PadicInt;
    fn sub(self, o: &PadicInt) -> PadicInt {
        self.try_sub(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &PadicInt {
    type Output = PadicInt;
    fn mul(self, o: &PadicInt) -> PadicInt {
        self.try_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        if self.residue.is_zero() {
            self.clone()
        } else {
            self.wrap(&self.ring.modulus - &self.residue)
        }
    }
}

/// Element of Z_p[π]/(π^(p-1) + p); `coeffs[i]` is the coefficient of π^i.
#[derive(Clone, PartialEq, Eq)]
pub struct PiElem {
    ring: Arc<PadicRing>,
    coeffs: Vec<BigUint>,
}

impl fmt::Debug for PiElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PiElem{:?} mod {}^{}", self.coeffs, self.ring.p, self.ring.prec)
    }
}

impl PiElem {
    pub fn zero(ring: &Arc<PadicRing>) -> PiElem {
        PiElem { ring: ring.clone(), coeffs: vec![BigUint::zero(); (ring.p - 1) as usize] }
    }

    pub fn one(ring: &Arc<PadicRing>) -> PiElem {
        Self::from_padic(&one(ring))
    }

    pub fn from_padic(a: &PadicInt) -> PiElem {
        let mut z = Self::zero(&a.ring);
        z.coeffs[0] = a.residue.clone();
        z
    }

    /// c·π^k, reduced with π^(p-1) = -p.
    pub fn monomial(c: &PadicInt, k: u64) -> PiElem {
        let ring = &c.ring;
        let e = ring.p - 1;
        let mut z = Self::zero(ring);
        let q = k / e;
        let mut scal = BigUint::from(ring.p).modpow(&BigUint::from(q), &ring.modulus);
        scal = (scal * &c.residue) % &ring.modulus;
        if q % 2 == 1 && !scal.is_zero() {
            scal = &ring.modulus - scal;
        }
        z.coeffs[(k % e) as usize] = scal;
        z
    }

    pub fn pi(ring: &Arc<PadicRing>) -> PiElem {
        Self::monomial(&one(ring), 1)
    }

    pub fn from_coeffs(cs: &[PadicInt]) -> Result<PiElem> {
        let ring = cs.first().ok_or_else(|| ZetaError::InvalidArgument("empty coefficient list".into()))?.ring.clone();
        if cs.len() as u64 != ring.p - 1 {
            return Err(ZetaError::Contract(format!("PiElem needs {} coefficients, got {}", ring.p - 1, cs.len())));
        }
        for c in cs {
            if !same_ring(&ring, &c.ring) {
                return Err(mismatch(&ring, &c.ring));
            }
        }
        Ok(PiElem { ring, coeffs: cs.iter().map(|c| c.residue.clone()).collect() })
    }

    pub fn ring(&self) -> &Arc<PadicRing> {
        &self.ring
    }

    pub fn coeff(&self, i: usize) -> PadicInt {
        PadicInt { ring: self.ring.clone(), residue: self.coeffs[i].clone() }
    }

    pub fn coeffs(&self) -> Vec<PadicInt> {
        (0..self.coeffs.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True when every coefficient of π^i, i ≥ 1, vanishes.
    pub fn is_pi_free(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The π^0 coefficient, provided the element is π-free.
    pub fn to_padic(&self) -> Result<PadicInt> {
        if !self.is_pi_free() {
            return Err(ZetaError::Precision(format!("expected a pi-free value, got {:?}", self)));
        }
        Ok(self.coeff(0))
    }

    pub fn try_add(&self, o: &PiElem) -> Result<PiElem> {
        if !same_ring(&self.ring, &o.ring) {
            return Err(mismatch(&self.ring, &o.ring));
        }
        let m = &self.ring.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| {
                let s = a + b;
                if &s >= m {
                    s - m
                } else {
                    s
                }
            })
            .collect();
        Ok(PiElem { ring: self.ring.clone(), coeffs })
    }

    pub fn try_sub(&self, o: &PiElem) -> Result<PiElem> {
        self.try_add(&-o)
    }

    pub fn try_mul(&self, o: &PiElem) -> Result<PiElem> {
        if !same_ring(&self.ring, &o.ring) {
            return Err(mismatch(&self.ring, &o.ring));
        }
        let e = self.coeffs.len();
        let m = &self.ring.modulus;
        let mut lo = vec![BigUint::zero(); e];
        let mut hi = vec![BigUint::zero(); e];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a * b;
                if i + j < e {
                    lo[i + j] += t;
                } else {
                    hi[i + j - e] += t;
                }
            }
        }
        let pb = BigUint::from(self.ring.p);
        let coeffs = lo
            .into_iter()
            .zip(hi)
            .map(|(l, h)| {
                let l = l % m;
                let h = (h * &pb) % m;
                if l >= h {
                    l - h
                } else {
                    m - h + l
                }
            })
            .collect();
        Ok(PiElem { ring: self.ring.clone(), coeffs })
    }

    pub fn scale(&self, c: &PadicInt) -> PiElem {
        let m = &self.ring.modulus;
        PiElem {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|a| (a * &c.residue) % m).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> PiElem {
        let mut base = self.clone();
        let mut acc = PiElem::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn valuation(&self) -> Valuation {
        let e = self.coeffs.len() as i64;
        let cap = Ratio::from_integer(self.ring.prec as i64);
        let mut best: Option<Ratio<i64>> = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if let Some(k) = ord_p_biguint(c, self.ring.p) {
                let v = Ratio::from_integer(k as i64) + Ratio::new(i as i64, e);
                best = Some(best.map_or(v, |b: Ratio<i64>| b.min(v)));
            }
        }
        match best {
            Some(v) if v < cap => Valuation::exact(v),
            _ => Valuation { value: cap, at_least: true },
        }
    }
}

impl Add for &PiElem {
    type Output = PiElem;
    fn add(self, o: &PiElem) -> PiElem {
        self.try_add(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &PiElem {
    type Output = PiElem;
    fn sub(self, o: &PiElem) -> PiElem {
        self.try_sub(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &PiElem {
    type Output = PiElem;
    fn mul(self, o: &PiElem) -> PiElem {
        self.try_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &PiElem {
    type Output = PiElem;
    fn neg(self) -> PiElem {
        let m = &self.ring.modulus;
        PiElem {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|a| if a.is_zero() { a.clone() } else { m - a }).collect(),
        }
    }
}

/// Teichmüller representative of `a mod p` in Z/p^N.
pub fn teichmuller(ring: &Arc<PadicRing>, a: u64) -> PadicInt {
    let mut x = from_u64(ring, a % ring.p);
    for _ in 0..=ring.prec {
        let y = x.pow(ring.p);
        if y == x {
            break;
        }
        x = y;
    }
    x
}

/// Euler's criterion.
pub fn legendre_symbol(a: &BigInt, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    let pb = BigInt::from(p);
    let r = a.mod_floor(&pb).to_biguint().expect("nonnegative");
    if r.is_zero() {
        return Ok(0);
    }
    let e = r.modpow(&BigUint::from((p - 1) / 2), &BigUint::from(p));
    Ok(if e.is_one() { 1 } else { -1 })
}

pub fn legendre_i64(a: i64, p: u64) -> Result<i8> {
    legendre_symbol(&BigInt::from(a), p)
}

/// Centered lift of an integer residue modulo m.
pub fn centered_mod(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let r = PadicRing::new(5, 3).unwrap();
        assert_eq!((&from_u64(&r, 100) + &from_u64(&r, 30)).residue, BigUint::from(5u32));
        assert_eq!(from_u64(&r, 124).centered_lift(), BigInt::from(-1));
        assert_eq!(from_u64(&r, 57).centered_lift(), BigInt::from(57));
        assert_eq!(from_u64(&r, 63).centered_lift(), BigInt::from(-62));
    }

    #[test]
    fn pi_reduction() {
        let r = PadicRing::new(5, 3).unwrap();
        let pi = PiElem::pi(&r);
        let p5 = &pi * &pi.pow(4);
        assert_eq!(p5, PiElem::monomial(&from_i64(&r, -5), 1));
        let a = &PiElem::one(&r) + &pi;
        let b = &PiElem::one(&r) - &pi;
        let c = &a * &b;
        assert_eq!(c.coeffs, vec![1u32.into(), 0u32.into(), 124u32.into(), 0u32.into()]);
    }

    #[test]
    fn valuations() {
        let r = PadicRing::new(5, 5).unwrap();
        assert_eq!(from_u64(&r, 250).valuation(), Valuation::exact(Ratio::from_integer(3)));
        assert_eq!(PiElem::pi(&r).valuation(), Valuation::exact(Ratio::new(1, 4)));
        let r3 = PadicRing::new(5, 3).unwrap();
        let z = zero(&r3).valuation();
        assert!(z.at_least);
        assert_eq!(z.value, Ratio::from_integer(3));
        assert_eq!(z.to_string(), ">= 3");
    }

    #[test]
    fn teich_and_legendre() {
        let r = PadicRing::new(5, 3).unwrap();
        assert_eq!(teichmuller(&r, 2).residue, BigUint::from(57u32));
        assert_eq!(teichmuller(&r, 0).residue, BigUint::zero());
        assert_eq!(teichmuller(&r, 1).residue, BigUint::one());
        assert_eq!(legendre_i64(2, 13).unwrap(), -1);
        assert_eq!(legendre_i64(1, 13).unwrap(), 1);
        assert_eq!(legendre_i64(13, 13).unwrap(), 0);
        assert_eq!(legendre_i64(-3, 13).unwrap(), 1);
    }

    #[test]
    fn mismatch_is_error() {
        let a = from_u64(&PadicRing::new(5, 3).unwrap(), 1);
        let b = from_u64(&PadicRing::new(5, 4).unwrap(), 1);
        assert!(matches!(a.try_add(&b), Err(ZetaError::Contract(_))));
        assert!(PadicRing::new(2, 3).is_err());
        assert!(PadicRing::new(9, 3).is_err());
    }

    #[test]
    fn rationals() {
        let r = PadicRing::new(5, 4).unwrap();
        let q = BigRational::new(1.into(), 4.into());
        let x = from_rational(&r, &q).unwrap();
        assert_eq!((&x * &from_u64(&r, 4)).residue, BigUint::one());
        let bad = BigRational::new(1.into(), 5.into());
        assert!(from_rational(&r, &bad).is_err());
        assert_eq!(ord_p_rational(&BigRational::new(50.into(), 3.into()), 5), Some(2));
    }
}
