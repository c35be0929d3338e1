//! Brute-force point counting over F_{p^s} with Zech logarithm tables.

use rayon::prelude::*;

use crate::error::{Result, ZetaError};
use crate::padic::check_odd_prime;
use crate::poly::Polynomial;

pub const DEFAULT_TABLE_CAP: u64 = 1 << 26;

/// Marker for the zero element in log representation.
pub const ZERO: u32 = u32::MAX;

/// F_q with q = p^s, elements in log form (powers of a fixed generator).
#[derive(Clone, Debug)]
pub struct FqTable {
    p: u64,
    s: u32,
    q: u64,
    modulus: Vec<u64>,
    generator: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while a.len() > dm {
        let da = a.len() - 1;
        let c = a[da] * lead_inv % p;
        for i in 0..=dm {
            let t = c * m[i] % p;
            a[da - dm + i] = (a[da - dm + i] + p - t) % p;
        }
        a = trim(a);
    }
    a
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_rem(&out, m, p)
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial of degree s.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let s = f.len() as u64 - 1;
    if s == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let frob = |k: u64| -> Vec<u64> {
        let mut y = x.clone();
        for _ in 0..k {
            y = poly_powmod(&y, p, f, p);
        }
        y
    };
    let sub_x = |mut y: Vec<u64>| -> Vec<u64> {
        if y.len() < 2 {
            y.resize(2, 0);
        }
        y[1] = (y[1] + p - 1) % p;
        trim(y)
    };
    if !sub_x(frob(s)).is_empty() {
        return false;
    }
    for r in prime_factors(s) {
        let g = poly_gcd(f, &sub_x(frob(s / r)), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn digits(mut idx: u64, p: u64, s: u32) -> Vec<u64> {
    (0..s)
        .map(|_| {
            let d = idx % p;
            idx /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Builds the tables with the least irreducible modulus and least generator.
pub fn ff_build(p: u64, s: u32) -> Result<FqTable> {
    ff_build_capped(p, s, DEFAULT_TABLE_CAP)
}

pub fn ff_build_capped(p: u64, s: u32, cap: u64) -> Result<FqTable> {
    check_odd_prime(p)?;
    if s == 0 {
        return Err(ZetaError::InvalidArgument("extension degree must be at least 1".into()));
    }
    let q = p.checked_pow(s).filter(|&q| q <= cap).ok_or_else(|| {
        ZetaError::Capacity(format!(
            "F_{{{p}^{s}}} exceeds the table cap of {cap} elements; use a streaming polynomial-basis count or a smaller s"
        ))
    })?;
    let mut modulus = None;
    for t in 0..q {
        let mut f = digits(t, p, s);
        f.push(1);
        if is_irreducible(&f, p) {
            modulus = Some(f);
            break;
        }
    }
    let modulus = modulus.ok_or_else(|| ZetaError::Contract("no irreducible polynomial found".into()))?;
    let order = q - 1;
    let factors = prime_factors(order);
    let to_poly = |i: u64| trim(digits(i, p, s));
    let from_poly = |v: &[u64]| {
        let mut d = v.to_vec();
        d.resize(s as usize, 0);
        undigits(&d, p)
    };
    let one = vec![1u64];
    let mut generator = None;
    for g in 1..q {
        let gp = to_poly(g);
        if factors.iter().all(|r| poly_powmod(&gp, order / r, &modulus, p) != one) {
            generator = Some(g);
            break;
        }
    }
    let generator = generator.ok_or_else(|| ZetaError::Contract("no generator found".into()))?;
    let gpoly = to_poly(generator);
    let mut exp = Vec::with_capacity(order as usize);
    let mut log = vec![ZERO; q as usize];
    let mut cur = one.clone();
    for k in 0..order {
        let idx = from_poly(&cur);
        if log[idx as usize] != ZERO {
            return Err(ZetaError::Contract(format!("generator {generator} has order {k} < {order}")));
        }
        log[idx as usize] = k as u32;
        exp.push(idx as u32);
        cur = poly_mulmod(&cur, &gpoly, &modulus, p);
    }
    if cur != one {
        return Err(ZetaError::Contract("generator power does not return to 1".into()));
    }
    let zech = exp
        .iter()
        .map(|&idx| {
            let idx = idx as u64;
            let d0 = idx % p;
            let plus_one = idx - d0 + (d0 + 1) % p;
            log[plus_one as usize]
        })
        .collect();
    Ok(FqTable { p, s, q, modulus, generator, exp, log, zech })
}

impl FqTable {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients from the constant term up; monic.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Generator as a polynomial-basis index (digits base p, constant first).
    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn group_order(&self) -> u64 {
        self.q - 1
    }

    /// Log form of the polynomial-basis element with index `idx`.
    pub fn from_index(&self, idx: u64) -> u32 {
        self.log[idx as usize]
    }

    pub fn to_index(&self, a: u32) -> u64 {
        if a == ZERO {
            0
        } else {
            self.exp[a as usize] as u64
        }
    }

    pub fn from_fp(&self, c: u64) -> u32 {
        self.log[(c % self.p) as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == ZERO || b == ZERO {
            return ZERO;
        }
        let s = a as u64 + b as u64;
        let o = self.q - 1;
        (if s >= o { s - o } else { s }) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if a == ZERO {
            return b;
        }
        if b == ZERO {
            return a;
        }
        let o = (self.q - 1) as u32;
        let k = if b >= a { b - a } else { b + o - a };
        let z = self.zech[k as usize];
        if z == ZERO {
            return ZERO;
        }
        let s = a as u64 + z as u64;
        (s % o as u64) as u32
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == ZERO {
            return if e == 0 { 0 } else { ZERO };
        }
        ((a as u64 * (e % (self.q - 1))) % (self.q - 1)) as u32
    }

    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p)
    }
}

struct CompiledPoly {
    nvars: usize,
    terms: Vec<(u32, Vec<(usize, u64)>)>,
}

impl CompiledPoly {
    fn new(f: &Polynomial, t: &FqTable) -> Result<Self> {
        if f.p() != t.p {
            return Err(ZetaError::Contract(format!(
                "polynomial over F_{} evaluated with tables for F_{}",
                f.p(),
                t.p
            )));
        }
        let terms = f
            .terms()
            .map(|(e, c)| {
                let vars = e.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, &x)| (i, x as u64)).collect();
                (t.from_fp(c), vars)
            })
            .collect();
        Ok(CompiledPoly { nvars: f.nvars(), terms })
    }

    #[inline]
    fn is_root(&self, t: &FqTable, x: &[u32]) -> bool {
        let o = t.q - 1;
        let mut acc = ZERO;
        'terms: for (c, vars) in &self.terms {
            let mut l = *c as u64;
            for &(i, e) in vars {
                let xi = x[i];
                if xi == ZERO {
                    continue 'terms;
                }
                l += xi as u64 * e;
            }
            acc = t.add(acc, (l % o) as u32);
        }
        acc == ZERO
    }
}

/// Advances an odometer over the full field (ZERO then logs 0..q-2).
#[inline]
fn next_full(x: &mut [u32], q: u64) -> bool {
    for v in x.iter_mut().rev() {
        if *v == ZERO {
            *v = 0;
            return true;
        }
        if (*v as u64) + 2 < q {
            *v += 1;
            return true;
        }
        *v = ZERO;
    }
    false
}

#[inline]
fn next_units(x: &mut [u32], q: u64) -> bool {
    for v in x.iter_mut().rev() {
        if (*v as u64) + 2 < q {
            *v += 1;
            return true;
        }
        *v = 0;
    }
    false
}

fn field_values(q: u64) -> Vec<u32> {
    std::iter::once(ZERO).chain(0..(q - 1) as u32).collect()
}

/// Number of points of {f = 0} in projective space P^{n-1}(F_q), f homogeneous.
pub fn count_projective(f: &Polynomial, t: &FqTable) -> Result<u64> {
    count_projective_with(f, t, true)
}

pub fn count_projective_with(f: &Polynomial, t: &FqTable, parallel: bool) -> Result<u64> {
    if !f.is_zero() && f.homogeneous_degree().is_none() {
        return Err(ZetaError::InvalidArgument("projective count needs a homogeneous polynomial".into()));
    }
    let cp = CompiledPoly::new(f, t)?;
    let n = cp.nvars;
    let q = t.q;
    // (leading position, value of the next coordinate) chunks
    let mut chunks: Vec<(usize, Option<u32>)> = Vec::new();
    for lead in 0..n {
        if lead + 1 < n {
            chunks.extend(field_values(q).into_iter().map(|v| (lead, Some(v))));
        } else {
            chunks.push((lead, None));
        }
    }
    let work = |&(lead, second): &(usize, Option<u32>)| -> u64 {
        let mut x = vec![ZERO; n];
        x[lead] = 0;
        let start = match second {
            Some(v) => {
                x[lead + 1] = v;
                lead + 2
            }
            None => lead + 1,
        };
        let mut count = 0u64;
        loop {
            if cp.is_root(t, &x) {
                count += 1;
            }
            if !next_full(&mut x[start..], q) {
                break;
            }
        }
        count
    };
    Ok(if parallel { chunks.par_iter().map(work).sum() } else { chunks.iter().map(work).sum() })
}

/// Number of x ∈ (F_q^*)^n with f(x) = 0.
pub fn count_torus(f: &Polynomial, t: &FqTable) -> Result<u64> {
    let cp = CompiledPoly::new(f, t)?;
    let n = cp.nvars;
    let q = t.q;
    if n == 0 {
        return Ok(u64::from(f.is_zero()));
    }
    let firsts: Vec<u32> = (0..(q - 1) as u32).collect();
    Ok(firsts
        .par_iter()
        .map(|&v| {
            let mut x = vec![0u32; n];
            x[0] = v;
            let mut count = 0u64;
            loop {
                if cp.is_root(t, &x) {
                    count += 1;
                }
                if !next_units(&mut x[1..], q) {
                    break;
                }
            }
            count
        })
        .sum())
}

/// Returns ((q-1)·N, -1 + Σ_A N*(f_A)) for the coordinate-stratum decomposition.
pub fn inclusion_exclusion(f: &Polynomial, t: &FqTable) -> Result<(u64, i128)> {
    let n = f.nvars();
    let lhs = (t.q - 1) * count_projective(f, t)?;
    let mut rhs: i128 = -1;
    for mask in 0u32..(1 << n) {
        let zeroed: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        rhs += count_torus(&f.restrict_zero(&zeroed), t)? as i128;
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables() {
        let t = ff_build(3, 2).unwrap();
        assert_eq!(t.modulus(), &[1, 0, 1]);
        assert_eq!(t.group_order(), 8);
        assert_eq!(ff_build(13, 1).unwrap().group_order(), 12);
        assert_eq!(ff_build(5, 2).unwrap().group_order(), 24);
        assert!(matches!(ff_build_capped(5, 3, 100), Err(ZetaError::Capacity(_))));
    }

    #[test]
    fn addition_matches_digits() {
        let t = ff_build(5, 2).unwrap();
        for a in 0..25u64 {
            for b in 0..25u64 {
                let da = digits(a, 5, 2);
                let db = digits(b, 5, 2);
                let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % 5).collect();
                let want = undigits(&sum, 5);
                assert_eq!(t.to_index(t.add(t.from_index(a), t.from_index(b))), want);
            }
        }
    }

    #[test]
    fn small_counts() {
        let t3 = ff_build(3, 1).unwrap();
        let f = Polynomial::parse("x1", 3, Some(3)).unwrap();
        assert_eq!(count_projective(&f, &t3).unwrap(), 4);
        assert_eq!(count_torus(&f, &t3).unwrap(), 0);
        let zero = Polynomial::new(3, 2, vec![]).unwrap();
        assert_eq!(count_torus(&zero, &t3).unwrap(), 4);
        let cubic = Polynomial::parse("x1^3+x2^3+x3^3", 5, None).unwrap();
        let t5 = ff_build(5, 1).unwrap();
        assert_eq!(count_projective(&cubic, &t5).unwrap(), 6);
        let t25 = ff_build(5, 2).unwrap();
        assert_eq!(count_projective(&cubic, &t25).unwrap(), 36);
        assert_eq!(
            count_projective_with(&cubic, &t25, false).unwrap(),
            count_projective_with(&cubic, &t25, true).unwrap()
        );
    }

    #[test]
    fn strata_decomposition() {
        let cubic = Polynomial::parse("x1^3+x2^3+x3^3", 5, None).unwrap();
        for s in 1..=2 {
            let t = ff_build(5, s).unwrap();
            let (l, r) = inclusion_exclusion(&cubic, &t).unwrap();
            assert_eq!(l as i128, r);
        }
    }
}
