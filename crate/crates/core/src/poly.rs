//! Multivariate polynomials over F_p with a small text parser.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Result, ZetaError};

/// Polynomial in x1..xn over F_p; exponent vectors map to coefficients in 1..p-1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    p: u64,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, u64>,
}

impl Polynomial {
    pub fn new(p: u64, nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, i64)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(ZetaError::InvalidArgument(format!(
                    "exponent vector {:?} has length {}, expected {}",
                    e,
                    e.len(),
                    nvars
                )));
            }
            let c = c.rem_euclid(p as i64) as u64;
            let slot = map.entry(e).or_insert(0);
            *slot = (*slot + c) % p;
        }
        map.retain(|_, c| *c != 0);
        Ok(Polynomial { p, nvars, terms: map })
    }

    /// Parses sums of terms such as `x1^4 + x2^4 - 8*x1*x2*x3*x4`.
    /// `nvars` defaults to the largest variable index that appears.
    pub fn parse(text: &str, p: u64, nvars: Option<usize>) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(ZetaError::Parse("empty polynomial".into()));
        }
        let b = s.as_bytes();
        let mut i = 0;
        let mut raw: Vec<(BTreeMap<usize, u32>, i64)> = Vec::new();
        let num = |i: &mut usize| -> Option<u64> {
            let st = *i;
            while *i < b.len() && b[*i].is_ascii_digit() {
                *i += 1;
            }
            if st == *i {
                None
            } else {
                s[st..*i].parse().ok()
            }
        };
        while i < b.len() {
            let mut sign = 1i64;
            if b[i] == b'+' || b[i] == b'-' {
                if b[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if !raw.is_empty() {
                return Err(ZetaError::Parse(format!("expected + or - at position {i}")));
            }
            let mut coef: i64 = 1;
            let mut exps: BTreeMap<usize, u32> = BTreeMap::new();
            let mut first = true;
            loop {
                if i >= b.len() {
                    if first {
                        return Err(ZetaError::Parse("dangling operator".into()));
                    }
                    break;
                }
                if b[i].is_ascii_digit() {
                    let v = num(&mut i).ok_or_else(|| ZetaError::Parse("bad number".into()))?;
                    coef = coef.wrapping_mul((v % p) as i64) % p as i64;
                } else if b[i] == b'x' {
                    i += 1;
                    let idx = num(&mut i).ok_or_else(|| ZetaError::Parse(format!("variable index expected at {i}")))?;
                    if idx == 0 {
                        return Err(ZetaError::Parse("variables are numbered from x1".into()));
                    }
                    let mut e = 1u32;
                    if i < b.len() && b[i] == b'^' {
                        i += 1;
                        e = num(&mut i).ok_or_else(|| ZetaError::Parse(format!("exponent expected at {i}")))? as u32;
                    }
                    *exps.entry(idx as usize).or_insert(0) += e;
                } else {
                    return Err(ZetaError::Parse(format!("unexpected '{}' at position {i}", b[i] as char)));
                }
                first = false;
                if i < b.len() && b[i] == b'*' {
                    i += 1;
                    continue;
                }
                if i < b.len() && (b[i] == b'x' || b[i].is_ascii_digit()) {
                    continue;
                }
                break;
            }
            raw.push((exps, sign * coef));
        }
        let maxv = raw.iter().filter_map(|(e, _)| e.keys().max().copied()).max().unwrap_or(0);
        let n = nvars.unwrap_or(maxv);
        if n < maxv || n == 0 {
            return Err(ZetaError::Parse(format!("polynomial uses x{maxv} but only {n} variables were declared")));
        }
        let terms = raw.into_iter().map(|(e, c)| {
            let mut v = vec![0u32; n];
            for (k, x) in e {
                v[k - 1] += x;
            }
            (v, c)
        });
        Polynomial::new(p, n, terms)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, u64)> {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common total degree, if the polynomial is homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    /// Sets the variables in `zeroed` (0-based) to zero, keeping the others.
    pub fn restrict_zero(&self, zeroed: &[usize]) -> Polynomial {
        let keep: Vec<usize> = (0..self.nvars).filter(|i| !zeroed.contains(i)).collect();
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| zeroed.iter().all(|&i| e[i] == 0))
            .map(|(e, c)| (keep.iter().map(|&i| e[i]).collect(), *c))
            .collect();
        Polynomial { p: self.p, nvars: keep.len(), terms }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if *c != 1 || e.iter().all(|&x| x == 0) {
                parts.push(c.to_string());
            }
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => parts.push(format!("x{}", i + 1)),
                    _ => parts.push(format!("x{}^{}", i + 1, x)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_fermat() {
        let f = Polynomial::parse("x1^3 + x2^3 + x3^3", 5, None).unwrap();
        assert_eq!(f.nvars(), 3);
        assert_eq!(f.num_terms(), 3);
        assert_eq!(f.homogeneous_degree(), Some(3));
    }

    #[test]
    fn parse_coefficients() {
        let f = Polynomial::parse("x1^4+x2^4+x3^4+x4^4-8*x1*x2*x3*x4", 13, None).unwrap();
        let c = f.terms().find(|(e, _)| e.iter().all(|&x| x == 1)).unwrap().1;
        assert_eq!(c, 5);
        let g = Polynomial::parse("2x1x2 + 3 x3^2", 7, Some(4)).unwrap();
        assert_eq!(g.nvars(), 4);
        assert_eq!(g.homogeneous_degree(), Some(2));
    }

    #[test]
    fn parse_errors() {
        assert!(Polynomial::parse("", 5, None).is_err());
        assert!(Polynomial::parse("x0", 5, None).is_err());
        assert!(Polynomial::parse("x1 +", 5, None).is_err());
        assert!(Polynomial::parse("x1 y", 5, None).is_err());
        assert!(Polynomial::parse("x3", 5, Some(2)).is_err());
    }

    #[test]
    fn cancellation_and_restriction() {
        let f = Polynomial::parse("x1^2 + 4*x1^2 + x2*x3", 5, None).unwrap();
        assert_eq!(f.num_terms(), 1);
        let g = f.restrict_zero(&[1]);
        assert!(g.is_zero());
        assert_eq!(g.nvars(), 2);
    }
}
