//! Truncated power series, Newton polygons and the trace/determinant
//! conversion through Newton's identities.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::error::{Result, ZetaError};
use crate::padic::{self, PadicInt, PiElem};

/// Coefficient rings a [`TruncSeries`] may live over.
pub trait Coeff: Clone + fmt::Debug + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn c_add(&self, o: &Self) -> Self;
    fn c_mul(&self, o: &Self) -> Self;
    fn c_neg(&self) -> Self;
    fn c_is_zero(&self) -> bool;
    fn from_rational_like(&self, r: &BigRational) -> Result<Self>;
}

impl Coeff for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn c_add(&self, o: &Self) -> Self {
        self + o
    }
    fn c_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn from_rational_like(&self, r: &BigRational) -> Result<Self> {
        Ok(r.clone())
    }
}

impl Coeff for PadicInt {
    fn zero_like(&self) -> Self {
        padic::zero(self.ring())
    }
    fn one_like(&self) -> Self {
        padic::one(self.ring())
    }
    fn c_add(&self, o: &Self) -> Self {
        self + o
    }
    fn c_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn from_rational_like(&self, r: &BigRational) -> Result<Self> {
        padic::from_rational(self.ring(), r)
    }
}

impl Coeff for PiElem {
    fn zero_like(&self) -> Self {
        PiElem::zero(self.ring())
    }
    fn one_like(&self) -> Self {
        PiElem::one(self.ring())
    }
    fn c_add(&self, o: &Self) -> Self {
        self + o
    }
    fn c_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn from_rational_like(&self, r: &BigRational) -> Result<Self> {
        Ok(PiElem::from_padic(&padic::from_rational(self.ring(), r)?))
    }
}

/// Power series truncated at degree `M = coeffs.len() - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> TruncSeries<C> {
    pub fn new(coeffs: Vec<C>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(ZetaError::InvalidArgument("series needs at least one coefficient".into()));
        }
        Ok(TruncSeries { coeffs })
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Option<&C> {
        self.coeffs.get(k)
    }

    pub fn truncate(&self, m: usize) -> Self {
        TruncSeries { coeffs: self.coeffs[..=m.min(self.degree())].to_vec() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let m = self.degree().min(o.degree());
        TruncSeries { coeffs: (0..=m).map(|k| self.coeffs[k].c_add(&o.coeffs[k])).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let m = self.degree().min(o.degree());
        TruncSeries { coeffs: (0..=m).map(|k| self.coeffs[k].c_add(&o.coeffs[k].c_neg())).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = self.degree().min(o.degree());
        let z = self.coeffs[0].zero_like();
        let mut out = vec![z; m + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(m + 1) {
            if a.c_is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(m + 1 - i) {
                if b.c_is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].c_add(&a.c_mul(b));
            }
        }
        TruncSeries { coeffs: out }
    }

    pub fn scale(&self, c: &C) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|a| a.c_mul(c)).collect() }
    }

    /// `self^e` for `self = 1 + u`, summing binomial coefficients of `e`.
    pub fn binomial_power(&self, e: &BigRational) -> Result<Self> {
        let one = self.coeffs[0].one_like();
        if self.coeffs[0] != one {
            return Err(ZetaError::InvalidArgument("binomial power needs constant term 1".into()));
        }
        let m = self.degree();
        let mut u = self.clone();
        u.coeffs[0] = one.zero_like();
        let mut out = vec![one.zero_like(); m + 1];
        out[0] = one.clone();
        let mut upow = TruncSeries { coeffs: { let mut v = vec![one.zero_like(); m + 1]; v[0] = one.clone(); v } };
        let mut binom = BigRational::one();
        for k in 1..=m {
            binom = binom * (e - BigRational::from_integer(BigInt::from(k - 1))) / BigRational::from_integer(BigInt::from(k));
            upow = upow.mul(&u);
            if upow.coeffs.iter().all(|c| c.c_is_zero()) {
                break;
            }
            if binom.is_zero() {
                continue;
            }
            let b = one.from_rational_like(&binom)?;
            for (o, c) in out.iter_mut().zip(&upow.coeffs) {
                if !c.c_is_zero() {
                    *o = o.c_add(&c.c_mul(&b));
                }
            }
        }
        Ok(TruncSeries { coeffs: out })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.c_is_zero())
    }
}

impl TruncSeries<BigRational> {
    pub fn from_ints(cs: &[i64]) -> Self {
        TruncSeries { coeffs: cs.iter().map(|&c| BigRational::from_integer(c.into())).collect() }
    }

    /// Formal derivative; the result has degree one less (at least 0).
    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return TruncSeries { coeffs: vec![BigRational::zero()] };
        }
        TruncSeries {
            coeffs: (1..=self.degree())
                .map(|k| &self.coeffs[k] * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        }
    }

    /// First degree at which two series differ, if any, up to the common degree.
    pub fn first_difference(&self, o: &Self) -> Option<usize> {
        (0..=self.degree().min(o.degree())).find(|&k| self.coeffs[k] != o.coeffs[k])
    }
}

/// Coefficients of det(1 - A T) through degree `m`, given tr(A^s) for s = 1..S.
pub fn traces_to_charpoly(powersums: &[BigRational], m: usize) -> Result<TruncSeries<BigRational>> {
    if m > powersums.len() {
        return Err(ZetaError::Insufficient(format!(
            "degree {} requested from {} power sums",
            m,
            powersums.len()
        )));
    }
    let mut a = vec![BigRational::one()];
    for k in 1..=m {
        let mut acc = BigRational::zero();
        for s in 1..=k {
            acc += &powersums[s - 1] * &a[k - s];
        }
        a.push(-acc / BigRational::from_integer(BigInt::from(k)));
    }
    TruncSeries::new(a)
}

/// Inverse of [`traces_to_charpoly`]: power sums of the reciprocal roots of a
/// polynomial with constant term 1.
pub fn charpoly_to_traces(coeffs: &[BigRational], s_max: usize) -> Vec<BigRational> {
    let a = |k: usize| coeffs.get(k).cloned().unwrap_or_else(BigRational::zero);
    let mut ps: Vec<BigRational> = Vec::with_capacity(s_max);
    for k in 1..=s_max {
        let mut v = -a(k) * BigRational::from_integer(BigInt::from(k));
        for s in 1..k {
            v -= &ps[s - 1] * a(k - s);
        }
        ps.push(v);
    }
    ps
}

pub fn poly_mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Lower convex hull of a finite set of (degree, valuation) points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(usize, Ratio<i64>)>,
    /// (slope, horizontal length), slopes strictly increasing.
    pub segments: Vec<(Ratio<i64>, usize)>,
}

impl NewtonPolygon {
    /// Slope multiset, each slope repeated by its horizontal length.
    pub fn slope_multiset(&self) -> Vec<Ratio<i64>> {
        self.segments.iter().flat_map(|&(s, l)| std::iter::repeat_n(s, l)).collect()
    }

    /// Height of the polygon above degree `n`, if `n` is within range.
    pub fn height_at(&self, n: usize) -> Option<Ratio<i64>> {
        let w = self.vertices.windows(2).find(|w| w[0].0 <= n && n <= w[1].0);
        match w {
            Some(w) => {
                let (x0, y0) = w[0];
                let (x1, y1) = w[1];
                Some(y0 + (y1 - y0) * Ratio::new((n - x0) as i64, (x1 - x0) as i64))
            }
            None if self.vertices.len() == 1 && self.vertices[0].0 == n => Some(self.vertices[0].1),
            None => None,
        }
    }
}

pub fn newton_polygon(points: &[(usize, Ratio<i64>)]) -> Result<NewtonPolygon> {
    if points.is_empty() {
        return Err(ZetaError::InvalidArgument("newton polygon of an empty point set".into()));
    }
    let mut pts: Vec<(usize, Ratio<i64>)> = points.to_vec();
    pts.sort();
    // keep the lowest point per degree
    pts.dedup_by(|b, a| a.0 == b.0);
    let mut hull: Vec<(usize, Ratio<i64>)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            let lhs = (y2 - y1) * Ratio::from_integer((pt.0 - x1) as i64);
            let rhs = (pt.1 - y1) * Ratio::from_integer((x2 - x1) as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| ((w[1].1 - w[0].1) / Ratio::from_integer((w[1].0 - w[0].0) as i64), w[1].0 - w[0].0))
        .collect();
    Ok(NewtonPolygon { vertices: hull, segments })
}

/// Number of roots of norm at most p^λ: total length of segments with slope ≤ λ.
pub fn slope_root_count(np: &NewtonPolygon, lambda: Ratio<i64>) -> usize {
    np.segments.iter().filter(|(s, _)| *s <= lambda).map(|(_, l)| l).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64) -> Ratio<i64> {
        Ratio::from_integer(a)
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn geometric_times_one_minus_t() {
        let a = TruncSeries::from_ints(&[1, -1, 0, 0, 0, 0]);
        let b = TruncSeries::from_ints(&[1, 1, 1, 1, 1, 1]);
        assert_eq!(a.mul(&b), TruncSeries::from_ints(&[1, 0, 0, 0, 0, 0]));
        let c = TruncSeries::from_ints(&[1, 1, 0]);
        assert_eq!(c.mul(&c), TruncSeries::from_ints(&[1, 2, 1]));
    }

    #[test]
    fn binomial_half() {
        let mut cs = vec![BigRational::zero(); 9];
        cs[0] = q(1, 1);
        cs[4] = q(-1, 1);
        let s = TruncSeries::new(cs).unwrap().binomial_power(&q(-1, 2)).unwrap();
        let mut want = vec![BigRational::zero(); 9];
        want[0] = q(1, 1);
        want[4] = q(1, 2);
        want[8] = q(3, 8);
        assert_eq!(s.coeffs(), &want[..]);
    }

    #[test]
    fn binomial_rejects_p_denominator() {
        let ring = padic::PadicRing::new(5, 4).unwrap();
        let one = padic::one(&ring);
        let s = TruncSeries::new(vec![one.clone(), one.clone(), one.zero_like()]).unwrap();
        assert!(s.binomial_power(&q(1, 5)).is_err());
        assert!(s.binomial_power(&q(1, 3)).is_ok());
    }

    #[test]
    fn newton_examples() {
        let np = newton_polygon(&[(0, r(0)), (1, r(0)), (2, r(1)), (3, r(3))]).unwrap();
        assert_eq!(np.vertices.len(), 4);
        assert_eq!(np.slope_multiset(), vec![r(0), r(1), r(2)]);
        let np = newton_polygon(&[(0, r(0)), (1, r(2)), (2, r(1))]).unwrap();
        assert_eq!(np.vertices, vec![(0, r(0)), (2, r(1))]);
        assert_eq!(np.segments, vec![(Ratio::new(1, 2), 2)]);
        assert_eq!(slope_root_count(&np, r(0)), 0);
        let mut pts = vec![(0, r(0)), (21, r(21))];
        pts.extend((1..21).map(|k| (k, r(k as i64 + 1))));
        let np = newton_polygon(&pts).unwrap();
        assert_eq!(np.segments, vec![(r(1), 21)]);
        assert!(newton_polygon(&[]).is_err());
    }

    #[test]
    fn root_counts() {
        let np = NewtonPolygon { vertices: vec![], segments: vec![(r(0), 1), (r(1), 19), (r(2), 1)] };
        assert_eq!(slope_root_count(&np, r(1)), 20);
        let np = newton_polygon(&[(0, r(0)), (1, r(0)), (2, r(1)), (3, r(3))]).unwrap();
        assert_eq!(slope_root_count(&np, r(0)), 1);
    }

    #[test]
    fn charpoly_examples() {
        let zero = vec![BigRational::zero(); 3];
        assert_eq!(traces_to_charpoly(&zero, 3).unwrap(), TruncSeries::from_ints(&[1, 0, 0, 0]));
        let twos = vec![q(2, 1); 2];
        assert_eq!(traces_to_charpoly(&twos, 2).unwrap(), TruncSeries::from_ints(&[1, -2, 1]));
        assert!(traces_to_charpoly(&twos, 3).is_err());
        let back = charpoly_to_traces(&[q(1, 1), q(-2, 1), q(1, 1)], 4);
        assert_eq!(back, vec![q(2, 1); 4]);
    }
}
