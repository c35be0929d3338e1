//! Zeta functions from point counts, and their verification reports.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Result, ZetaError};
use crate::padic::ord_p_bigint;
use crate::series::{charpoly_to_traces, newton_polygon, traces_to_charpoly, NewtonPolygon};

/// Z(T) = numerator^{±1} / ∏ (1 - p^j T)^c.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaData {
    pub p: u64,
    pub n: usize,
    pub d: u32,
    pub gamma: Option<u64>,
    pub method: String,
    /// Coefficients of P(T), constant term first.
    pub numerator: Vec<BigInt>,
    /// True when Z(T) = 1 / (P(T)·denominator).
    pub numerator_is_inverted: bool,
    /// (c, j): the factor (1 - p^j T)^c of the denominator.
    pub denominator_factors: Vec<(u32, u32)>,
    pub counts: Vec<(u32, BigInt)>,
}

/// Denominator of a smooth hypersurface of P^{n-1}: (1-T)(1-pT)…(1-p^{n-2}T).
pub fn hypersurface_denominator(n: usize) -> Vec<(u32, u32)> {
    (0..n.saturating_sub(1) as u32).map(|j| (1, j)).collect()
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn denominator_power_sum(p: u64, factors: &[(u32, u32)], s: u32) -> BigInt {
    factors.iter().map(|&(c, j)| BigInt::from(c) * BigInt::from(p).pow(j * s)).sum()
}

impl ZetaData {
    pub fn weight(&self) -> u32 {
        self.n.saturating_sub(2) as u32
    }

    pub fn numerator_degree(&self) -> usize {
        self.numerator.len().saturating_sub(1)
    }

    fn sigma(&self) -> i64 {
        if self.numerator_is_inverted {
            -1
        } else {
            1
        }
    }

    /// N_s predicted by the rational function.
    pub fn predicted_count(&self, s: u32) -> BigInt {
        let rat: Vec<BigRational> = self.numerator.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let ps = charpoly_to_traces(&rat, s as usize);
        let pi_s = ps[s as usize - 1].to_integer();
        denominator_power_sum(self.p, &self.denominator_factors, s) - pi_s * self.sigma()
    }

    pub fn regenerate_counts(&self, s_max: u32) -> Vec<(u32, BigInt)> {
        (1..=s_max).map(|s| (s, self.predicted_count(s))).collect()
    }

    /// Denominator polynomial coefficients.
    pub fn denominator(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::one()];
        for &(c, j) in &self.denominator_factors {
            for _ in 0..c {
                out = crate::series::poly_mul_int(&out, &[BigInt::one(), -BigInt::from(self.p).pow(j)]);
            }
        }
        out
    }

    pub fn to_json(&self, checks: Value) -> Value {
        let mut v = json!({
            "p": self.p,
            "n": self.n,
            "d": self.d,
            "method": self.method,
            "numerator": self.numerator.iter().map(big_json).collect::<Vec<_>>(),
            "numerator_is_inverted": self.numerator_is_inverted,
            "denominator_factors": self.denominator_factors.iter().map(|(c, j)| json!([c, j])).collect::<Vec<_>>(),
            "counts": self.counts.iter().map(|(s, c)| json!([s, big_json(c)])).collect::<Vec<_>>(),
            "checks": checks,
        });
        if let Some(g) = self.gamma {
            v["gamma"] = json!(g);
        }
        v
    }
}

pub fn big_json(x: &BigInt) -> Value {
    serde_json::from_str(&x.to_string()).expect("integer literal")
}

/// Involution ω ↦ p^w/ω on reciprocal roots, with optional sign of
/// the leading coefficient (a_m = sign · p^{wm/2}).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FunctionalEquation {
    pub weight: u32,
    pub sign: Option<i8>,
}

/// Fits the numerator of Z(T) from exact counts.
#[allow(clippy::too_many_arguments)]
pub fn zeta_fit(
    p: u64,
    n: usize,
    d: u32,
    counts: &[(u32, BigInt)],
    denominator_factors: &[(u32, u32)],
    num_degree: usize,
    inverted: bool,
    fe: Option<FunctionalEquation>,
) -> Result<ZetaData> {
    let mut sorted = counts.to_vec();
    sorted.sort_by_key(|c| c.0);
    let k = sorted.iter().enumerate().take_while(|(i, c)| c.0 as usize == i + 1).count();
    let sigma = if inverted { -1 } else { 1 };
    let sums: Vec<BigRational> = sorted[..k]
        .iter()
        .map(|(s, c)| BigRational::from_integer((denominator_power_sum(p, denominator_factors, *s) - c) * sigma))
        .collect();
    let known = k.min(num_degree);
    let series = traces_to_charpoly(&sums, k)?;
    let mut coeffs: Vec<BigRational> = series.coeffs()[..=known].to_vec();
    for (i, c) in series.coeffs().iter().enumerate().skip(num_degree + 1) {
        if !c.is_zero() {
            return Err(ZetaError::Inconsistent(format!(
                "counts force a nonzero T^{i} coefficient beyond degree {num_degree}"
            )));
        }
    }
    if known < num_degree {
        let fe = fe.ok_or_else(|| {
            ZetaError::Insufficient(format!("{k} counts cannot fix a degree-{num_degree} numerator"))
        })?;
        coeffs = complete_by_symmetry(p, &coeffs, num_degree, fe)?;
    }
    let mut numerator = Vec::with_capacity(coeffs.len());
    for (i, c) in coeffs.iter().enumerate() {
        if !c.is_integer() {
            return Err(ZetaError::Inconsistent(format!("non-integral numerator coefficient {c} at T^{i}")));
        }
        numerator.push(c.to_integer());
    }
    let z = ZetaData {
        p,
        n,
        d,
        gamma: None,
        method: "fit".into(),
        numerator,
        numerator_is_inverted: inverted,
        denominator_factors: denominator_factors.to_vec(),
        counts: sorted.clone(),
    };
    for (s, c) in &sorted {
        if &z.predicted_count(*s) != c {
            return Err(ZetaError::Inconsistent(format!("fitted zeta does not reproduce N_{s} = {c}")));
        }
    }
    Ok(z)
}

/// a_{m-i} = a_m p^{-wi} a_i.
fn complete_by_symmetry(
    p: u64,
    known: &[BigRational],
    m: usize,
    fe: FunctionalEquation,
) -> Result<Vec<BigRational>> {
    let w = fe.weight;
    if (w as usize * m) % 2 == 1 {
        return Err(ZetaError::InvalidArgument("odd weight with odd degree has no symmetric completion".into()));
    }
    let pw = |e: u32| BigRational::from_integer(BigInt::from(p).pow(e));
    let base = pw(w * m as u32 / 2);
    let sign = match fe.sign {
        Some(s) => s as i64,
        None => {
            // a_{m/2} = ε a_{m/2} fixes ε when the middle coefficient is known and nonzero
            if m.is_multiple_of(2) && known.len() > m / 2 && !known[m / 2].is_zero() {
                1
            } else if known.len() > m {
                (known[m].clone() / &base).to_integer().to_i64().unwrap_or(0)
            } else {
                return Err(ZetaError::Insufficient("sign of the functional equation is undetermined".into()));
            }
        }
    };
    let am = base * BigRational::from_integer(big(sign));
    let mut out = vec![BigRational::zero(); m + 1];
    for (i, c) in known.iter().enumerate() {
        out[i] = c.clone();
    }
    for i in 0..=m {
        if i < known.len() {
            continue;
        }
        let j = m - i;
        if j >= known.len() {
            return Err(ZetaError::Insufficient(format!("coefficient T^{i} not reachable by symmetry")));
        }
        out[i] = &am * &known[j] / pw(w * j as u32);
    }
    for i in 0..known.len().min(m + 1) {
        let j = m - i;
        if j < known.len() && out[j] != &am * &out[i] / pw(w * i as u32) {
            return Err(ZetaError::Inconsistent("counts contradict the functional equation".into()));
        }
    }
    Ok(out)
}

// --- rational polynomial helpers (constant term first) ---

fn rtrim(mut a: Vec<BigRational>) -> Vec<BigRational> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn rderiv(a: &[BigRational]) -> Vec<BigRational> {
    rtrim(a.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(big(i as i64))).collect())
}

fn rdivmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = rtrim(a.to_vec());
    let b = rtrim(b.to_vec());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r.last().expect("nonempty") / &b[db];
        for i in 0..=db {
            r[k + i] = &r[k + i] - &c * &b[i];
        }
        q[k] = c;
        r.pop();
        r = rtrim(r);
    }
    (rtrim(q), r)
}

fn rmonic(a: Vec<BigRational>) -> Vec<BigRational> {
    let a = rtrim(a);
    match a.last().cloned() {
        Some(l) => a.into_iter().map(|c| c / &l).collect(),
        None => a,
    }
}

fn rgcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut a = rtrim(a.to_vec());
    let mut b = rtrim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = rdivmod(&a, &b);
        a = b;
        b = r;
    }
    rmonic(a)
}

/// Yun's squarefree decomposition: (factor, multiplicity).
pub fn squarefree_decomposition(f: &[BigRational]) -> Vec<(Vec<BigRational>, usize)> {
    let f = rmonic(f.to_vec());
    if f.len() <= 1 {
        return vec![];
    }
    let fp = rderiv(&f);
    let a0 = rgcd(&f, &fp);
    let mut b = rdivmod(&f, &a0).0;
    let c = rdivmod(&fp, &a0).0;
    let mut dpoly: Vec<BigRational> = {
        let bd = rderiv(&b);
        let len = c.len().max(bd.len());
        rtrim((0..len)
            .map(|i| c.get(i).cloned().unwrap_or_else(BigRational::zero) - bd.get(i).cloned().unwrap_or_else(BigRational::zero))
            .collect())
    };
    let mut out = Vec::new();
    let mut i = 1;
    while b.len() > 1 {
        let a = rgcd(&b, &dpoly);
        let nb = rdivmod(&b, &a).0;
        let nc = if dpoly.is_empty() { vec![] } else { rdivmod(&dpoly, &a).0 };
        if a.len() > 1 {
            out.push((a, i));
        }
        let bd = rderiv(&nb);
        let len = nc.len().max(bd.len());
        dpoly = rtrim((0..len)
            .map(|k| nc.get(k).cloned().unwrap_or_else(BigRational::zero) - bd.get(k).cloned().unwrap_or_else(BigRational::zero))
            .collect());
        b = nb;
        i += 1;
    }
    out
}

/// Simultaneous root iteration (Aberth–Ehrlich) for a squarefree polynomial.
fn aberth(coeffs: &[f64]) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return vec![];
    }
    let lead = coeffs[deg];
    let c: Vec<f64> = coeffs.iter().map(|x| x / lead).collect();
    let radius = 1.0 + c[..deg].iter().map(|x| x.abs()).fold(0.0, f64::max);
    let r0 = radius.min(2.0);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(r0 * 0.9, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64 + 0.3))
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut pv = Complex64::new(c[deg], 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for k in (0..deg).rev() {
            dv = dv * x + pv;
            pv = pv * x + c[k];
        }
        (pv, dv)
    };
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (pv, dv) = eval(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let s: Complex64 = (0..deg).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Reciprocal roots of P(T) = Σ a_k T^k with multiplicity.
pub fn reciprocal_roots(numerator: &[BigInt], scale: f64) -> Vec<Complex64> {
    // roots of x^m P(1/x)
    let rev: Vec<BigRational> = numerator.iter().rev().map(|c| BigRational::from_integer(c.clone())).collect();
    let mut out = Vec::new();
    for (factor, mult) in squarefree_decomposition(&rev) {
        let deg = factor.len() - 1;
        // substitute x = scale·y to put roots near the unit circle
        let f: Vec<f64> = factor
            .iter()
            .enumerate()
            .map(|(i, c)| c.to_f64().unwrap_or(f64::NAN) * scale.powi(i as i32 - deg as i32))
            .collect();
        for y in aberth(&f) {
            for _ in 0..mult {
                out.push(y * scale);
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub weight: u32,
    pub reciprocal_roots: Vec<(f64, f64)>,
    pub max_modulus_error: f64,
    pub weil_ok: bool,
    pub functional_equation_ok: bool,
    pub newton_slopes: Vec<String>,
    pub newton_symmetric: bool,
    pub newton_leading_ok: bool,
}

impl VerifyReport {
    pub fn all_ok(&self) -> bool {
        self.weil_ok && self.functional_equation_ok && self.newton_symmetric && self.newton_leading_ok
    }
}

pub const ROOT_TOLERANCE: f64 = 1e-6;

pub fn numerator_newton_polygon(p: u64, numerator: &[BigInt]) -> Result<NewtonPolygon> {
    let pts: Vec<(usize, Ratio<i64>)> = numerator
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, Ratio::from_integer(ord_p_bigint(c, p).unwrap_or(0) as i64)))
        .collect();
    newton_polygon(&pts)
}

pub fn verify_report(z: &ZetaData) -> Result<VerifyReport> {
    if z.numerator_degree() < 1 {
        return Err(ZetaError::InvalidArgument("verification needs a numerator of degree at least 1".into()));
    }
    let w = z.weight();
    let target = (z.p as f64).powf(w as f64 / 2.0);
    let roots = reciprocal_roots(&z.numerator, target);
    let max_err = roots.iter().map(|r| (r.norm() - target).abs() / target).fold(0.0, f64::max);
    let weil_ok = roots.len() == z.numerator_degree() && max_err < ROOT_TOLERANCE;
    let pw = (z.p as f64).powi(w as i32);
    let mut unused: Vec<Complex64> = roots.clone();
    let mut fe_ok = true;
    for r in &roots {
        let img = Complex64::new(pw, 0.0) / r;
        match unused
            .iter()
            .enumerate()
            .map(|(i, u)| (i, (u - img).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"))
        {
            Some((i, dist)) if dist <= ROOT_TOLERANCE * img.norm().max(1.0) => {
                unused.swap_remove(i);
            }
            _ => {
                fe_ok = false;
                break;
            }
        }
    }
    let np = numerator_newton_polygon(z.p, &z.numerator)?;
    let slopes = np.slope_multiset();
    let wr = Ratio::from_integer(w as i64);
    let symmetric = slopes.iter().zip(slopes.iter().rev()).all(|(a, b)| *a + *b == wr);
    let lead = z.numerator.last().expect("nonempty");
    let total: Ratio<i64> = np.segments.iter().map(|(s, l)| s * Ratio::from_integer(*l as i64)).sum();
    let leading_ok = Ratio::from_integer(ord_p_bigint(lead, z.p).unwrap_or(0) as i64) == total;
    Ok(VerifyReport {
        weight: w,
        reciprocal_roots: roots.iter().map(|r| (r.re, r.im)).collect(),
        max_modulus_error: max_err,
        weil_ok,
        functional_equation_ok: fe_ok,
        newton_slopes: slopes.iter().map(|s| s.to_string()).collect(),
        newton_symmetric: symmetric,
        newton_leading_ok: leading_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(v: &[i64]) -> Vec<(u32, BigInt)> {
        v.iter().enumerate().map(|(i, &c)| (i as u32 + 1, big(c))).collect()
    }

    #[test]
    fn fermat_cubic_fit() {
        let z = zeta_fit(5, 3, 3, &counts(&[6, 36]), &[(1, 0), (1, 1)], 2, false, None).unwrap();
        assert_eq!(z.numerator, vec![big(1), big(0), big(5)]);
        assert_eq!(z.predicted_count(3), big(126));
        let r = verify_report(&z).unwrap();
        assert!(r.all_ok(), "{r:?}");
        for (x, y) in &r.reciprocal_roots {
            assert!(x.abs() < 1e-9 && (y.abs() - 5f64.sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn affine_space_and_point() {
        let z = zeta_fit(3, 2, 1, &counts(&[9, 81, 729]), &[], 1, true, None).unwrap();
        assert_eq!(z.numerator, vec![big(1), big(-9)]);
        let z = zeta_fit(3, 1, 1, &counts(&[1, 1, 1]), &[(1, 0)], 0, false, None).unwrap();
        assert_eq!(z.numerator, vec![big(1)]);
    }

    #[test]
    fn inconsistent_counts() {
        assert!(zeta_fit(5, 3, 3, &counts(&[6, 36, 127]), &[(1, 0), (1, 1)], 2, false, None).is_err());
        assert!(zeta_fit(5, 3, 3, &counts(&[6]), &[(1, 0), (1, 1)], 2, false, None).is_err());
    }

    #[test]
    fn symmetric_completion() {
        let fe = FunctionalEquation { weight: 1, sign: Some(1) };
        let z = zeta_fit(5, 3, 3, &counts(&[6]), &[(1, 0), (1, 1)], 2, false, Some(fe)).unwrap();
        assert_eq!(z.numerator, vec![big(1), big(0), big(5)]);
    }

    #[test]
    fn squarefree_split() {
        // (x-13)^3 (x+13)
        let f: Vec<BigRational> = crate::series::poly_mul_int(
            &crate::series::poly_mul_int(&[big(-13), big(1)], &[big(-13), big(1)]),
            &crate::series::poly_mul_int(&[big(-13), big(1)], &[big(13), big(1)]),
        )
        .into_iter()
        .map(BigRational::from_integer)
        .collect();
        let dec = squarefree_decomposition(&f);
        let mults: Vec<usize> = dec.iter().map(|d| d.1).collect();
        assert_eq!(mults, vec![1, 3]);
    }
}
