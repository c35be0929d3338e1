//! The quartic Dwork family x1⁴+x2⁴+x3⁴+x4⁴ - 4Γ x1x2x3x4 over F_p, p ≡ 1 mod 4.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Result, ZetaError};
use crate::oracle::{count_projective, ff_build};
use crate::padic::{check_odd_prime, legendre_i64};
use crate::poly::Polynomial;
use crate::series::{poly_mul_int, TruncSeries};
use crate::zeta::{hypersurface_denominator, ZetaData};

/// Closed-form reciprocal roots of the degree-21 numerator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockFactors {
    pub p: u64,
    pub gamma: u64,
    /// Root of the 12-dimensional block, ±p.
    pub u5_root: i64,
    pub u5_multiplicity: usize,
    /// One pair per 2×2 block, each root ±p.
    pub pair_roots: Vec<(i64, i64)>,
    pub root19: i64,
    /// a in the remaining factor 1 - aT + p²T².
    pub residual: Option<i64>,
}

impl BlockFactors {
    /// The 19 roots given in closed form.
    pub fn known_roots(&self) -> Vec<i64> {
        let mut r = vec![self.u5_root; self.u5_multiplicity];
        for &(a, b) in &self.pair_roots {
            r.push(a);
            r.push(b);
        }
        r.push(self.root19);
        r
    }
}

pub fn dwork_family(p: u64, gamma: u64) -> Result<Polynomial> {
    let mut terms: Vec<(Vec<u32>, i64)> = (0..4)
        .map(|i| {
            let mut e = vec![0u32; 4];
            e[i] = 4;
            (e, 1)
        })
        .collect();
    terms.push((vec![1, 1, 1, 1], -4 * (gamma % p) as i64));
    Polynomial::new(p, 4, terms)
}

fn check_parameters(p: u64, gamma: u64) -> Result<()> {
    check_odd_prime(p)?;
    if p % 4 != 1 {
        return Err(ZetaError::Unsupported(format!(
            "p = {p} is 3 mod 4; the block structure used here needs p = 1 mod 4"
        )));
    }
    let g = gamma % p;
    if g == 0 {
        return Err(ZetaError::Unsupported("Gamma = 0 is the diagonal quartic; use the diagonal route".into()));
    }
    let g4 = (g * g % p) * (g * g % p) % p;
    if g4 == 1 {
        return Err(ZetaError::Singular(format!(
            "Gamma^4 = 1 mod {p}: the point [1:Gamma:Gamma:Gamma] is singular"
        )));
    }
    Ok(())
}

pub fn block_factors(p: u64, gamma: u64) -> Result<BlockFactors> {
    check_parameters(p, gamma)?;
    let g = (gamma % p) as i64;
    let pi = p as i64;
    let g2 = g * g % pi;
    let g4 = g2 * g2 % pi;
    let l4 = legendre_i64(1 - g4, p)? as i64;
    let lm = legendre_i64(1 - g2, p)? as i64;
    let lp = legendre_i64(1 + g2, p)? as i64;
    let sign = if ((p - 1) / 4).is_multiple_of(2) { 1 } else { -1 };
    Ok(BlockFactors {
        p,
        gamma: gamma % p,
        u5_root: sign * l4 * pi,
        u5_multiplicity: 12,
        pair_roots: vec![(lm * pi, lp * pi); 3],
        root19: l4 * pi,
        residual: None,
    })
}

/// a = (sum of all 21 roots, read off N₁) - (sum of the 19 known roots).
pub fn residual_quadratic(known: &BlockFactors, n1: u64) -> Result<i64> {
    let p = known.p as i128;
    let total = n1 as i128 - (1 + p + p * p);
    let a = total - known.known_roots().iter().map(|&r| r as i128).sum::<i128>();
    if a.abs() > 2 * p {
        return Err(ZetaError::Inconsistent(format!(
            "residual a = {a} violates |a| <= 2p = {}",
            2 * p
        )));
    }
    Ok(a as i64)
}

/// Full zeta function; `n1` is counted by the oracle when not supplied.
pub fn assemble_p(p: u64, gamma: u64, n1: Option<u64>) -> Result<ZetaData> {
    let mut bf = block_factors(p, gamma)?;
    let n1 = match n1 {
        Some(n) => n,
        None => count_projective(&dwork_family(p, gamma)?, &ff_build(p, 1)?)?,
    };
    let a = residual_quadratic(&bf, n1)?;
    bf.residual = Some(a);
    let mut num = vec![BigInt::one()];
    for r in bf.known_roots() {
        num = poly_mul_int(&num, &[BigInt::one(), BigInt::from(-r)]);
    }
    num = poly_mul_int(&num, &[BigInt::one(), BigInt::from(-a), BigInt::from(p * p)]);
    Ok(ZetaData {
        p,
        n: 4,
        d: 4,
        gamma: Some(gamma % p),
        method: "dwork4".into(),
        numerator: num,
        numerator_is_inverted: true,
        denominator_factors: hypersurface_denominator(4),
        counts: vec![(1, BigInt::from(n1))],
    })
}

// --- Picard–Fuchs consistency ---

type Series = TruncSeries<BigRational>;
type SMatrix = Vec<Vec<Series>>;

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn mono(c: BigRational, k: usize, m: usize) -> Series {
    let mut v = vec![BigRational::zero(); m + 1];
    if k <= m {
        v[k] = c;
    }
    TruncSeries::new(v).expect("nonempty")
}

fn poly(cs: &[(usize, BigRational)], m: usize) -> Series {
    let mut v = vec![BigRational::zero(); m + 1];
    for (k, c) in cs {
        if *k <= m {
            v[*k] += c;
        }
    }
    TruncSeries::new(v).expect("nonempty")
}

fn one_minus_l4(m: usize) -> Series {
    poly(&[(0, q(1, 1)), (4, q(-1, 1))], m)
}

fn mat_mul(a: &SMatrix, b: &SMatrix) -> SMatrix {
    let n = a.len();
    let m = a[0][0].degree().min(b[0][0].degree());
    (0..n)
        .map(|i| {
            (0..b[0].len())
                .map(|j| (0..b.len()).fold(mono(BigRational::zero(), 0, m), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

/// First degree < `upto` where (1-λ⁴)C' and C·B̃ differ.
fn ode_residual(c: &SMatrix, bt: &SMatrix, upto: usize) -> Option<usize> {
    let lhs: SMatrix = c.iter().map(|r| r.iter().map(|x| one_minus_l4(upto).mul(&x.derivative().truncate(upto))).collect()).collect();
    let rhs = mat_mul(&c.iter().map(|r| r.iter().map(|x| x.truncate(upto)).collect()).collect(), bt);
    let mut first: Option<usize> = None;
    for (lr, rr) in lhs.iter().zip(&rhs) {
        for (l, r) in lr.iter().zip(rr) {
            if let Some(k) = l.truncate(upto - 1).first_difference(&r.truncate(upto - 1)) {
                first = Some(first.map_or(k, |f| f.min(k)));
            }
        }
    }
    first
}

#[derive(Clone, Debug, Serialize)]
pub struct PicardFuchsReport {
    pub degree: usize,
    /// First failing degree of each check, `None` when it holds throughout.
    pub scalar_ode: Option<usize>,
    pub two_by_two_ode: Option<usize>,
    pub two_by_two_initial: bool,
    pub three_by_three_ode: Option<usize>,
    /// det C₁ against (1-λ⁴)^(-3/2), the value forced by C₁(0) = I.
    pub det_normalized: Option<usize>,
    /// det C₁ against the printed -(1/64)(1-λ⁴)^(-3/2).
    pub det_printed: Option<usize>,
    pub det_constant_term: String,
}

impl PicardFuchsReport {
    pub fn odes_ok(&self) -> bool {
        self.scalar_ode.is_none() && self.two_by_two_ode.is_none() && self.two_by_two_initial && self.three_by_three_ode.is_none()
    }

    pub fn all_ok(&self) -> bool {
        self.odes_ok() && self.det_printed.is_none()
    }
}

/// Power-series solution of (1-λ⁴)C' = C·B̃ with C(0) = I for the 3×3 block.
pub fn solve_three_by_three(m: usize) -> SMatrix {
    // B̃_j: coefficient matrices of (1-λ⁴)B
    let mut bj = vec![[[BigRational::zero(), BigRational::zero(), BigRational::zero()], [BigRational::zero(), BigRational::zero(), BigRational::zero()], [BigRational::zero(), BigRational::zero(), BigRational::zero()]]; 5];
    bj[0][1][0] = q(-4, 1);
    bj[0][2][1] = q(-4, 1);
    bj[4][1][0] = q(4, 1);
    bj[4][2][1] = q(4, 1);
    bj[1][0][2] = q(1, 16);
    bj[2][1][2] = q(-7, 4);
    bj[3][2][2] = q(6, 1);
    let zero3 = || vec![vec![BigRational::zero(); 3]; 3];
    let mut cs: Vec<Vec<Vec<BigRational>>> = vec![zero3()];
    for i in 0..3 {
        cs[0][i][i] = BigRational::one();
    }
    for k in 0..m {
        let mut rhs = zero3();
        for (j, b) in bj.iter().enumerate() {
            if j > k {
                break;
            }
            let ck = &cs[k - j];
            for r in 0..3 {
                for c in 0..3 {
                    for t in 0..3 {
                        if !b[t][c].is_zero() {
                            rhs[r][c] += &ck[r][t] * &b[t][c];
                        }
                    }
                }
            }
        }
        if k >= 3 {
            let f = BigRational::from_integer(BigInt::from(k as i64 - 3));
            for r in 0..3 {
                for c in 0..3 {
                    rhs[r][c] += &cs[k - 3][r][c] * &f;
                }
            }
        }
        let inv = BigRational::new(BigInt::one(), BigInt::from(k + 1));
        cs.push(rhs.into_iter().map(|row| row.into_iter().map(|x| x * &inv).collect()).collect());
    }
    (0..3)
        .map(|r| (0..3).map(|c| TruncSeries::new(cs.iter().map(|ck| ck[r][c].clone()).collect()).expect("nonempty")).collect())
        .collect()
}

pub fn picard_fuchs_check(m: usize) -> Result<PicardFuchsReport> {
    if m < 4 {
        return Err(ZetaError::InvalidArgument("Picard-Fuchs checks need degree at least 4".into()));
    }
    let base = one_minus_l4(m);
    // scalar: (1-λ⁴)c' = 2λ³c
    let c = base.binomial_power(&q(-1, 2))?;
    let scalar_ode = one_minus_l4(m - 1)
        .mul(&c.derivative())
        .first_difference(&mono(q(2, 1), 3, m - 1).mul(&c.truncate(m - 1)));
    // 2×2 closed form
    let alpha = poly(&[(0, q(1, 1)), (2, q(-1, 1))], m).binomial_power(&q(-1, 2))?;
    let beta = poly(&[(0, q(1, 1)), (2, q(1, 1))], m).binomial_power(&q(-1, 2))?;
    let half = q(1, 2);
    let diag = alpha.add(&beta).scale(&half);
    let off = alpha.sub(&beta).scale(&half);
    let c2: SMatrix = vec![vec![diag.clone(), off.clone()], vec![off, diag]];
    let two_by_two_initial = c2[0][0].coeffs()[0] == BigRational::one()
        && c2[1][1].coeffs()[0] == BigRational::one()
        && c2[0][1].coeffs()[0].is_zero()
        && c2[1][0].coeffs()[0].is_zero();
    let b2: SMatrix = vec![
        vec![mono(q(1, 1), 3, m), mono(q(1, 1), 1, m)],
        vec![mono(q(1, 1), 1, m), mono(q(1, 1), 3, m)],
    ];
    let two_by_two_ode = ode_residual(&c2, &b2.iter().map(|r| r.iter().map(|x| x.truncate(m - 1)).collect()).collect(), m - 1 + 1);
    // 3×3 solved system, verified against the ODE independently of the recurrence
    let c3 = solve_three_by_three(m);
    let z = || mono(BigRational::zero(), 0, m);
    let b3: SMatrix = vec![
        vec![z(), z(), mono(q(1, 16), 1, m)],
        vec![base.scale(&q(-4, 1)), z(), mono(q(-7, 4), 2, m)],
        vec![z(), base.scale(&q(-4, 1)), mono(q(6, 1), 3, m)],
    ];
    let three_by_three_ode = ode_residual(&c3, &b3.iter().map(|r| r.iter().map(|x| x.truncate(m - 1)).collect()).collect(), m);
    let det = c3[0][0].mul(&c3[1][1].mul(&c3[2][2]).sub(&c3[1][2].mul(&c3[2][1])))
        .sub(&c3[0][1].mul(&c3[1][0].mul(&c3[2][2]).sub(&c3[1][2].mul(&c3[2][0]))))
        .add(&c3[0][2].mul(&c3[1][0].mul(&c3[2][1]).sub(&c3[1][1].mul(&c3[2][0]))));
    let target = base.binomial_power(&q(-3, 2))?;
    let det_normalized = det.first_difference(&target);
    let det_printed = det.first_difference(&target.scale(&q(-1, 64)));
    Ok(PicardFuchsReport {
        degree: m,
        scalar_ode,
        two_by_two_ode,
        two_by_two_initial,
        three_by_three_ode,
        det_normalized,
        det_printed,
        det_constant_term: det.coeffs()[0].to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p13_gamma2_blocks() {
        let bf = block_factors(13, 2).unwrap();
        assert_eq!(bf.u5_root, 13);
        assert_eq!(bf.pair_roots, vec![(13, -13); 3]);
        assert_eq!(bf.root19, -13);
    }

    #[test]
    fn guards() {
        for g in 1..5u64 {
            assert!(matches!(block_factors(5, g), Err(ZetaError::Singular(_))));
        }
        assert!(matches!(block_factors(13, 5), Err(ZetaError::Singular(_))));
        assert!(matches!(block_factors(13, 0), Err(ZetaError::Unsupported(_))));
        assert!(matches!(block_factors(7, 2), Err(ZetaError::Unsupported(_))));
    }

    #[test]
    fn residual_bounds() {
        let bf = block_factors(13, 2).unwrap();
        assert_eq!(residual_quadratic(&bf, 320).unwrap(), -6);
        assert!(residual_quadratic(&bf, 1000).is_err());
    }

    #[test]
    fn small_picard_fuchs() {
        let r = picard_fuchs_check(12).unwrap();
        assert!(r.odes_ok(), "{r:?}");
        assert_eq!(r.det_normalized, None);
    }
}
