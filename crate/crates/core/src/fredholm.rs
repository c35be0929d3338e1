//! The direct method: truncated matrix of 𝔘 = Ψ_p ∘ 𝔠, subset traces and
//! point counts, plus the Fredholm determinant det(1 - 𝔘T).

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::dwork::{c_valuation_floor, splitting_coeffs, SplittingCoeffs};
use crate::error::{Result, ZetaError};
use crate::padic::{self, PadicInt, PadicRing, PiElem};
use crate::poly::Polynomial;
use crate::series::{traces_to_charpoly, TruncSeries};
use crate::zeta::{hypersurface_denominator, zeta_fit, FunctionalEquation, ZetaData};

/// Exponent tuple (v₀, v₁, …, v_n) with d·v₀ = Σ v_i.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialIndex(pub Vec<u32>);

impl MonomialIndex {
    pub fn v0(&self) -> u32 {
        self.0[0]
    }
}

fn compositions(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

/// All v with v₀ ≤ M and d·v₀ = v₁ + … + v_n, in lexicographic order.
pub fn monomial_basis(n: usize, d: u32, m: u32) -> Vec<MonomialIndex> {
    let mut out = Vec::new();
    for v0 in 0..=m {
        let mut raw = Vec::new();
        compositions(d * v0, n, &mut vec![v0], &mut raw);
        out.extend(raw.into_iter().map(MonomialIndex));
    }
    out.sort();
    out
}

/// Teichmüller lifts of the coefficients of W = x₀P, keyed by exponent (1, e).
pub fn teichmuller_lifts(f: &Polynomial, ring: &Arc<PadicRing>) -> Vec<(MonomialIndex, PadicInt)> {
    f.terms()
        .map(|(e, c)| {
            let mut v = vec![1u32];
            v.extend_from_slice(e);
            (MonomialIndex(v), padic::teichmuller(ring, c))
        })
        .collect()
}

/// Coefficient of X^w in ∏_{v∈Δ} 𝔍(W_v X^v), by direct enumeration of the
/// exponent combinations Σ k_v·v = w.
pub fn big_c_entry(lifts: &[(MonomialIndex, PadicInt)], w: &[u32], sc: &SplittingCoeffs) -> Result<PiElem> {
    let ring = sc.ring();
    if w[0] as usize > sc.n_max() {
        return Err(ZetaError::Insufficient(format!(
            "multidegree {} needs splitting coefficients through {}, have {}",
            w[0],
            w[0],
            sc.n_max()
        )));
    }
    fn rec(
        lifts: &[(MonomialIndex, PadicInt)],
        j: usize,
        rem: &mut Vec<u32>,
        acc: &PiElem,
        sc: &SplittingCoeffs,
        out: &mut PiElem,
    ) {
        if rem.iter().all(|&x| x == 0) {
            *out = &*out + acc;
            return;
        }
        if j == lifts.len() {
            return;
        }
        let (v, wv) = &lifts[j];
        let kmax = v.0.iter().zip(rem.iter()).filter(|(a, _)| **a > 0).map(|(a, r)| r / a).min().unwrap_or(0);
        let mut wpow = padic::one(acc.ring());
        for k in 0..=kmax {
            if k > 0 {
                for (r, a) in rem.iter_mut().zip(&v.0) {
                    *r -= a;
                }
                wpow = &wpow * wv;
            }
            let term = &sc.lambda(k as usize).expect("length checked").scale(&wpow) * acc;
            if !term.is_zero() {
                rec(lifts, j + 1, rem, &term, sc, out);
            }
        }
        for (r, a) in rem.iter_mut().zip(&v.0) {
            *r += a * kmax;
        }
    }
    let mut out = PiElem::zero(ring);
    rec(lifts, 0, &mut w.to_vec(), &PiElem::one(ring), sc, &mut out);
    Ok(out)
}

/// All nonzero coefficients of 𝔠 with w₀ ≤ max_w0 and w_i ≤ bounds[i].
pub fn big_c_series(
    lifts: &[(MonomialIndex, PadicInt)],
    sc: &SplittingCoeffs,
    max_w0: u32,
    bounds: &[u32],
) -> Result<HashMap<Vec<u32>, PiElem>> {
    let ring = sc.ring();
    if max_w0 as usize > sc.n_max() {
        return Err(ZetaError::Insufficient(format!(
            "need splitting coefficients through {}, have {}",
            max_w0,
            sc.n_max()
        )));
    }
    let mut map: HashMap<Vec<u32>, PiElem> = HashMap::new();
    map.insert(vec![0; bounds.len()], PiElem::one(ring));
    for (v, wv) in lifts {
        let mut factors = Vec::new();
        let mut wpow = padic::one(ring);
        for k in 0..=max_w0 {
            factors.push(sc.lambda(k as usize).expect("length checked").scale(&wpow));
            wpow = &wpow * wv;
        }
        let entries: Vec<(Vec<u32>, PiElem)> = map.into_iter().collect();
        let partial: Vec<Vec<(Vec<u32>, PiElem)>> = entries
            .par_iter()
            .map(|(w, c)| {
                let mut out = Vec::new();
                let mut cur = w.clone();
                for f in &factors {
                    if cur.iter().zip(bounds).any(|(a, b)| a > b) {
                        break;
                    }
                    let t = c * f;
                    if !t.is_zero() {
                        out.push((cur.clone(), t));
                    }
                    for (x, a) in cur.iter_mut().zip(&v.0) {
                        *x += a;
                    }
                }
                out
            })
            .collect();
        let mut next: HashMap<Vec<u32>, PiElem> = HashMap::new();
        for (w, t) in partial.into_iter().flatten() {
            match next.get_mut(&w) {
                Some(e) => *e = &*e + &t,
                None => {
                    next.insert(w, t);
                }
            }
        }
        next.retain(|_, c| !c.is_zero());
        map = next;
    }
    Ok(map)
}

/// g(m) = 2m + max(0, m-1)/(p-1), the defect in the valuation floor of λ_k.
fn defect(p: u64, m: u64) -> Ratio<i64> {
    let mut g = Ratio::from_integer(2 * m as i64);
    if m > 0 {
        g += Ratio::new((m - 1) as i64, (p - 1) as i64);
    }
    g
}

/// Lower bound for the valuation of an entry at w with w₀ = total degree.
pub fn entry_valuation_floor(p: u64, w0: u64) -> Ratio<i64> {
    let sharp = Ratio::new(w0 as i64, (p - 1) as i64) - defect(p, w0 / (p * p));
    let lemma = Ratio::new(((p - 1) * w0) as i64, (p * p) as i64);
    sharp.max(lemma)
}

/// Lower bound for the valuation of a closed path whose u₀ values sum to U.
pub fn cycle_valuation_floor(p: u64, u_total: u64) -> Ratio<i64> {
    let w = (p - 1) * u_total;
    Ratio::from_integer(u_total as i64) - defect(p, w / (p * p))
}

/// Least M such that every closed path through an index with u₀ > M has
/// valuation at least N.
pub fn truncation_degree(p: u64, prec: u32) -> u32 {
    let gamma = Ratio::new(((p - 1) * (p - 1)) as i64, (p * p) as i64);
    let n = Ratio::from_integer(prec as i64);
    let mut m = 1u32;
    loop {
        // for U beyond `stop`, the linear floor γU already reaches N
        let stop = (n / gamma).ceil().to_integer() as u64 + 1;
        let ok = (m as u64 + 1..=stop.max(m as u64 + 1)).all(|u| cycle_valuation_floor(p, u) >= n);
        if ok {
            return m;
        }
        m += 1;
    }
}

/// Sparse square matrix over PiElem indexed by a monomial basis.
#[derive(Clone, Debug)]
pub struct UMatrix {
    ring: Arc<PadicRing>,
    n: usize,
    d: u32,
    m: u32,
    basis: Vec<MonomialIndex>,
    index: HashMap<MonomialIndex, usize>,
    /// columns[v] = sorted (row, value), zero entries omitted
    columns: Vec<Vec<(usize, PiElem)>>,
}

impl UMatrix {
    pub fn from_columns(
        ring: &Arc<PadicRing>,
        n: usize,
        d: u32,
        m: u32,
        basis: Vec<MonomialIndex>,
        columns: Vec<Vec<(usize, PiElem)>>,
    ) -> Self {
        let index = basis.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        UMatrix { ring: ring.clone(), n, d, m, basis, index, columns }
    }

    pub fn ring(&self) -> &Arc<PadicRing> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn truncation(&self) -> u32 {
        self.m
    }

    pub fn basis(&self) -> &[MonomialIndex] {
        &self.basis
    }

    pub fn position(&self, v: &MonomialIndex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn column(&self, j: usize) -> &[(usize, PiElem)] {
        &self.columns[j]
    }

    pub fn entry_at(&self, i: usize, j: usize) -> PiElem {
        match self.columns[j].binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.columns[j][k].1.clone(),
            Err(_) => PiElem::zero(&self.ring),
        }
    }

    pub fn entry(&self, u: &MonomialIndex, v: &MonomialIndex) -> Option<PiElem> {
        Some(self.entry_at(self.position(u)?, self.position(v)?))
    }

    /// Dense copy, row-major.
    pub fn to_dense(&self) -> Vec<Vec<PiElem>> {
        let n = self.dim();
        let mut out = vec![vec![PiElem::zero(&self.ring); n]; n];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                out[*i][j] = x.clone();
            }
        }
        out
    }

    fn transpose_rows(&self) -> Vec<Vec<(usize, PiElem)>> {
        let mut rows = vec![Vec::new(); self.dim()];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                rows[*i].push((j, x.clone()));
            }
        }
        rows
    }

    /// self · other.
    pub fn mul(&self, other: &UMatrix) -> UMatrix {
        let cols: Vec<Vec<(usize, PiElem)>> = other
            .columns
            .par_iter()
            .map(|col| {
                let mut acc: HashMap<usize, PiElem> = HashMap::new();
                for (k, b) in col {
                    for (i, a) in &self.columns[*k] {
                        let t = a * b;
                        match acc.get_mut(i) {
                            Some(e) => *e = &*e + &t,
                            None => {
                                acc.insert(*i, t);
                            }
                        }
                    }
                }
                let mut v: Vec<(usize, PiElem)> = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
                v.sort_by_key(|e| e.0);
                v
            })
            .collect();
        UMatrix {
            ring: self.ring.clone(),
            n: self.n,
            d: self.d,
            m: self.m,
            basis: self.basis.clone(),
            index: self.index.clone(),
            columns: cols,
        }
    }

    /// Diagonals of U^s for s = 1..=s_max: result[s-1][a] = (U^s)[a,a].
    pub fn power_diagonals(&self, s_max: usize) -> Vec<Vec<PiElem>> {
        let half = s_max.div_ceil(2).max(1);
        let mut powers = vec![self.clone()];
        while powers.len() < half {
            let next = powers.last().expect("nonempty").mul(self);
            powers.push(next);
        }
        let rows: Vec<Vec<Vec<(usize, PiElem)>>> = powers.iter().map(|m| m.transpose_rows()).collect();
        (1..=s_max)
            .map(|s| {
                let i = s.div_ceil(2);
                let j = s - i;
                if j == 0 {
                    return (0..self.dim()).map(|a| self.entry_at(a, a)).collect();
                }
                let ri = &rows[i - 1];
                let cj = &powers[j - 1].columns;
                (0..self.dim())
                    .into_par_iter()
                    .map(|a| {
                        let mut acc = PiElem::zero(&self.ring);
                        let (r, c) = (&ri[a], &cj[a]);
                        let (mut x, mut y) = (0, 0);
                        while x < r.len() && y < c.len() {
                            match r[x].0.cmp(&c[y].0) {
                                std::cmp::Ordering::Less => x += 1,
                                std::cmp::Ordering::Greater => y += 1,
                                std::cmp::Ordering::Equal => {
                                    acc = &acc + &(&r[x].1 * &c[y].1);
                                    x += 1;
                                    y += 1;
                                }
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    /// Nonzero entries (u, v) with v_i > 0 but u_i = 0 for some i; these would
    /// break the stability of the subspaces L_A.
    pub fn stability_violations(&self) -> usize {
        let mut bad = 0;
        for (j, col) in self.columns.iter().enumerate() {
            let v = &self.basis[j].0;
            for (i, _) in col {
                let u = &self.basis[*i].0;
                if (1..=self.n).any(|k| v[k] > 0 && u[k] == 0) {
                    bad += 1;
                }
            }
        }
        bad
    }

    /// Entries whose valuation falls below the floor used to pick the truncation.
    pub fn valuation_audit(&self) -> Vec<(MonomialIndex, MonomialIndex)> {
        let p = self.ring.p();
        let mut bad = Vec::new();
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                let w0 = p * self.basis[*i].v0() as u64 - self.basis[j].v0() as u64;
                let val = x.valuation();
                if !val.at_least && val.value < entry_valuation_floor(p, w0) {
                    bad.push((self.basis[*i].clone(), self.basis[j].clone()));
                }
            }
        }
        bad
    }
}

/// Truncated matrix of 𝔘 = Ψ_p∘𝔠 on the basis with v₀ ≤ M, for W = x₀P.
pub fn u_matrix(f: &Polynomial, d: u32, prec: u32, m: Option<u32>) -> Result<UMatrix> {
    let p = f.p();
    let ring = PadicRing::new(p, prec)?;
    if let Some(fd) = f.homogeneous_degree() {
        if fd != d {
            return Err(ZetaError::InvalidArgument(format!("polynomial has degree {fd}, expected {d}")));
        }
    } else if !f.is_zero() {
        return Err(ZetaError::InvalidArgument("polynomial must be homogeneous".into()));
    }
    let need = truncation_degree(p, prec);
    let m = match m {
        Some(m) if m < need => {
            return Err(ZetaError::Precision(format!(
                "truncation M = {m} cannot certify precision {prec}; need M >= {need}"
            )))
        }
        Some(m) => m,
        None => need,
    };
    u_matrix_unchecked(f, d, &ring, m)
}

/// As [`u_matrix`] with an arbitrary truncation M, for identity tests on small blocks.
pub fn u_matrix_unchecked(f: &Polynomial, d: u32, ring: &Arc<PadicRing>, m: u32) -> Result<UMatrix> {
    let p = ring.p();
    if f.p() != p {
        return Err(ZetaError::Contract("polynomial and ring use different primes".into()));
    }
    let n = f.nvars();
    let basis = monomial_basis(n, d, m);
    let max_w0 = p as u32 * m;
    let sc = splitting_coeffs(ring, max_w0.max(1) as usize)?;
    let lifts = teichmuller_lifts(f, ring);
    let mut bounds = vec![max_w0];
    bounds.extend(std::iter::repeat_n(p as u32 * d * m, n));
    let cmap = big_c_series(&lifts, &sc, max_w0, &bounds)?;
    let columns: Vec<Vec<(usize, PiElem)>> = basis
        .par_iter()
        .map(|v| {
            let mut col = Vec::new();
            for (i, u) in basis.iter().enumerate() {
                let ok = u.0.iter().zip(&v.0).all(|(a, b)| p as u32 * a >= *b);
                if !ok {
                    continue;
                }
                let w: Vec<u32> = u.0.iter().zip(&v.0).map(|(a, b)| p as u32 * a - b).collect();
                if let Some(x) = cmap.get(&w) {
                    col.push((i, x.clone()));
                }
            }
            col
        })
        .collect();
    Ok(UMatrix::from_columns(ring, n, d, m, basis, columns))
}

/// Traces of (U restricted to L_A)^s, s = 1..S, where L_A = {v : v_i > 0 ∀ i ∈ A}
/// and A holds 1-based variable indices.
pub fn subset_traces(u: &UMatrix, a: &[usize], s_max: usize) -> Vec<PiElem> {
    let keep: Vec<usize> = (0..u.dim()).filter(|&k| a.iter().all(|&i| u.basis()[k].0[i] > 0)).collect();
    let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(x, &k)| (k, x)).collect();
    let cols = keep
        .iter()
        .map(|&j| u.column(j).iter().filter_map(|(i, x)| pos.get(i).map(|&r| (r, x.clone()))).collect())
        .collect();
    let basis = keep.iter().map(|&k| u.basis()[k].clone()).collect();
    let sub = UMatrix::from_columns(u.ring(), u.nvars(), u.degree(), u.truncation(), basis, cols);
    sum_diagonals(&sub.power_diagonals(s_max), &sub.ring, |_| true)
}

fn sum_diagonals(diags: &[Vec<PiElem>], ring: &Arc<PadicRing>, keep: impl Fn(usize) -> bool) -> Vec<PiElem> {
    diags
        .iter()
        .map(|d| d.iter().enumerate().filter(|(k, _)| keep(*k)).fold(PiElem::zero(ring), |acc, (_, x)| &acc + x))
        .collect()
}

/// Traces for every subset A of {1..n}, indexed by bitmask (bit i-1 ↔ x_i).
#[derive(Clone, Debug)]
pub struct SubsetTraces {
    pub n: usize,
    pub ring: Arc<PadicRing>,
    pub traces: Vec<Vec<PiElem>>,
}

pub fn all_subset_traces(u: &UMatrix, s_max: usize) -> SubsetTraces {
    let diags = u.power_diagonals(s_max);
    let n = u.nvars();
    let traces = (0u32..(1 << n))
        .map(|mask| {
            sum_diagonals(&diags, u.ring(), |k| {
                let v = &u.basis()[k].0;
                (0..n).all(|i| mask >> i & 1 == 0 || v[i + 1] > 0)
            })
        })
        .collect();
    SubsetTraces { n, ring: u.ring().clone(), traces }
}

/// #P^{n-1}(F_{p^s}).
pub fn projective_space_size(p: u64, n: usize, s: u32) -> BigInt {
    let q = BigInt::from(p).pow(s);
    if n == 0 {
        return BigInt::zero();
    }
    (q.pow(n as u32) - 1u32) / (q - 1u32)
}

/// Smallest precision at which counts over F_{p^s} can be certified.
pub fn precision_for_counts(p: u64, n: usize, s: u32) -> u32 {
    let bound = projective_space_size(p, n, s) * 2u32;
    let mut k = 0u32;
    let mut pk = BigInt::one();
    while pk <= bound {
        pk *= p;
        k += 1;
    }
    s + k
}

/// Projective count N_s from subset traces:
/// N_s = (q^{s(n-1)}-1)/(q^s-1) + q^{-s} Σ_A (-1)^{|A|} q^{s(n-|A|)} Tr(𝔘^s | L_A).
pub fn counts_from_traces(t: &SubsetTraces, s: u32) -> Result<BigInt> {
    let ring = &t.ring;
    let p = ring.p();
    let prec = ring.precision();
    let n = t.n;
    if s == 0 || s as usize > t.traces[0].len() {
        return Err(ZetaError::Insufficient(format!("no traces for power {s}")));
    }
    let need = precision_for_counts(p, n, s);
    if prec < need {
        return Err(ZetaError::Precision(format!(
            "precision {prec} cannot certify counts over F_{{{p}^{s}}}; need at least {need}"
        )));
    }
    let m = BigInt::from(ring.modulus().clone());
    let qs = BigInt::from(p).pow(s);
    let mut acc = BigInt::zero();
    for (mask, tr) in t.traces.iter().enumerate() {
        let x = tr[s as usize - 1].to_padic().map_err(|_| {
            ZetaError::Precision(format!("trace for subset mask {mask:b} at power {s} is not pi-free"))
        })?;
        let a = mask.count_ones();
        let mut term = BigInt::from(x.residue().clone()) * qs.pow(n as u32 - a);
        if a % 2 == 1 {
            term = -term;
        }
        acc += term;
    }
    let acc = acc.mod_floor(&m);
    let (quot, rem) = acc.div_rem(&qs);
    if !rem.is_zero() {
        return Err(ZetaError::Precision(format!(
            "subset trace sum has valuation {} < {s}; truncation or precision too small",
            padic::ord_p_bigint(&acc, p).unwrap_or(prec)
        )));
    }
    let m2 = BigInt::from(p).pow(prec - s);
    let val = quot + projective_space_size(p, n - 1, s);
    let out = padic::centered_mod(&val, &m2);
    if out < BigInt::zero() {
        return Err(ZetaError::Precision(format!("negative point count {out} reconstructed")));
    }
    Ok(out)
}

/// Precision window for coefficient k of [`fredholm_det`]: N - ord_p(k!).
pub fn fredholm_det_precision(p: u64, prec: u32, k: usize) -> i64 {
    let mut v = 0i64;
    let mut pk = p as usize;
    while pk <= k {
        v += (k / pk) as i64;
        pk *= p as usize;
    }
    prec as i64 - v
}

/// det(1 - U T) through degree m_deg from centered-lifted traces.
pub fn fredholm_det(u: &UMatrix, m_deg: usize) -> Result<TruncSeries<BigRational>> {
    let p = u.ring().p();
    let prec = u.ring().precision();
    if m_deg > 0 && fredholm_det_precision(p, prec, m_deg) < 1 {
        return Err(ZetaError::Precision(format!(
            "degree {m_deg} is beyond the Newton identity window at precision {prec}"
        )));
    }
    let traces = if m_deg == 0 { vec![] } else { sum_diagonals(&u.power_diagonals(m_deg), u.ring(), |_| true) };
    let mut sums = Vec::with_capacity(m_deg);
    for (s, t) in traces.iter().enumerate() {
        let x = t
            .to_padic()
            .map_err(|_| ZetaError::Precision(format!("trace of U^{} is not pi-free", s + 1)))?;
        sums.push(BigRational::from_integer(x.centered_lift()));
    }
    traces_to_charpoly(&sums, m_deg)
}

/// Residual of the torus identity
/// q^s N*_s - (q^s-1)^n - (q^s-1)^{n+1} Tr(𝔘^s), reduced mod p^N.
pub fn torus_identity_residual(trace_full: &PiElem, p: u64, n: usize, s: u32, torus_count: u64) -> Result<PadicInt> {
    let ring = trace_full.ring();
    let t = trace_full.to_padic()?;
    let qs = BigInt::from(p).pow(s);
    let lhs = padic::from_bigint(ring, &(&qs * BigInt::from(torus_count)));
    let a = padic::from_bigint(ring, &(&qs - 1u32).pow(n as u32));
    let b = padic::from_bigint(ring, &(&qs - 1u32).pow(n as u32 + 1));
    Ok(&(&lhs - &a) - &(&b * &t))
}

pub fn valuation_floor_of_c(p: u64, n: u64) -> BigRational {
    c_valuation_floor(p, n)
}

#[derive(Clone, Debug)]
pub struct DirectRun {
    pub zeta: ZetaData,
    pub dim: usize,
    pub truncation: u32,
    pub nnz: usize,
    pub stability_violations: usize,
    pub valuation_violations: usize,
}

/// Zeta function of a smooth hypersurface f = 0 in P^{n-1} by the direct method:
/// counts N_1..N_S from subset traces, then an exact fit with the functional
/// equation supplying any missing coefficients.
pub fn zeta_direct(f: &Polynomial, prec: u32, s_max: Option<u32>) -> Result<DirectRun> {
    let n = f.nvars();
    let d = f
        .homogeneous_degree()
        .ok_or_else(|| ZetaError::InvalidArgument("polynomial must be nonzero and homogeneous".into()))?;
    if n < 2 || d < 2 {
        return Err(ZetaError::InvalidArgument("need at least two variables and degree at least 2".into()));
    }
    let m = crate::diagonal::h0_dimension(n, d).max(0) as usize;
    let s_max = s_max.unwrap_or(m.max(1) as u32);
    let need = precision_for_counts(f.p(), n, s_max);
    if prec < need {
        return Err(ZetaError::Precision(format!(
            "precision {prec} cannot certify N_1..N_{s_max}; need at least {need}"
        )));
    }
    let u = u_matrix(f, d, prec, None)?;
    let traces = all_subset_traces(&u, s_max as usize);
    let counts = (1..=s_max)
        .map(|s| counts_from_traces(&traces, s).map(|c| (s, c)))
        .collect::<Result<Vec<_>>>()?;
    let fe = FunctionalEquation { weight: n as u32 - 2, sign: None };
    let mut zeta = zeta_fit(f.p(), n, d, &counts, &hypersurface_denominator(n), m, n.is_multiple_of(2), Some(fe))?;
    zeta.method = "direct".into();
    Ok(DirectRun {
        zeta,
        dim: u.dim(),
        truncation: u.truncation(),
        nnz: u.nnz(),
        stability_violations: u.stability_violations(),
        valuation_violations: u.valuation_audit().len(),
    })
}
