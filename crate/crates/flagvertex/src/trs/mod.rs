//! Trigonometric Ruijsenaars–Schneider (Macdonald) difference operators,
//! their action on eigenfunction candidates, eigenvalue specifications and
//! exact identity checks.

mod lemmas;

pub use lemmas::{gaussian_binomial, lemma_suite, LEMMA_CASES, LITERAL_LEMMA_CASES};

use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{qpow, sz_compare, ParamPoint, SzOutcome, Symbol, TruncatedSeries, Q};
use crate::quiver::{FixedPointChain, FlagData};
use crate::report::Report;
use crate::vertex::{
    frozen_convention, vertex_series, EigenfunctionCandidate, Insertion, SeriesConvention,
    SeriesProvider,
};

/// Coefficient function of one operator term, evaluated at the equivariant parameters.
pub type CoeffFn = Arc<dyn Fn(&[Q]) -> Result<Q> + Send + Sync>;

/// One term `c(a)·Π_k p_k^{shift_k}`.
#[derive(Clone)]
pub struct OpTerm {
    pub shift: Vec<i64>,
    pub coeff: CoeffFn,
}

/// A q-difference operator `Σ_I c_I(a) Π_{i} p_i^{s_i}` in `arity` variables.
#[derive(Clone)]
pub struct DifferenceOperator {
    pub arity: usize,
    pub terms: Vec<OpTerm>,
}

impl std::fmt::Debug for DifferenceOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let shifts: Vec<_> = self.terms.iter().map(|t| &t.shift).collect();
        write!(f, "DifferenceOperator(arity {}, shifts {:?})", self.arity, shifts)
    }
}

/// `Π_{i∈I, j∉I} (t a_i - a_j)/(a_i - a_j)`.
pub fn subset_coefficient(set: &[usize], a: &[Q], t: &Q) -> Result<Q> {
    let mut c = Q::one();
    for &i in set {
        for j in 0..a.len() {
            if set.contains(&j) {
                continue;
            }
            let den = &a[i] - &a[j];
            if den.is_zero() {
                return Err(Error::Pole(format!("a_{} = a_{}", i + 1, j + 1)));
            }
            c *= (t * &a[i] - &a[j]) / den;
        }
    }
    Ok(c)
}

/// Coefficient of the complementary form `Π_{i∉J, j∈J} (t a_i - a_j)/(a_i - a_j)`.
pub fn complement_coefficient(set: &[usize], a: &[Q], t: &Q) -> Result<Q> {
    let mut c = Q::one();
    for i in 0..a.len() {
        if set.contains(&i) {
            continue;
        }
        for &j in set {
            let den = &a[i] - &a[j];
            if den.is_zero() {
                return Err(Error::Pole(format!("a_{} = a_{}", i + 1, j + 1)));
            }
            c *= (t * &a[i] - &a[j]) / den;
        }
    }
    Ok(c)
}

fn shift_of(set: &[usize], w: usize, dir: i64) -> Vec<i64> {
    (0..w).map(|k| if set.contains(&k) { dir } else { 0 }).collect()
}

/// `T_r` (direction `+1`) or `T'_r` (direction `-1`) in `w` variables.
pub fn trs_operator(r: usize, w: usize, dir: i64, t: &Q) -> Result<DifferenceOperator> {
    if r < 1 || r > w {
        return Err(Error::Range(format!("r = {r} outside 1..={w}")));
    }
    if dir != 1 && dir != -1 {
        return Err(Error::Range(format!("direction {dir} is not ±1")));
    }
    let terms = (0..w)
        .combinations(r)
        .map(|set| {
            let t = t.clone();
            let shift = shift_of(&set, w, dir);
            OpTerm {
                shift,
                coeff: Arc::new(move |a: &[Q]| subset_coefficient(&set, a, &t)),
            }
        })
        .collect();
    Ok(DifferenceOperator { arity: w, terms })
}

/// Inverse-shift operator with complementary coefficients
/// `Σ_J Π_{i∉J, j∈J}(t a_i - a_j)/(a_i - a_j) Π_{j∈J} p_j^{-1}`.
pub fn trs_operator_complement(r: usize, w: usize, t: &Q) -> Result<DifferenceOperator> {
    if r < 1 || r > w {
        return Err(Error::Range(format!("r = {r} outside 1..={w}")));
    }
    let terms = (0..w)
        .combinations(r)
        .map(|set| {
            let t = t.clone();
            let shift = shift_of(&set, w, -1);
            OpTerm {
                shift,
                coeff: Arc::new(move |a: &[Q]| complement_coefficient(&set, a, &t)),
            }
        })
        .collect();
    Ok(DifferenceOperator { arity: w, terms })
}

impl DifferenceOperator {
    /// Composition `self ∘ other`: `Σ c_i(a) d_j(q^{s_i} a) p^{s_i + s_j}`.
    pub fn compose(&self, other: &DifferenceOperator, q: &Q) -> Result<DifferenceOperator> {
        if self.arity != other.arity {
            return Err(Error::Shape(format!("arity {} vs {}", self.arity, other.arity)));
        }
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let (ca, cb) = (a.coeff.clone(), b.coeff.clone());
                let sa = a.shift.clone();
                let q = q.clone();
                let shift: Vec<i64> = a.shift.iter().zip(&b.shift).map(|(x, y)| x + y).collect();
                terms.push(OpTerm {
                    shift,
                    coeff: Arc::new(move |x: &[Q]| {
                        let moved = x
                            .iter()
                            .zip(&sa)
                            .map(|(v, &s)| Ok(v * qpow(&q, s)?))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(ca(x)? * cb(&moved)?)
                    }),
                });
            }
        }
        Ok(DifferenceOperator {
            arity: self.arity,
            terms,
        }
        .grouped())
    }

    /// Merge terms with equal shift vectors by summing their coefficients.
    pub fn grouped(&self) -> DifferenceOperator {
        let mut map: BTreeMap<Vec<i64>, Vec<CoeffFn>> = BTreeMap::new();
        for t in &self.terms {
            map.entry(t.shift.clone()).or_default().push(t.coeff.clone());
        }
        let terms = map
            .into_iter()
            .map(|(shift, fs)| {
                let coeff: CoeffFn = if fs.len() == 1 {
                    fs[0].clone()
                } else {
                    Arc::new(move |x: &[Q]| {
                        let mut s = Q::zero();
                        for f in &fs {
                            s += f(x)?;
                        }
                        Ok(s)
                    })
                };
                OpTerm { shift, coeff }
            })
            .collect();
        DifferenceOperator {
            arity: self.arity,
            terms,
        }
    }

    /// Multiply every coefficient by a constant.
    pub fn scaled(&self, c: &Q) -> DifferenceOperator {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let f = t.coeff.clone();
                let c = c.clone();
                OpTerm {
                    shift: t.shift.clone(),
                    coeff: Arc::new(move |x: &[Q]| Ok(f(x)? * &c)),
                }
            })
            .collect();
        DifferenceOperator {
            arity: self.arity,
            terms,
        }
    }
}

/// Compare two operators shift-by-shift with randomized exact evaluation.
///
/// Returns the first shift vector whose coefficient functions differ, or `None`.
pub fn op_compare(
    a: &DifferenceOperator,
    b: &DifferenceOperator,
    trials: usize,
    seed: u64,
) -> Result<Option<(Vec<i64>, SzOutcome)>> {
    if a.arity != b.arity {
        return Err(Error::Shape(format!("arity {} vs {}", a.arity, b.arity)));
    }
    let (ga, gb) = (a.grouped(), b.grouped());
    let zero: CoeffFn = Arc::new(|_: &[Q]| Ok(Q::zero()));
    let mut shifts: Vec<Vec<i64>> = ga.terms.iter().chain(&gb.terms).map(|t| t.shift.clone()).collect();
    shifts.sort();
    shifts.dedup();
    for s in shifts {
        let fa = ga.terms.iter().find(|t| t.shift == s).map_or(zero.clone(), |t| t.coeff.clone());
        let fb = gb.terms.iter().find(|t| t.shift == s).map_or(zero.clone(), |t| t.coeff.clone());
        let out = sz_compare(a.arity, |x| fa(x), |x| fb(x), trials, seed)?;
        if !out.is_equal() {
            return Ok(Some((s, out)));
        }
    }
    Ok(None)
}

/// Kernel used in the ordered form of the Hamiltonians.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderedKernel {
    /// `C(u) = (u-1)^2/((h u - h^{-1})(h^{-1} u - h))` with `u = a_i/a_j`.
    Corrected,
    /// `C(x) = (x - x^{-1})/((x h - x^{-1} h^{-1})(x h^{-1} - x^{-1} h))` with `x = a_i/a_j`.
    Literal,
}

/// Evaluate the ordering kernel at a ratio.
pub fn ordered_kernel(kind: OrderedKernel, x: &Q, h: &Q) -> Result<Q> {
    let hi = h.recip();
    let (num, den) = match kind {
        OrderedKernel::Corrected => {
            let u1 = x - Q::one();
            (&u1 * &u1, (h * x - &hi) * (&hi * x - h))
        }
        OrderedKernel::Literal => {
            let xi = x.recip();
            (x - &xi, (x * h - &xi * &hi) * (x * &hi - &xi * h))
        }
    };
    if den.is_zero() {
        return Err(Error::Pole("ordering kernel denominator vanishes".into()));
    }
    Ok(num / den)
}

/// `(h a_i - h^{-1} a_j)/(a_i - a_j)`.
pub fn hbar_ratio(ai: &Q, aj: &Q, h: &Q) -> Result<Q> {
    let den = ai - aj;
    if den.is_zero() {
        return Err(Error::Pole("coincident equivariant parameters".into()));
    }
    Ok((h * ai - aj / h) / den)
}

/// Ordered form `Σ_{i_1<…<i_d} Π_k Π_{j≠i_k} (h a_{i_k} - h^{-1} a_j)/(a_{i_k} - a_j)
/// Π_{m<l} C(a_{i_m}/a_{i_l}) Π_k p_{i_k}` with `h = ℏ^{1/2}`.
pub fn ordered_hamiltonian(
    d: usize,
    w: usize,
    h_half: &Q,
    kernel: OrderedKernel,
) -> Result<DifferenceOperator> {
    if d < 1 || d > w {
        return Err(Error::Range(format!("d = {d} outside 1..={w}")));
    }
    let terms = (0..w)
        .combinations(d)
        .map(|set| {
            let h = h_half.clone();
            let shift = shift_of(&set, w, 1);
            OpTerm {
                shift,
                coeff: Arc::new(move |a: &[Q]| {
                    let mut c = Q::one();
                    for &i in &set {
                        for j in 0..a.len() {
                            if j != i {
                                c *= hbar_ratio(&a[i], &a[j], &h)?;
                            }
                        }
                    }
                    for (m, &i) in set.iter().enumerate() {
                        for &l in &set[m + 1..] {
                            c *= ordered_kernel(kernel, &(&a[i] / &a[l]), &h)?;
                        }
                    }
                    Ok(c)
                }),
            }
        })
        .collect();
    Ok(DifferenceOperator { arity: w, terms })
}

/// Check the ordered form against the definition form of `T_d`.
///
/// The identity that holds is `Ĥ_d = ℏ^{-d(w-d)/2}·T_d|_{t→ℏ}` with the corrected
/// kernel; the literal variant compares the literal kernel with `ℏ^{d/2} T_d|_{t→ℏ^{-1}}`.
pub fn check_ordered_hamiltonian(
    d: usize,
    w: usize,
    h_half: &Q,
    kernel: OrderedKernel,
    seed: u64,
) -> Result<Report> {
    let name = match kernel {
        OrderedKernel::Corrected => "ordered-hamiltonian",
        OrderedKernel::Literal => "ordered-hamiltonian-literal",
    };
    let mut rep = Report::new(name, seed);
    let hbar = h_half * h_half;
    let ordered = ordered_hamiltonian(d, w, h_half, kernel)?;
    let reference = match kernel {
        OrderedKernel::Corrected => {
            trs_operator(d, w, 1, &hbar)?.scaled(&qpow(h_half, -((d * (w - d)) as i64))?)
        }
        OrderedKernel::Literal => trs_operator(d, w, 1, &hbar.recip())?.scaled(&qpow(h_half, d as i64)?),
    };
    if let Some((shift, out)) = op_compare(&ordered, &reference, 5, seed)? {
        rep.fail(format!("d = {d}, w = {w}: coefficient of shift {shift:?} differs ({out:?})"));
    } else {
        rep.note(format!("d = {d}, w = {w}: all {} coefficients agree", ordered.terms.len()));
    }
    Ok(rep)
}

/// Result of applying an operator to a candidate: `ζ_n^{zeta_n_power}·series`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppliedSeries {
    pub zeta_n_power: i64,
    pub series: TruncatedSeries,
}

fn prefactor_ratio(cand: &EigenfunctionCandidate, shift: &[i64], params: &ParamPoint) -> Result<Q> {
    let mut moved = cand.prefactor.clone();
    for (k, &s) in shift.iter().enumerate() {
        if s != 0 {
            moved = moved.shift(&Symbol::A(k), s);
        }
    }
    if moved.factors() != cand.prefactor.factors() {
        return Err(Error::Invalid("shifted prefactor changed its φ factors".into()));
    }
    let a = &params.a;
    let assign = |s: &Symbol| match s {
        Symbol::A(k) => a[*k].clone(),
        Symbol::S(..) => Q::one(),
    };
    let (q, t) = (params.q(), params.t());
    let num = moved.eval_prefactor(&assign, &q, &t)?;
    let den = cand.prefactor.eval_prefactor(&assign, &q, &t)?;
    if den.is_zero() {
        return Err(Error::RewritePole("base prefactor vanishes".into()));
    }
    Ok(num / den)
}

/// Apply an operator with series at shifted parameters taken from `provider`.
pub fn apply_with(
    op: &DifferenceOperator,
    cand: &EigenfunctionCandidate,
    params: &ParamPoint,
    provider: SeriesProvider<'_>,
) -> Result<AppliedSeries> {
    let w = cand.point.w;
    if op.arity != w || params.a.len() != w {
        return Err(Error::Shape(format!(
            "operator arity {} / parameters {} vs framing {w}",
            op.arity,
            params.a.len()
        )));
    }
    let nv = cand.series.num_vars();
    let parts: Vec<Result<(i64, TruncatedSeries)>> = op
        .terms
        .par_iter()
        .map(|term| {
            let c = (term.coeff)(&params.a)?;
            let ratio = prefactor_ratio(cand, &term.shift, params)?;
            let mut zp = 0;
            let mut e = vec![0i64; nv];
            for (k, &s) in term.shift.iter().enumerate() {
                if s == 0 {
                    continue;
                }
                zp += s * cand.cocycle[k].zeta_n_power;
                for (x, y) in e.iter_mut().zip(&cand.cocycle[k].shift) {
                    *x += s * y;
                }
            }
            let base = if term.shift.iter().all(|&s| s == 0) {
                cand.series.clone()
            } else {
                provider(&cand.point, &params.shifted(&term.shift)?, &cand.order)?
            };
            Ok((zp, base.scale(&(c * ratio)).shift_degree(&e)))
        })
        .collect();
    let mut zeta_n_power = None;
    let mut acc: Option<TruncatedSeries> = None;
    for p in parts {
        let (zp, s) = p?;
        match zeta_n_power {
            None => zeta_n_power = Some(zp),
            Some(z) if z != zp => {
                return Err(Error::Shape(format!("mixed ζ_n powers {z} and {zp} in one operator")))
            }
            _ => {}
        }
        acc = Some(match acc {
            None => s,
            Some(a) => a.add(&s)?,
        });
    }
    Ok(AppliedSeries {
        zeta_n_power: zeta_n_power.unwrap_or(0),
        series: acc.unwrap_or_else(|| TruncatedSeries::zero(nv, cand.series.reliable_order().to_vec())),
    })
}

/// Apply an operator, recomputing the candidate's own series at shifted parameters.
pub fn apply(
    op: &DifferenceOperator,
    cand: &EigenfunctionCandidate,
    params: &ParamPoint,
) -> Result<AppliedSeries> {
    let tau = cand.tau.clone();
    let provider = move |p: &FixedPointChain, pr: &ParamPoint, order: &[i64]| {
        Ok(vertex_series(p, &tau, order, pr, SeriesConvention::Zh)?.series)
    };
    apply_with(op, cand, params, &provider)
}

/// Laurent polynomial in `ž` as `(degree, coefficient)` pairs.
pub type Laurent = Vec<(Vec<i64>, Q)>;

/// Eigenvalue of `T_r` in units of `ζ_n^r`, as a Laurent polynomial in `ž`.
///
/// Slot `j` (global index over levels `1..n`, sizes `s_m`) carries `t^j` and the
/// monomial with exponent `-1` at every position `m ≥ ℓ(j)`; the eigenvalue is
/// `t^{-r(r-1)/2}` times the `r`-th elementary symmetric function of the slots.
pub fn eigenvalue_laurent(flag: &FlagData, params: &ParamPoint, r: usize) -> Result<(i64, Laurent)> {
    if r < 1 || r > flag.w {
        return Err(Error::Range(format!("r = {r} outside 1..={}", flag.w)));
    }
    let nv = flag.v.len();
    let t = params.t();
    let mut slots = Vec::with_capacity(flag.w);
    for (m, &s) in flag.level_sizes().iter().enumerate() {
        let lvl = m + 1;
        let deg: Vec<i64> = (1..=nv).map(|p| if p >= lvl { -1 } else { 0 }).collect();
        for _ in 0..s {
            slots.push(deg.clone());
        }
    }
    let mut acc: BTreeMap<Vec<i64>, Q> = BTreeMap::new();
    let base = -((r * (r - 1) / 2) as i64);
    for set in (0..flag.w).combinations(r) {
        let mut deg = vec![0i64; nv];
        let mut tp = base;
        for &j in &set {
            tp += j as i64;
            for (x, y) in deg.iter_mut().zip(&slots[j]) {
                *x += y;
            }
        }
        *acc.entry(deg).or_insert_with(Q::zero) += qpow(&t, tp)?;
    }
    Ok((r as i64, acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()))
}

/// `Σ_e c_e ž^e · F`, with the reliable order moved by each shift.
pub fn laurent_times(lam: &[(Vec<i64>, Q)], series: &TruncatedSeries) -> Result<TruncatedSeries> {
    let mut acc: Option<TruncatedSeries> = None;
    for (e, c) in lam {
        let term = series.scale(c).shift_degree(e);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.unwrap_or_else(|| TruncatedSeries::zero(series.num_vars(), series.reliable_order().to_vec())))
}

/// Elementary symmetric polynomial `e_r` of exact values.
pub fn elementary_symmetric(r: usize, vals: &[Q]) -> Q {
    let mut e = vec![Q::zero(); r + 1];
    e[0] = Q::one();
    for v in vals {
        for k in (1..=r).rev() {
            let add = &e[k - 1] * v;
            e[k] += add;
        }
    }
    e[r].clone()
}

/// `qdim(Λ_s^N) = e_s(t^{N-1}, t^{N-3}, …, t^{1-N})`; zero outside `0 ≤ s ≤ N`.
pub fn qdim(s: i64, n: i64, t: &Q) -> Q {
    if s < 0 || s > n {
        return Q::zero();
    }
    let vals: Vec<Q> = (0..n)
        .map(|i| qpow(t, n - 1 - 2 * i).expect("t is nonzero"))
        .collect();
    elementary_symmetric(s as usize, &vals)
}

fn t_half_pow(params: &ParamPoint, k: i64) -> Result<Q> {
    qpow(&params.t_half(), k)
}

/// The eigenvalue blocks `{ζ_m t^{(s_m-1)/2}, ζ_m t^{(s_m-3)/2}, …, ζ_m t^{(1-s_m)/2}}`.
pub fn eigenvalue_blocks(flag: &FlagData, zeta: &[Q], params: &ParamPoint) -> Result<Vec<Q>> {
    let sizes = flag.level_sizes();
    if zeta.len() != sizes.len() {
        return Err(Error::Invalid(format!(
            "{} Kähler parameters supplied, {} levels",
            zeta.len(),
            sizes.len()
        )));
    }
    let mut out = Vec::with_capacity(flag.w);
    for (z, &s) in zeta.iter().zip(&sizes) {
        let s = s as i64;
        for i in 0..s {
            out.push(z * t_half_pow(params, s - 1 - 2 * i)?);
        }
    }
    Ok(out)
}

/// `S_r`: the `r`-th elementary symmetric polynomial of the eigenvalue blocks at `params.zeta`.
pub fn eigenvalue_spec(flag: &FlagData, params: &ParamPoint, r: usize) -> Result<Q> {
    if r < 1 || r > flag.w {
        return Err(Error::Range(format!("r = {r} outside 1..={}", flag.w)));
    }
    Ok(elementary_symmetric(r, &eigenvalue_blocks(flag, &params.zeta, params)?))
}

/// Rescaled Kähler parameters `ζ̂_m = ζ_m t^{v_{m-1} + (s_m - 1)/2}`.
pub fn zeta_hat(flag: &FlagData, params: &ParamPoint) -> Result<Vec<Q>> {
    let e = flag.extended();
    let sizes = flag.level_sizes();
    if params.zeta.len() != sizes.len() {
        return Err(Error::Invalid(format!(
            "{} Kähler parameters supplied, {} levels",
            params.zeta.len(),
            sizes.len()
        )));
    }
    params
        .zeta
        .iter()
        .enumerate()
        .map(|(m, z)| Ok(z * t_half_pow(params, 2 * e[m] as i64 + sizes[m] as i64 - 1)?))
        .collect()
}

/// Evaluate `ζ_n^{power}·Σ c_e ž^e` at `params.zeta`, with `ž_m = ζ_{m+1}/ζ_m`.
pub fn eval_laurent(power: i64, lam: &[(Vec<i64>, Q)], params: &ParamPoint) -> Result<Q> {
    let z = &params.zeta;
    let n = z.len();
    if n == 0 {
        return Err(Error::Invalid("no Kähler parameters supplied".into()));
    }
    let mut acc = Q::zero();
    for (e, c) in lam {
        if e.len() + 1 != n {
            return Err(Error::Shape(format!("degree {e:?} vs {n} Kähler parameters")));
        }
        let mut v = c.clone();
        for (m, &k) in e.iter().enumerate() {
            v *= qpow(&(&z[m + 1] / &z[m]), k)?;
        }
        acc += v;
    }
    Ok(acc * qpow(&z[n - 1], power)?)
}

/// Fit the eigenvalue of `T_r` at one fixed point from the low-degree part of
/// `T_r F = λ F`, using the support of the slot monomials.
pub fn fit_eigenvalue(
    flag: &FlagData,
    p: &FixedPointChain,
    r: usize,
    order: &[i64],
    params: &ParamPoint,
) -> Result<(i64, Laurent)> {
    let conv = frozen_convention()?;
    let cand = EigenfunctionCandidate::new(p, Insertion::one(), order, params, conv)?;
    let op = trs_operator(r, flag.w, 1, &params.t())?;
    let lhs = apply(&op, &cand, params)?;
    let (_, shape) = eigenvalue_laurent(flag, params, r)?;
    let mut support: Vec<Vec<i64>> = shape.into_iter().map(|(d, _)| d).collect();
    support.sort_by_key(|d| (d.iter().sum::<i64>(), d.clone()));
    let f0 = cand.series.coeff(&vec![0; cand.series.num_vars()]);
    if f0.is_zero() {
        return Err(Error::NoFit("series has vanishing constant term".into()));
    }
    let mut fitted: Laurent = Vec::new();
    for e in &support {
        if !lhs.series.in_range(e) {
            return Err(Error::Reliability(format!("degree {e:?} beyond the reliable order")));
        }
        let mut v = lhs.series.coeff(e);
        for (e2, c2) in &fitted {
            let diff: Vec<i64> = e.iter().zip(e2).map(|(x, y)| x - y).collect();
            if diff.iter().all(|&x| x >= 0) {
                v -= c2 * cand.series.coeff(&diff);
            }
        }
        fitted.push((e.clone(), v / &f0));
    }
    Ok((lhs.zeta_n_power, fitted))
}

/// Verify `T_r F_p = λ_r F_p` exactly through the reliable order.
pub fn check_eigen(
    flag: &FlagData,
    p: &FixedPointChain,
    r: usize,
    order: &[i64],
    params: &ParamPoint,
) -> Result<Report> {
    let mut rep = Report::new("trs-eigen", 0);
    if p.flag() != *flag {
        return Err(Error::Invalid("fixed point does not belong to the flag data".into()));
    }
    let conv = frozen_convention()?;
    let cand = EigenfunctionCandidate::new(p, Insertion::one(), order, params, conv)?;
    let op = trs_operator(r, flag.w, 1, &params.t())?;
    let lhs = apply(&op, &cand, params)?;
    let (zp, lam) = eigenvalue_laurent(flag, params, r)?;
    let rhs = laurent_times(&lam, &cand.series)?;
    rep.require(
        lhs.zeta_n_power == zp,
        format!("ζ_n power {} vs expected {zp}", lhs.zeta_n_power),
    );
    let res = lhs.series.sub(&rhs)?;
    rep.reliable_order = res.reliable_order().to_vec();
    let negative = lhs.series.terms().filter(|(d, _)| d.iter().any(|&x| x < 0)).count();
    for (d, c) in res.terms() {
        rep.push_residual(d.clone(), c);
    }
    rep.note(format!(
        "point {:?}, r = {r}, {} operator terms, {negative} negative-degree terms in T_r F",
        p.to_one_based(),
        op.terms.len()
    ));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};
    use crate::quiver::enumerate_fixed_points;

    fn pp(a: Vec<Q>) -> ParamPoint {
        ParamPoint::new(rat(1, 2), rat(1, 3), a, vec![int(3), int(5), int(7)], 8).unwrap()
    }

    #[test]
    fn r1_coefficient_sum() {
        let t = rat(3, 7);
        for w in 1..=5usize {
            let a: Vec<Q> = (0..w).map(|k| rat(2 + 3 * k as i64, 1 + k as i64)).collect();
            let op = trs_operator(1, w, 1, &t).unwrap();
            let mut s = Q::zero();
            for term in &op.terms {
                s += (term.coeff)(&a).unwrap();
            }
            let want = (qpow(&t, w as i64).unwrap() - Q::one()) / (&t - Q::one());
            assert_eq!(s, want);
        }
    }

    #[test]
    fn full_shift_has_unit_coefficient() {
        let op = trs_operator(3, 3, 1, &rat(2, 5)).unwrap();
        assert_eq!(op.terms.len(), 1);
        assert_eq!((op.terms[0].coeff)(&[int(2), int(3), int(5)]).unwrap(), int(1));
        assert!(trs_operator(0, 3, 1, &rat(2, 5)).is_err());
        assert!(trs_operator(4, 3, 1, &rat(2, 5)).is_err());
    }

    #[test]
    fn operators_commute() {
        let t = rat(3, 7);
        let q = rat(2, 9);
        for w in 2..=3 {
            for r in 1..=w {
                for s in 1..=w {
                    let a = trs_operator(r, w, 1, &t).unwrap();
                    let b = trs_operator(s, w, 1, &t).unwrap();
                    let ab = a.compose(&b, &q).unwrap();
                    let ba = b.compose(&a, &q).unwrap();
                    assert!(op_compare(&ab, &ba, 3, 11).unwrap().is_none(), "w={w} r={r} s={s}");
                }
            }
        }
    }

    #[test]
    fn ordered_form_matches() {
        let h = rat(3, 2);
        for w in 1..=3 {
            for d in 1..=w {
                let rep = check_ordered_hamiltonian(d, w, &h, OrderedKernel::Corrected, 5).unwrap();
                assert!(rep.passed(), "{rep:?}");
            }
        }
        let lit = check_ordered_hamiltonian(2, 3, &h, OrderedKernel::Literal, 5).unwrap();
        assert!(!lit.passed());
    }

    #[test]
    fn qdim_values() {
        let t = rat(2, 3);
        assert_eq!(qdim(0, 3, &t), int(1));
        assert_eq!(qdim(1, 2, &t), &t + t.recip());
        assert_eq!(qdim(3, 2, &t), int(0));
    }

    #[test]
    fn eigenvalue_examples() {
        let f = FlagData::new(vec![1], 2).unwrap();
        let pr = ParamPoint::new(rat(1, 2), rat(1, 3), vec![int(2), int(3)], vec![int(3), int(5)], 8).unwrap();
        assert_eq!(eigenvalue_spec(&f, &pr, 1).unwrap(), int(8));
        assert_eq!(eigenvalue_spec(&f, &pr, 2).unwrap(), int(15));
        let (zp, lam) = eigenvalue_laurent(&f, &pr, 1).unwrap();
        assert_eq!(zp, 1);
        assert_eq!(lam, vec![(vec![-1], int(1)), (vec![0], pr.t())]);
    }

    #[test]
    fn formal_eigenvalue_is_rescaled_block_formula() {
        let pr = ParamPoint::new(rat(1, 2), rat(1, 3), vec![int(2), int(3), int(5), int(7)], vec![int(3), int(5), int(11)], 8)
            .unwrap();
        for v in [vec![1, 3], vec![2, 3], vec![1, 1]] {
            let f = FlagData::new(v, 4).unwrap();
            let zh = pr.with_zeta(zeta_hat(&f, &pr).unwrap());
            for r in 1..=4 {
                let (zp, lam) = eigenvalue_laurent(&f, &pr, r).unwrap();
                let formal = eval_laurent(zp, &lam, &pr).unwrap();
                let spec = eigenvalue_spec(&f, &zh, r).unwrap();
                let tr = qpow(&pr.t(), -((r * (r - 1) / 2) as i64)).unwrap();
                assert_eq!(formal, tr * spec);
            }
        }
    }

    #[test]
    fn tp1_eigen_relation() {
        let f = FlagData::new(vec![1], 2).unwrap();
        let pr = pp(vec![int(2), int(3)]);
        for p in enumerate_fixed_points(&f) {
            for r in 1..=2 {
                let rep = check_eigen(&f, &p, r, &[4], &pr).unwrap();
                assert!(rep.passed(), "{rep:?}");
            }
        }
    }

    #[test]
    fn apply_reliability_bookkeeping() {
        let f = FlagData::new(vec![1], 2).unwrap();
        let pr = pp(vec![int(2), int(3)]);
        let p = enumerate_fixed_points(&f).remove(0);
        let cand = EigenfunctionCandidate::new(&p, Insertion::one(), &[6], &pr, frozen_convention().unwrap()).unwrap();
        let op = trs_operator(1, 2, 1, &pr.t()).unwrap();
        let out = apply(&op, &cand, &pr).unwrap();
        assert_eq!(out.series.reliable_order(), &[5]);
    }
}
