//! Nested Bethe ansatz for the twisted inhomogeneous XXZ chain.
//!
//! Level `i = 1..n-1` carries `m_i = Σ_{a>i} s_a` roots `σ^i_α`; level 0 is the
//! fixed set of equivariant parameters. With `h = ℏ^{1/2}`, the equations are
//! cleared of denominators:
//!
//! ```text
//! ζ_i     Π_β (h σ - h^{-1} σ^{i-1}_β) Π_{β≠α} (h^{-1} σ - h σ^i_β) Π_γ (σ - σ^{i+1}_γ)
//!   = ζ_{i+1} Π_β (σ - σ^{i-1}_β)       Π_{β≠α} (h σ - h^{-1} σ^i_β) Π_γ (h^{-1} σ - h σ^{i+1}_γ)
//! ```
//!
//! at `σ = σ^i_α`. The transfer-matrix eigenvalue is
//! `Λ(x) = Σ_i ζ_i Π_β f(x, σ^{i-1}_β) Π_β g(x, σ^i_β)` with
//! `f(x, s) = (h x - h^{-1} s)/(x - s)` and `g(x, s) = (h^{-1} x - h s)/(x - s)`.
//!
//! Roots are located in `f64` by damped Newton iteration from seeded starts,
//! then refined in rational complex arithmetic rounded to a fixed binary
//! precision.

mod crosscheck;
pub mod field;

pub use crosscheck::{closed_form_check, spectral_crosscheck, ClosedFormReading};
pub use field::{format_complex, Mp};

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::scalar::serde_q;
use crate::kernel::{ParamPoint, Q};
use field::{bits_for_digits, from_c64, sqrt_q, to_c64, Field};

/// Bethe problem on one weight block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetheProblem {
    pub weight: Vec<usize>,
    #[serde(with = "crate::kernel::scalar::serde_qvec")]
    pub a: Vec<Q>,
    #[serde(with = "crate::kernel::scalar::serde_qvec")]
    pub zeta: Vec<Q>,
    #[serde(with = "serde_q")]
    pub hbar: Q,
    /// `ℏ^{1/2}`, exact or rounded to the working precision.
    #[serde(with = "serde_q")]
    pub h_half: Q,
    pub h_exact: bool,
}

impl BetheProblem {
    /// From an exact parameter point (uses its `ℏ^{1/2}` directly).
    pub fn from_params(params: &ParamPoint, weight: Vec<usize>) -> Result<Self> {
        let p = BetheProblem {
            weight,
            a: params.a.clone(),
            zeta: params.zeta.clone(),
            hbar: params.hbar(),
            h_half: params.h_half.clone(),
            h_exact: true,
        };
        p.validate()?;
        Ok(p)
    }

    /// From `ℏ` itself; `ℏ^{1/2}` is exact when `ℏ` is a rational square and
    /// otherwise rounded to the working precision of `digits`.
    pub fn with_hbar(hbar: Q, a: Vec<Q>, zeta: Vec<Q>, weight: Vec<usize>, digits: u32) -> Result<Self> {
        let h_half = sqrt_q(&hbar, bits_for_digits(digits) + 64)?;
        let h_exact = &h_half * &h_half == hbar;
        let p = BetheProblem {
            weight,
            a,
            zeta,
            hbar,
            h_half,
            h_exact,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let n = self.zeta.len();
        if self.weight.len() != n || n < 2 {
            return Err(Error::Invalid(format!("weight {:?} for {n} twist parameters", self.weight)));
        }
        if self.weight.iter().sum::<usize>() != self.a.len() {
            return Err(Error::Weight(format!("weight {:?} does not sum to w = {}", self.weight, self.a.len())));
        }
        if self.zeta.iter().chain(&self.a).any(|x| x.is_zero()) || self.h_half.is_zero() {
            return Err(Error::Invalid("parameters must be nonzero".into()));
        }
        Ok(())
    }

    /// Local dimension `n`.
    pub fn n(&self) -> usize {
        self.zeta.len()
    }

    /// Number of sites `w`.
    pub fn w(&self) -> usize {
        self.a.len()
    }

    /// Root counts `m_1..m_{n-1}`.
    pub fn root_counts(&self) -> Vec<usize> {
        (1..self.n()).map(|i| self.weight[i..].iter().sum()).collect()
    }

    /// `w!/(s_1!…s_n!)`.
    pub fn block_dim(&self) -> usize {
        crate::quiver::multinomial(&self.weight) as usize
    }

    /// Exact parameter point with the (possibly rounded) `ℏ^{1/2}` and `q = 1`.
    pub fn param_point(&self) -> Result<ParamPoint> {
        ParamPoint::new(Q::one(), self.h_half.clone(), self.a.clone(), self.zeta.clone(), 0)
    }
}

/// One solution: roots per level.
#[derive(Clone, Debug, PartialEq)]
pub struct BetheSolution {
    pub roots: Vec<Vec<Mp>>,
}

/// Linear form `c_0 + Σ c_v x_v`.
#[derive(Clone)]
struct Linear<T> {
    c0: T,
    terms: Vec<(usize, T)>,
}

impl<T: Field> Linear<T> {
    fn eval(&self, x: &[T]) -> T {
        let mut s = self.c0.clone();
        for (v, c) in &self.terms {
            s = s + c.clone() * x[*v].clone();
        }
        s
    }
}

/// Residual system as a list of equations, each a signed sum of products of linear forms.
struct System<T> {
    nvars: usize,
    eqs: Vec<Vec<(T, Vec<Linear<T>>)>>,
}

/// Variable index of root `α` at level `i` (one-based levels).
fn var_offsets(m: &[usize]) -> Vec<usize> {
    let mut off = vec![0];
    for &k in m {
        off.push(off.last().copied().unwrap_or(0) + k);
    }
    off
}

fn build_system<T: Field>(p: &BetheProblem) -> System<T> {
    let m = p.root_counts();
    let off = var_offsets(&m);
    let nl = m.len();
    let h = T::from_q(&p.h_half);
    let hi = T::from_q(&p.h_half.recip());
    let one = T::one();
    let lin = |c0: T, t: Vec<(usize, T)>| Linear { c0, terms: t };
    let mut eqs = Vec::new();
    for i in 1..=nl {
        for al in 0..m[i - 1] {
            let s = off[i - 1] + al;
            let mut left = Vec::new();
            let mut right = Vec::new();
            if i == 1 {
                for ak in &p.a {
                    let a = T::from_q(ak);
                    left.push(lin(-(a.clone() * hi.clone()), vec![(s, h.clone())]));
                    right.push(lin(-a, vec![(s, one.clone())]));
                }
            } else {
                for b in 0..m[i - 2] {
                    let v = off[i - 2] + b;
                    left.push(lin(T::zero(), vec![(s, h.clone()), (v, -hi.clone())]));
                    right.push(lin(T::zero(), vec![(s, one.clone()), (v, -one.clone())]));
                }
            }
            for b in (0..m[i - 1]).filter(|&b| b != al) {
                let v = off[i - 1] + b;
                left.push(lin(T::zero(), vec![(s, hi.clone()), (v, -h.clone())]));
                right.push(lin(T::zero(), vec![(s, h.clone()), (v, -hi.clone())]));
            }
            if i < nl {
                for g in 0..m[i] {
                    let v = off[i] + g;
                    left.push(lin(T::zero(), vec![(s, one.clone()), (v, -one.clone())]));
                    right.push(lin(T::zero(), vec![(s, hi.clone()), (v, -h.clone())]));
                }
            }
            eqs.push(vec![(T::from_q(&p.zeta[i - 1]), left), (-T::from_q(&p.zeta[i]), right)]);
        }
    }
    System { nvars: off[nl], eqs }
}

impl<T: Field> System<T> {
    /// Residuals and dense Jacobian at `x`.
    fn eval(&self, x: &[T], bits: u32) -> (Vec<T>, Vec<Vec<T>>) {
        let mut res = Vec::with_capacity(self.eqs.len());
        let mut jac = Vec::with_capacity(self.eqs.len());
        for eq in &self.eqs {
            let mut r = T::zero();
            let mut row = vec![T::zero(); self.nvars];
            for (c, factors) in eq {
                let vals: Vec<T> = factors.iter().map(|f| f.eval(x).tidy(bits)).collect();
                let mut prod = c.clone();
                for v in &vals {
                    prod = (prod * v.clone()).tidy(bits);
                }
                r = r + prod;
                for (k, f) in factors.iter().enumerate() {
                    let mut others = c.clone();
                    for (l, v) in vals.iter().enumerate() {
                        if l != k {
                            others = (others * v.clone()).tidy(bits);
                        }
                    }
                    for (var, coef) in &f.terms {
                        row[*var] = (row[*var].clone() + coef.clone() * others.clone()).tidy(bits);
                    }
                }
            }
            res.push(r.tidy(bits));
            jac.push(row);
        }
        (res, jac)
    }
}

/// Cleared residuals at a multiprecision solution.
pub fn residuals(p: &BetheProblem, sol: &BetheSolution, digits: u32) -> Vec<Mp> {
    let sys = build_system::<Mp>(p);
    let x: Vec<Mp> = sol.roots.iter().flatten().cloned().collect();
    sys.eval(&x, bits_for_digits(digits)).0
}

fn split_levels<T: Clone>(x: &[T], m: &[usize]) -> Vec<Vec<T>> {
    let off = var_offsets(m);
    (0..m.len()).map(|i| x[off[i]..off[i + 1]].to_vec()).collect()
}

fn newton_f64(sys: &System<Complex64>, mut x: Vec<Complex64>) -> Option<Vec<Complex64>> {
    for _ in 0..200 {
        let (r, j) = sys.eval(&x, 0);
        let rn: f64 = r.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let scale: f64 = x.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if !rn.is_finite() {
            return None;
        }
        let dx = field::solve_dense(j, r, 0).ok()?;
        let step: f64 = dx.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let damp = if step > 10.0 * scale { 10.0 * scale / step } else { 1.0 };
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi -= d * damp;
        }
        if step < 1e-13 * scale {
            return Some(x);
        }
    }
    None
}

fn admissible(levels: &[Vec<Complex64>], a: &[Q]) -> bool {
    let scale: f64 = levels.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
    if scale > 1e8 {
        return false;
    }
    let tol = 1e-7 * scale;
    let a64: Vec<Complex64> = a.iter().map(Complex64::from_q).collect();
    for (i, lvl) in levels.iter().enumerate() {
        for (k, x) in lvl.iter().enumerate() {
            if lvl[k + 1..].iter().any(|y| (x - y).norm() < tol) {
                return false;
            }
            if x.norm() < tol {
                return false;
            }
            let below: &[Complex64] = if i == 0 { &a64 } else { &levels[i - 1] };
            if below.iter().any(|y| (x - y).norm() < tol) {
                return false;
            }
            if let Some(up) = levels.get(i + 1) {
                if up.iter().any(|y| (x - y).norm() < tol) {
                    return false;
                }
            }
        }
    }
    true
}

fn canonical(levels: &mut [Vec<Complex64>]) {
    for lvl in levels.iter_mut() {
        lvl.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    }
}

fn same_solution(x: &[Vec<Complex64>], y: &[Vec<Complex64>]) -> bool {
    x.iter().flatten().zip(y.iter().flatten()).all(|(u, v)| (u - v).norm() < 1e-7 * (1.0 + u.norm()))
}

fn start_point(p: &BetheProblem, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let a64: Vec<f64> = p.a.iter().map(crate::kernel::scalar::to_f64).collect();
    let hb = crate::kernel::scalar::to_f64(&p.hbar);
    let scale = a64.iter().map(|x| x.abs()).fold(1.0, f64::max);
    let m = p.root_counts();
    let total: usize = m.iter().sum();
    (0..total)
        .map(|_| {
            let kind: u32 = rng.gen_range(0..3);
            let base = match kind {
                0 => Complex64::new(a64[rng.gen_range(0..a64.len())], 0.0),
                1 => Complex64::new(a64[rng.gen_range(0..a64.len())] / hb, 0.0),
                _ => Complex64::new(0.0, 0.0),
            };
            base + Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale
        })
        .collect()
}

/// Distinct admissible `f64` solutions, sorted canonically.
fn search_f64(p: &BetheProblem, seed: u64, target: usize, attempts: usize) -> Vec<Vec<Vec<Complex64>>> {
    let sys = build_system::<Complex64>(p);
    let m = p.root_counts();
    let batch = 64;
    let mut found: Vec<Vec<Vec<Complex64>>> = Vec::new();
    let mut done = 0;
    while done < attempts && found.len() < target {
        let starts: Vec<Vec<Complex64>> = (done..done + batch)
            .map(|k| start_point(p, &mut ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(k as u64))))
            .collect();
        let sols: Vec<Option<Vec<Complex64>>> = starts.into_par_iter().map(|s| newton_f64(&sys, s)).collect();
        for s in sols.into_iter().flatten() {
            let mut lv = split_levels(&s, &m);
            if !admissible(&lv, &p.a) {
                continue;
            }
            canonical(&mut lv);
            if !found.iter().any(|f| same_solution(f, &lv)) {
                found.push(lv);
            }
        }
        done += batch;
    }
    found.sort_by(|x, y| {
        let key = |v: &Vec<Vec<Complex64>>| v.iter().flatten().map(|z| (z.re, z.im)).collect::<Vec<_>>();
        key(x).partial_cmp(&key(y)).unwrap_or(std::cmp::Ordering::Equal)
    });
    found
}

/// Newton refinement in multiprecision.
pub fn refine(p: &BetheProblem, start: &[Vec<Complex64>], digits: u32) -> Result<BetheSolution> {
    let bits = bits_for_digits(digits);
    let sys = build_system::<Mp>(p);
    let m = p.root_counts();
    let mut x: Vec<Mp> = start.iter().flatten().map(|z| from_c64(*z)).collect();
    let target = digits + 12;
    for _ in 0..60 {
        let (r, j) = sys.eval(&x, bits);
        let dx = field::solve_dense(j, r, bits)?;
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi = (xi.clone() - d.clone()).tidy(bits);
        }
        let scale: f64 = x.iter().map(|z| z.mag()).fold(1.0, f64::max);
        if dx.iter().all(|d| field::below(&(d.clone() / Mp::from_q(&field_scale(scale))), target)) {
            let lv = split_levels(&x, &m);
            let c64: Vec<Vec<Complex64>> = lv.iter().map(|l| l.iter().map(to_c64).collect()).collect();
            if !admissible(&c64, &p.a) {
                return Err(Error::DegenerateRoot("refinement reached a degenerate configuration".into()));
            }
            return Ok(BetheSolution { roots: lv });
        }
    }
    Err(Error::Convergence(format!("no convergence to {digits} digits")))
}

fn field_scale(s: f64) -> Q {
    Q::from_float(s).unwrap_or_else(Q::one)
}

/// All solutions of the block (up to `block_dim`), refined to `digits`.
pub fn solve(p: &BetheProblem, digits: u32, seed: u64) -> Result<Vec<BetheSolution>> {
    let target = p.block_dim();
    let raw = search_f64(p, seed, target, 4096 * target.max(1));
    let refined: Vec<Result<BetheSolution>> = raw.par_iter().map(|s| refine(p, s, digits)).collect();
    let mut out = Vec::new();
    for r in refined {
        match r {
            Ok(s) => out.push(s),
            Err(Error::DegenerateRoot(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn fx<T: Field>(x: &T, s: &T, h: &T, hi: &T, up: bool) -> T {
    let num = if up {
        h.clone() * x.clone() - hi.clone() * s.clone()
    } else {
        hi.clone() * x.clone() - h.clone() * s.clone()
    };
    num / (x.clone() - s.clone())
}

/// `Λ(x)` at a solution.
pub fn lambda_eval(p: &BetheProblem, sol: &BetheSolution, x: &Mp, digits: u32) -> Mp {
    let bits = bits_for_digits(digits);
    let h = Mp::from_q(&p.h_half);
    let hi = Mp::from_q(&p.h_half.recip());
    let a: Vec<Mp> = p.a.iter().map(Mp::from_q).collect();
    let n = p.n();
    let mut total = Mp::zero();
    for i in 0..n {
        let mut t = Mp::from_q(&p.zeta[i]);
        let below: &[Mp] = if i == 0 { &a } else { &sol.roots[i - 1] };
        for s in below {
            t = (t * fx(x, s, &h, &hi, true)).tidy(bits);
        }
        if i < n - 1 {
            for s in &sol.roots[i] {
                t = (t * fx(x, s, &h, &hi, false)).tidy(bits);
            }
        }
        total += t;
    }
    total
}

/// `Λ(∞)` and `Λ(0)` in closed form.
pub fn lambda_limits(p: &BetheProblem, sol: &BetheSolution) -> (Mp, Mp) {
    let h = p.h_half.clone();
    let hi = h.recip();
    let n = p.n();
    let mut inf = Q::zero();
    let mut zero = Q::zero();
    for i in 0..n {
        let below = if i == 0 { p.w() } else { sol.roots[i - 1].len() } as i32;
        let here = if i < n - 1 { sol.roots[i].len() } else { 0 } as i32;
        inf += &p.zeta[i] * num_traits::pow::pow(h.clone(), below as usize) * num_traits::pow::pow(hi.clone(), here as usize);
        zero += &p.zeta[i] * num_traits::pow::pow(hi.clone(), below as usize) * num_traits::pow::pow(h.clone(), here as usize);
    }
    (Mp::from_q(&inf), Mp::from_q(&zero))
}

/// Eigenvalues `h_k = ζ_1 Π_{j≠k}(h a_k - h^{-1} a_j)/(a_k - a_j) Π_α g(a_k, σ^1_α)`.
pub fn hamiltonian_eigenvalues(p: &BetheProblem, sol: &BetheSolution, digits: u32) -> Result<Vec<Mp>> {
    let bits = bits_for_digits(digits);
    let h = Mp::from_q(&p.h_half);
    let hi = Mp::from_q(&p.h_half.recip());
    let mut out = Vec::with_capacity(p.w());
    for k in 0..p.w() {
        let mut v = Mp::from_q(&(&p.zeta[0] * crate::xxz::hamiltonian_norm(k, &p.a, &p.h_half)?));
        let ak = Mp::from_q(&p.a[k]);
        for s in &sol.roots[0] {
            v = (v * fx(&ak, s, &h, &hi, false)).tidy(bits);
        }
        out.push(v);
    }
    Ok(out)
}

/// Serializable rendering of a solution.
pub fn solution_json(p: &BetheProblem, sol: &BetheSolution, digits: u32) -> Result<serde_json::Value> {
    let roots: Vec<Vec<String>> =
        sol.roots.iter().map(|l| l.iter().map(|z| format_complex(z, digits)).collect()).collect();
    let hs: Vec<String> = hamiltonian_eigenvalues(p, sol, digits)?
        .iter()
        .map(|z| format_complex(z, digits))
        .collect();
    Ok(serde_json::json!({"roots": roots, "h": hs}))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    #[test]
    fn root_counts_and_dims() {
        let p = BetheProblem::with_hbar(int(4), vec![int(1), int(2), int(5)], vec![int(1), int(3), int(7)], vec![1, 1, 1], 30)
            .unwrap();
        assert_eq!(p.root_counts(), vec![2, 1]);
        assert_eq!(p.block_dim(), 6);
        assert!(p.h_exact);
        let q = BetheProblem::with_hbar(int(3), vec![int(1), int(2)], vec![int(1), int(2)], vec![1, 1], 30).unwrap();
        assert!(!q.h_exact);
    }

    #[test]
    fn single_root_quadratic() {
        let p = BetheProblem::with_hbar(int(4), vec![int(1), int(2)], vec![int(1), int(2)], vec![1, 1], 40).unwrap();
        let sols = solve(&p, 40, 1).unwrap();
        assert_eq!(sols.len(), 2);
        for s in &sols {
            for r in residuals(&p, s, 40) {
                assert!(field::below(&r, 40));
            }
        }
        let _ = rat(1, 2);
    }

    #[test]
    fn limits_match_hamiltonian_sum() {
        let p = BetheProblem::with_hbar(int(9), vec![int(1), int(3), int(4)], vec![int(2), int(5)], vec![1, 2], 40).unwrap();
        for s in solve(&p, 40, 2).unwrap() {
            let (inf, zero) = lambda_limits(&p, &s);
            let hs = hamiltonian_eigenvalues(&p, &s, 40).unwrap();
            let sum = hs.into_iter().fold(Mp::zero(), |a, b| a + b);
            let hh = Mp::from_q(&(&p.h_half - p.h_half.recip()));
            assert!(field::below(&(inf - zero - hh * sum), 35));
        }
    }
}
