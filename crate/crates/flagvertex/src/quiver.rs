//! Flag-quiver combinatorics: dimension vectors, torus fixed points as nested
//! chains of index sets, and admissible degree assignments.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gauge ranks `v_1 ≤ … ≤ v_{n-1}` and framing rank `w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlagData {
    pub v: Vec<usize>,
    pub w: usize,
}

impl FlagData {
    /// Validated constructor.
    pub fn new(v: Vec<usize>, w: usize) -> Result<Self> {
        let f = FlagData { v, w };
        f.validate()?;
        Ok(f)
    }

    /// `T*ℙ^{w-1}` style single-node data `v = (k)`.
    pub fn grassmannian(k: usize, w: usize) -> Result<Self> {
        Self::new(vec![k], w)
    }

    /// Check `0 < v_1 ≤ … ≤ v_{n-1} ≤ w`.
    pub fn validate(&self) -> Result<()> {
        if self.v.is_empty() {
            return Err(Error::Invalid("flag data needs at least one gauge node".into()));
        }
        if self.v[0] == 0 {
            return Err(Error::Invalid("v_1 must be positive".into()));
        }
        if self.v.windows(2).any(|p| p[0] > p[1]) || *self.v.last().unwrap() > self.w {
            return Err(Error::Invalid(format!(
                "dimension vector {:?} with w = {} must be non-decreasing and bounded by w",
                self.v, self.w
            )));
        }
        Ok(())
    }

    /// Parse from `{"v":[...],"w":W}`.
    pub fn from_json(s: &str) -> Result<Self> {
        let f: FlagData =
            serde_json::from_str(s).map_err(|e| Error::Invalid(format!("quiver: {e}")))?;
        f.validate()?;
        Ok(f)
    }

    /// Number of levels `n` (gauge nodes plus the framing).
    pub fn n(&self) -> usize {
        self.v.len() + 1
    }

    /// `v_0 = 0, v_1, …, v_{n-1}, v_n = w`.
    pub fn extended(&self) -> Vec<usize> {
        let mut e = vec![0];
        e.extend(&self.v);
        e.push(self.w);
        e
    }

    /// Level sizes `s_m = v_m - v_{m-1}` for `m = 1..n`.
    pub fn level_sizes(&self) -> Vec<usize> {
        self.extended().windows(2).map(|p| p[1] - p[0]).collect()
    }

    /// `v'_i = v_{i+1} - v_{i-1}` for `i = 1..n-1`.
    pub fn vprime(&self) -> Vec<i64> {
        let e = self.extended();
        (1..self.n()).map(|i| e[i + 1] as i64 - e[i - 1] as i64).collect()
    }
}

/// A torus fixed point: nested subsets `V_1 ⊂ … ⊂ V_{n-1} ⊂ {0..w-1}`.
///
/// Elements are zero-based internally; JSON uses one-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FixedPointChain {
    pub w: usize,
    pub levels: Vec<Vec<usize>>,
}

impl FixedPointChain {
    /// Validated constructor from zero-based sets.
    pub fn new(w: usize, levels: Vec<Vec<usize>>) -> Result<Self> {
        let mut levels = levels;
        for l in levels.iter_mut() {
            l.sort_unstable();
            l.dedup();
        }
        for (m, l) in levels.iter().enumerate() {
            if l.iter().any(|&k| k >= w) {
                return Err(Error::Invalid(format!("level {} has index ≥ w", m + 1)));
            }
            if m > 0 && !levels[m - 1].iter().all(|k| l.contains(k)) {
                return Err(Error::Invalid(format!("level {} does not contain level {}", m + 1, m)));
            }
        }
        Ok(FixedPointChain { w, levels })
    }

    /// Flag data this chain is a fixed point of.
    pub fn flag(&self) -> FlagData {
        FlagData {
            v: self.levels.iter().map(|l| l.len()).collect(),
            w: self.w,
        }
    }

    /// Number of levels `n`.
    pub fn n(&self) -> usize {
        self.levels.len() + 1
    }

    /// Minimal (one-based) level containing `k`, or `n` if only in the framing.
    pub fn level_of(&self, k: usize) -> usize {
        self.levels
            .iter()
            .position(|l| l.contains(&k))
            .map(|m| m + 1)
            .unwrap_or(self.n())
    }

    /// Levels of all framing indices.
    pub fn levels_of_all(&self) -> Vec<usize> {
        (0..self.w).map(|k| self.level_of(k)).collect()
    }

    /// Apply a permutation `k -> sigma[k]` of framing indices.
    pub fn permuted(&self, sigma: &[usize]) -> FixedPointChain {
        let levels = self
            .levels
            .iter()
            .map(|l| {
                let mut v: Vec<usize> = l.iter().map(|&k| sigma[k]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        FixedPointChain { w: self.w, levels }
    }

    /// One-based index arrays for serialization.
    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.levels
            .iter()
            .map(|l| l.iter().map(|k| k + 1).collect())
            .collect()
    }
}

impl Serialize for FixedPointChain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_based().serialize(s)
    }
}

/// Degrees `d_m(k)` for each level `m` and element `k ∈ V_m`, stored parallel
/// to the chain's level lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeAssignment {
    pub deg: Vec<Vec<i64>>,
}

impl DegreeAssignment {
    /// All-zero assignment on a chain.
    pub fn zero(p: &FixedPointChain) -> Self {
        DegreeAssignment {
            deg: p.levels.iter().map(|l| vec![0; l.len()]).collect(),
        }
    }

    /// `d_m(k)` for zero-based level `m` and element `k` of `V_{m+1}`.
    pub fn get(&self, p: &FixedPointChain, m: usize, k: usize) -> Option<i64> {
        p.levels[m].iter().position(|&e| e == k).map(|j| self.deg[m][j])
    }

    /// Level totals `d_m`.
    pub fn totals(&self) -> Vec<i64> {
        self.deg.iter().map(|l| l.iter().sum()).collect()
    }

    /// `N(d) = Σ_m v'_m d_m`.
    pub fn n_of_d(&self, f: &FlagData) -> i64 {
        f.vprime().iter().zip(self.totals()).map(|(a, b)| a * b).sum()
    }

    /// Check nonnegativity and chain monotonicity `d_m(k) ≥ d_{m+1}(k)`.
    pub fn is_admissible(&self, p: &FixedPointChain) -> bool {
        if self.deg.iter().flatten().any(|&d| d < 0) {
            return false;
        }
        for m in 0..p.levels.len().saturating_sub(1) {
            for (j, &k) in p.levels[m].iter().enumerate() {
                match self.get(p, m + 1, k) {
                    Some(up) if self.deg[m][j] < up => return false,
                    _ => {}
                }
            }
        }
        true
    }
}

/// All fixed points, sorted lexicographically; count is `w!/(s_1!⋯s_n!)`.
pub fn enumerate_fixed_points(f: &FlagData) -> Vec<FixedPointChain> {
    fn rec(f: &FlagData, acc: &mut Vec<Vec<usize>>, out: &mut Vec<FixedPointChain>) {
        let m = acc.len();
        if m == f.v.len() {
            out.push(FixedPointChain {
                w: f.w,
                levels: acc.clone(),
            });
            return;
        }
        let base: Vec<usize> = acc.last().cloned().unwrap_or_default();
        let rest: Vec<usize> = (0..f.w).filter(|k| !base.contains(k)).collect();
        for add in rest.into_iter().combinations(f.v[m] - base.len()) {
            let mut next = base.clone();
            next.extend(add);
            next.sort_unstable();
            acc.push(next);
            rec(f, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(f, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// All assignments with level totals exactly `d`, nonnegative and chain-monotone.
///
/// Enumeration runs from the top level downwards so monotonicity bounds prune early.
pub fn enumerate_degree_assignments(p: &FixedPointChain, d: &[i64]) -> Vec<DegreeAssignment> {
    let nl = p.levels.len();
    assert_eq!(d.len(), nl, "degree vector length");
    let mut out = Vec::new();
    if d.iter().any(|&x| x < 0) {
        return out;
    }
    let mut cur: Vec<Vec<i64>> = p.levels.iter().map(|l| vec![0; l.len()]).collect();

    fn compositions(total: i64, lower: &[i64], acc: &mut Vec<i64>, sink: &mut dyn FnMut(&[i64])) {
        let i = acc.len();
        if i == lower.len() {
            if total == 0 {
                sink(acc);
            }
            return;
        }
        let rest_min: i64 = lower[i + 1..].iter().sum();
        let mut x = lower[i];
        while x + rest_min <= total {
            acc.push(x);
            compositions(total - x, lower, acc, sink);
            acc.pop();
            x += 1;
        }
    }

    fn level(
        p: &FixedPointChain,
        d: &[i64],
        m: usize,
        cur: &mut Vec<Vec<i64>>,
        out: &mut Vec<DegreeAssignment>,
    ) {
        let lower: Vec<i64> = p.levels[m]
            .iter()
            .map(|&k| {
                if m + 1 < p.levels.len() {
                    let j = p.levels[m + 1].iter().position(|&e| e == k).unwrap();
                    cur[m + 1][j]
                } else {
                    0
                }
            })
            .collect();
        let mut choices = Vec::new();
        compositions(d[m], &lower, &mut Vec::new(), &mut |c| choices.push(c.to_vec()));
        for c in choices {
            cur[m] = c;
            if m == 0 {
                out.push(DegreeAssignment { deg: cur.clone() });
            } else {
                level(p, d, m - 1, cur, out);
            }
        }
    }

    if nl == 0 {
        return out;
    }
    level(p, d, nl - 1, &mut cur, &mut out);
    out
}

/// Minimal level containing `k` (one-based), or `n`.
pub fn level_of(p: &FixedPointChain, k: usize) -> usize {
    p.level_of(k)
}

/// Multinomial `w!/(s_1!⋯s_n!)`.
pub fn multinomial(sizes: &[usize]) -> u128 {
    let mut acc: u128 = 1;
    let mut total: u128 = 0;
    for &s in sizes {
        for i in 1..=s as u128 {
            total += 1;
            acc = acc * total / i;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tp1_chains() {
        let f = FlagData::new(vec![1], 2).unwrap();
        let c = enumerate_fixed_points(&f);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].levels, vec![vec![0]]);
        assert_eq!(c[1].levels, vec![vec![1]]);
    }

    #[test]
    fn full_flag_and_grassmannian_counts() {
        assert_eq!(enumerate_fixed_points(&FlagData::new(vec![1, 2], 3).unwrap()).len(), 6);
        assert_eq!(enumerate_fixed_points(&FlagData::new(vec![2], 4).unwrap()).len(), 6);
    }

    #[test]
    fn assignment_examples() {
        let p = FixedPointChain::new(2, vec![vec![0]]).unwrap();
        assert_eq!(enumerate_degree_assignments(&p, &[3]).len(), 1);
        let ff = FixedPointChain::new(3, vec![vec![0], vec![0, 1]]).unwrap();
        let a = enumerate_degree_assignments(&ff, &[1, 1]);
        assert_eq!(a.len(), 2);
        assert!(a.iter().all(|x| x.is_admissible(&ff)));
        let g = FixedPointChain::new(4, vec![vec![0, 1]]).unwrap();
        assert_eq!(enumerate_degree_assignments(&g, &[2]).len(), 3);
    }

    #[test]
    fn levels() {
        let p = FixedPointChain::new(2, vec![vec![0]]).unwrap();
        assert_eq!(p.level_of(0), 1);
        assert_eq!(p.level_of(1), 2);
        let ff = FixedPointChain::new(3, vec![vec![1], vec![1, 2]]).unwrap();
        assert_eq!(ff.level_of(2), 2);
        assert_eq!(ff.level_of(0), 3);
    }

    #[test]
    fn vprime_values() {
        assert_eq!(FlagData::new(vec![1], 2).unwrap().vprime(), vec![2]);
        assert_eq!(FlagData::new(vec![1, 2], 3).unwrap().vprime(), vec![2, 2]);
        assert_eq!(FlagData::new(vec![1, 3], 5).unwrap().vprime(), vec![3, 4]);
    }

    #[test]
    fn rejects_decreasing() {
        assert!(FlagData::new(vec![2, 1], 3).is_err());
        assert!(FlagData::new(vec![1], 0).is_err());
    }
}
