//! Dense exact operators and vectors on `(ℂ^n)^{⊗w}`.
//!
//! Basis vectors are multi-indices `J ∈ {0..n-1}^w` (zero-based internally)
//! ordered lexicographically with site 0 most significant.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{format_q, Q};

/// Multi-index of a flat basis position.
pub fn multi_index(n: usize, w: usize, mut idx: usize) -> Vec<usize> {
    let mut j = vec![0; w];
    for k in (0..w).rev() {
        j[k] = idx % n;
        idx /= n;
    }
    j
}

/// Flat position of a multi-index.
pub fn flat_index(n: usize, j: &[usize]) -> usize {
    j.iter().fold(0, |acc, &x| acc * n + x)
}

/// Occupation numbers `(s_1..s_n)` of a multi-index.
pub fn weight_of(n: usize, j: &[usize]) -> Vec<usize> {
    let mut s = vec![0; n];
    for &x in j {
        s[x] += 1;
    }
    s
}

/// Number of inversions `#{(k, l): k < l, J_k > J_l}`.
pub fn inversions(j: &[usize]) -> usize {
    let mut c = 0;
    for k in 0..j.len() {
        for l in k + 1..j.len() {
            if j[k] > j[l] {
                c += 1;
            }
        }
    }
    c
}

/// Weight label `(s_1..s_n)` with `Σ s_a = w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightLabel {
    pub s: Vec<usize>,
}

impl WeightLabel {
    /// Validated constructor.
    pub fn new(s: Vec<usize>, w: usize) -> Result<Self> {
        if s.iter().sum::<usize>() != w {
            return Err(Error::Weight(format!("weight {s:?} does not sum to {w}")));
        }
        Ok(WeightLabel { s })
    }

    /// All weights for `n` colours on `w` sites.
    pub fn all(n: usize, w: usize) -> Vec<WeightLabel> {
        let mut out = Vec::new();
        let mut cur = vec![0; n];
        fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<WeightLabel>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(WeightLabel { s: cur.clone() });
                return;
            }
            for k in 0..=left {
                cur[i] = k;
                rec(i + 1, left - k, cur, out);
            }
        }
        if n > 0 {
            rec(0, w, &mut cur, &mut out);
        }
        out
    }

    /// Block dimension `w!/(s_1!…s_n!)`.
    pub fn block_dim(&self) -> usize {
        crate::quiver::multinomial(&self.s) as usize
    }

    /// Flat basis positions in this weight block, in increasing order.
    pub fn indices(&self, n: usize, w: usize) -> Vec<usize> {
        (0..n.pow(w as u32))
            .filter(|&i| weight_of(n, &multi_index(n, w, i)) == self.s)
            .collect()
    }
}

/// A vector in `(ℂ^n)^{⊗w}` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorVector {
    pub n: usize,
    pub w: usize,
    pub coeffs: Vec<Q>,
}

impl TensorVector {
    pub fn zeros(n: usize, w: usize) -> Self {
        TensorVector {
            n,
            w,
            coeffs: vec![Q::zero(); n.pow(w as u32)],
        }
    }

    /// Basis vector `E_J`.
    pub fn basis(n: usize, w: usize, j: &[usize]) -> Self {
        let mut v = Self::zeros(n, w);
        v.coeffs[flat_index(n, j)] = Q::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add(&self, o: &TensorVector) -> TensorVector {
        TensorVector {
            n: self.n,
            w: self.w,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> TensorVector {
        TensorVector {
            n: self.n,
            w: self.w,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn dot(&self, o: &TensorVector) -> Q {
        self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a * b).sum()
    }

    /// Weights carrying a nonzero coefficient.
    pub fn support_weights(&self) -> Vec<WeightLabel> {
        let mut ws: Vec<WeightLabel> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| WeightLabel {
                s: weight_of(self.n, &multi_index(self.n, self.w, i)),
            })
            .collect();
        ws.sort();
        ws.dedup();
        ws
    }

    /// Component in one weight block.
    pub fn project(&self, wt: &WeightLabel) -> TensorVector {
        let mut v = Self::zeros(self.n, self.w);
        for i in wt.indices(self.n, self.w) {
            v.coeffs[i] = self.coeffs[i].clone();
        }
        v
    }

    /// JSON form: `[{"index": [..one-based..], "value": "p/q"}]` for nonzero entries.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let j: Vec<usize> = multi_index(self.n, self.w, i).iter().map(|x| x + 1).collect();
                serde_json::json!({"index": j, "value": format_q(c)})
            })
            .collect();
        serde_json::json!({"n": self.n, "w": self.w, "entries": entries})
    }
}

/// Dense exact operator on `(ℂ^n)^{⊗w}`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorOperator {
    pub n: usize,
    pub w: usize,
    dim: usize,
    data: Vec<Q>,
}

impl TensorOperator {
    pub fn zeros(n: usize, w: usize) -> Self {
        let dim = n.pow(w as u32);
        TensorOperator {
            n,
            w,
            dim,
            data: vec![Q::zero(); dim * dim],
        }
    }

    pub fn identity(n: usize, w: usize) -> Self {
        let mut m = Self::zeros(n, w);
        for i in 0..m.dim {
            m.data[i * m.dim + i] = Q::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.dim + c] = v;
    }

    /// Diagonal operator from per-basis-vector values.
    pub fn diagonal(n: usize, w: usize, f: impl Fn(&[usize]) -> Q) -> Self {
        let mut m = Self::zeros(n, w);
        for i in 0..m.dim {
            m.data[i * m.dim + i] = f(&multi_index(n, w, i));
        }
        m
    }

    /// Embed an `n²×n²` matrix (row-major, index `a*n+b`) acting on sites `(i, j)`.
    pub fn two_site(n: usize, w: usize, i: usize, j: usize, m: &[Q]) -> Self {
        assert!(i != j && i < w && j < w, "two distinct sites");
        let mut out = Self::zeros(n, w);
        for col in 0..out.dim {
            let jv = multi_index(n, w, col);
            let (a, b) = (jv[i], jv[j]);
            for a2 in 0..n {
                for b2 in 0..n {
                    let c = &m[(a2 * n + b2) * n * n + a * n + b];
                    if c.is_zero() {
                        continue;
                    }
                    let mut j2 = jv.clone();
                    j2[i] = a2;
                    j2[j] = b2;
                    let r = flat_index(n, &j2);
                    out.data[r * out.dim + col] += c;
                }
            }
        }
        out
    }

    /// Embed a single-site `n×n` matrix.
    pub fn one_site(n: usize, w: usize, i: usize, m: &[Q]) -> Self {
        let mut out = Self::zeros(n, w);
        for col in 0..out.dim {
            let jv = multi_index(n, w, col);
            for a2 in 0..n {
                let c = &m[a2 * n + jv[i]];
                if c.is_zero() {
                    continue;
                }
                let mut j2 = jv.clone();
                j2[i] = a2;
                let r = flat_index(n, &j2);
                out.data[r * out.dim + col] += c;
            }
        }
        out
    }

    fn check(&self, o: &TensorOperator) -> Result<()> {
        if self.n != o.n || self.w != o.w {
            return Err(Error::Shape(format!(
                "operator on (n={}, w={}) vs (n={}, w={})",
                self.n, self.w, o.n, o.w
            )));
        }
        Ok(())
    }

    /// Matrix product `self · o`, parallel over rows.
    pub fn mul(&self, o: &TensorOperator) -> Result<TensorOperator> {
        self.check(o)?;
        let d = self.dim;
        let rows: Vec<Vec<Q>> = (0..d)
            .into_par_iter()
            .map(|r| {
                let mut row = vec![Q::zero(); d];
                for k in 0..d {
                    let a = &self.data[r * d + k];
                    if a.is_zero() {
                        continue;
                    }
                    for (c, slot) in row.iter_mut().enumerate() {
                        let b = &o.data[k * d + c];
                        if !b.is_zero() {
                            *slot += a * b;
                        }
                    }
                }
                row
            })
            .collect();
        Ok(TensorOperator {
            n: self.n,
            w: self.w,
            dim: d,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn add(&self, o: &TensorOperator) -> Result<TensorOperator> {
        self.check(o)?;
        Ok(TensorOperator {
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
            ..self.clone()
        })
    }

    pub fn sub(&self, o: &TensorOperator) -> Result<TensorOperator> {
        self.check(o)?;
        Ok(TensorOperator {
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
            ..self.clone()
        })
    }

    pub fn scale(&self, c: &Q) -> TensorOperator {
        TensorOperator {
            data: self.data.iter().map(|a| a * c).collect(),
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> TensorOperator {
        let d = self.dim;
        let mut data = vec![Q::zero(); d * d];
        for r in 0..d {
            for c in 0..d {
                data[c * d + r] = self.data[r * d + c].clone();
            }
        }
        TensorOperator { data, ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// First entry where two operators differ.
    pub fn first_difference(&self, o: &TensorOperator) -> Option<(usize, usize, Q, Q)> {
        if self.n != o.n || self.w != o.w {
            return Some((0, 0, Q::zero(), Q::zero()));
        }
        let d = self.dim;
        (0..d * d)
            .find(|&k| self.data[k] != o.data[k])
            .map(|k| (k / d, k % d, self.data[k].clone(), o.data[k].clone()))
    }

    /// Operator applied to a vector.
    pub fn apply(&self, v: &TensorVector) -> TensorVector {
        let d = self.dim;
        let coeffs = (0..d)
            .map(|r| {
                let mut s = Q::zero();
                for c in 0..d {
                    let a = &self.data[r * d + c];
                    if !a.is_zero() && !v.coeffs[c].is_zero() {
                        s += a * &v.coeffs[c];
                    }
                }
                s
            })
            .collect();
        TensorVector {
            n: self.n,
            w: self.w,
            coeffs,
        }
    }

    /// Row vector times operator: `vᵀ·self`.
    pub fn apply_left(&self, v: &TensorVector) -> TensorVector {
        self.transpose().apply(v)
    }

    /// Trace over the first site of an operator on `w+1` sites.
    pub fn trace_first_site(&self) -> Result<TensorOperator> {
        if self.w == 0 {
            return Err(Error::Shape("no site to trace over".into()));
        }
        let mut out = TensorOperator::zeros(self.n, self.w - 1);
        let nd = out.dim;
        for a in 0..self.n {
            for r in 0..nd {
                for c in 0..nd {
                    let v = &self.data[(a * nd + r) * self.dim + a * nd + c];
                    if !v.is_zero() {
                        out.data[r * nd + c] += v;
                    }
                }
            }
        }
        Ok(out)
    }

    /// True iff no entry connects different weight blocks.
    pub fn preserves_weights(&self) -> bool {
        let d = self.dim;
        let wts: Vec<Vec<usize>> = (0..d).map(|i| weight_of(self.n, &multi_index(self.n, self.w, i))).collect();
        (0..d).all(|r| (0..d).all(|c| self.data[r * d + c].is_zero() || wts[r] == wts[c]))
    }

    /// Square submatrix on the given basis positions.
    pub fn restrict(&self, idx: &[usize]) -> Vec<Vec<Q>> {
        idx.iter()
            .map(|&r| idx.iter().map(|&c| self.data[r * self.dim + c].clone()).collect())
            .collect()
    }

    /// JSON form with one-based basis multi-indices.
    pub fn to_json(&self) -> serde_json::Value {
        let d = self.dim;
        let mut entries = Vec::new();
        for r in 0..d {
            for c in 0..d {
                let v = &self.data[r * d + c];
                if v.is_zero() {
                    continue;
                }
                let ri: Vec<usize> = multi_index(self.n, self.w, r).iter().map(|x| x + 1).collect();
                let ci: Vec<usize> = multi_index(self.n, self.w, c).iter().map(|x| x + 1).collect();
                entries.push(serde_json::json!({"row": ri, "col": ci, "value": format_q(v)}));
            }
        }
        serde_json::json!({"n": self.n, "w": self.w, "entries": entries})
    }
}

/// Characteristic polynomial `det(λ I - A)` (coefficients from `λ^0` up to the monic
/// leading one) by the Faddeev–LeVerrier recursion.
pub fn charpoly(a: &[Vec<Q>]) -> Vec<Q> {
    let k = a.len();
    let mut c = vec![Q::zero(); k + 1];
    c[k] = Q::one();
    let mut m = vec![vec![Q::zero(); k]; k];
    for step in 1..=k {
        let mut next = vec![vec![Q::zero(); k]; k];
        for r in 0..k {
            for col in 0..k {
                let mut s = Q::zero();
                for l in 0..k {
                    if !a[r][l].is_zero() && !m[l][col].is_zero() {
                        s += &a[r][l] * &m[l][col];
                    }
                }
                next[r][col] = s;
            }
            next[r][r] += &c[k - step + 1];
        }
        m = next;
        let mut tr = Q::zero();
        for r in 0..k {
            for l in 0..k {
                if !a[r][l].is_zero() && !m[l][r].is_zero() {
                    tr += &a[r][l] * &m[l][r];
                }
            }
        }
        c[k - step] = -tr / Q::from_integer((step as i64).into());
    }
    c
}

/// Solve `A x = b` over the rationals by Gaussian elimination (several right-hand sides).
pub fn solve_linear(a: &[Vec<Q>], b: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let k = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| row.iter().chain(rhs.iter()).cloned().collect())
        .collect();
    let width = m.first().map_or(0, |r| r.len());
    for col in 0..k {
        let piv = (col..k)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::SingularSystem(format!("no pivot in column {col}")))?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..width {
                    let sub = &f * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[k..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    #[test]
    fn index_round_trip() {
        for i in 0..27 {
            assert_eq!(flat_index(3, &multi_index(3, 3, i)), i);
        }
        assert_eq!(inversions(&[1, 0, 2, 0]), 3);
    }

    #[test]
    fn weights_and_blocks() {
        let all = WeightLabel::all(3, 3);
        assert_eq!(all.len(), 10);
        let total: usize = all.iter().map(|w| w.block_dim()).sum();
        assert_eq!(total, 27);
        for wt in &all {
            assert_eq!(wt.indices(3, 3).len(), wt.block_dim());
        }
    }

    #[test]
    fn charpoly_of_small_matrix() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        assert_eq!(charpoly(&a), vec![int(5), int(-5), int(1)]);
    }

    #[test]
    fn linear_solve() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let b = vec![vec![int(3)], vec![int(4)]];
        let x = solve_linear(&a, &b).unwrap();
        assert_eq!(x, vec![vec![int(1)], vec![int(1)]]);
        assert!(solve_linear(&[vec![int(1), int(2)], vec![int(2), int(4)]], &b).is_err());
    }

    #[test]
    fn identity_is_neutral_and_product_associative() {
        let m = TensorOperator::two_site(2, 3, 0, 2, &(0..16).map(|k| rat(k + 1, 3)).collect::<Vec<_>>());
        let id = TensorOperator::identity(2, 3);
        assert_eq!(m.mul(&id).unwrap(), m);
        let d = TensorOperator::diagonal(2, 3, |j| int(1 + j[1] as i64));
        let l = m.mul(&d).unwrap().mul(&m).unwrap();
        let r = m.mul(&d.mul(&m).unwrap()).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn partial_trace_of_product() {
        let a = TensorOperator::diagonal(2, 2, |j| int(1 + j[0] as i64 + 2 * j[1] as i64));
        let t = a.trace_first_site().unwrap();
        assert_eq!(t.get(0, 0), &int(3));
        assert_eq!(t.get(1, 1), &int(7));
    }
}
