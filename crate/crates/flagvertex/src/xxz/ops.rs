//! R-matrices, transfer matrix, qKZ operators, nonlocal Hamiltonians, the
//! `E^ℏ` vector and the `Υ` pairing.
//!
//! Spectral arguments are multiplicative ratios `u` that enter linearly in the
//! equivariant parameters: the R-matrix between sites carrying `a_i` and `a_j`
//! is evaluated at `u = a_i/a_j`, and the transfer matrix at `u = x/a_k`.
//! [`r_matrix`] takes the symmetric variable `x` with `u = x²`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::tensor::{inversions, multi_index, solve_linear, TensorOperator, TensorVector, WeightLabel};
use crate::error::{Error, Result};
use crate::kernel::{qpow, ParamPoint, Q};

/// Which two-site matrix to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RForm {
    /// `R(u) = P + f(u)(I - P^ℏ)`, `f(u) = (u - 1)/(h u - h^{-1})`.
    R,
    /// `R̃(u) = R(u)/f(u) = I - P^ℏ + ((h u - h^{-1})/(u - 1)) P`.
    Rtilde,
    /// Plain permutation.
    P,
    /// `P^ℏ = Σ_a e_aa⊗e_aa + h Σ_{a>b} e_ab⊗e_ba + h^{-1} Σ_{a<b} e_ab⊗e_ba`.
    Phbar,
}

fn perm_matrix(n: usize, h: &Q) -> Vec<Q> {
    let nn = n * n;
    let mut m = vec![Q::zero(); nn * nn];
    let hi = h.recip();
    for a in 0..n {
        for b in 0..n {
            let c = match a.cmp(&b) {
                std::cmp::Ordering::Equal => Q::one(),
                std::cmp::Ordering::Greater => h.clone(),
                std::cmp::Ordering::Less => hi.clone(),
            };
            m[(a * n + b) * nn + (b * n + a)] = c;
        }
    }
    m
}

/// `f(u) = (u - 1)/(h u - h^{-1})`.
pub fn r_weight(u: &Q, h: &Q) -> Result<Q> {
    let den = h * u - h.recip();
    if den.is_zero() {
        return Err(Error::Pole(format!("h u = h^-1 at u = {u}")));
    }
    Ok((u - Q::one()) / den)
}

/// Two-site matrix (row-major, `n²×n²`, index `a*n+b`) at the multiplicative argument `u`.
pub fn r_matrix_u(u: &Q, n: usize, h: &Q, form: RForm) -> Result<Vec<Q>> {
    let nn = n * n;
    let p = perm_matrix(n, &Q::one());
    let ph = perm_matrix(n, h);
    let id = |k: usize| if k / nn == k % nn { Q::one() } else { Q::zero() };
    Ok(match form {
        RForm::P => p,
        RForm::Phbar => ph,
        RForm::R => {
            let f = r_weight(u, h)?;
            (0..nn * nn).map(|k| &p[k] + &f * (id(k) - &ph[k])).collect()
        }
        RForm::Rtilde => {
            let den = u - Q::one();
            if den.is_zero() {
                return Err(Error::Pole("u = 1".into()));
            }
            let g = (h * u - h.recip()) / den;
            (0..nn * nn).map(|k| id(k) - &ph[k] + &g * &p[k]).collect()
        }
    })
}

/// Two-site matrix at the symmetric variable `x` (`u = x²`).
pub fn r_matrix(x: &Q, n: usize, h: &Q, form: RForm) -> Result<Vec<Q>> {
    r_matrix_u(&(x * x), n, h, form)
}

/// `R_{i,j}(u)` on `w` sites with site `i` first.
pub fn r_on_sites(n: usize, w: usize, i: usize, j: usize, u: &Q, h: &Q, form: RForm) -> Result<TensorOperator> {
    Ok(TensorOperator::two_site(n, w, i, j, &r_matrix_u(u, n, h, form)?))
}

fn zeta_diag(n: usize, params: &ParamPoint) -> Result<Vec<Q>> {
    if params.zeta.len() != n {
        return Err(Error::Invalid(format!(
            "{} twist parameters supplied for n = {n}",
            params.zeta.len()
        )));
    }
    let mut z = vec![Q::zero(); n * n];
    for a in 0..n {
        z[a * n + a] = params.zeta[a].clone();
    }
    Ok(z)
}

/// `T(x) = Tr_0(R̃_{0w}(x/a_w)…R̃_{01}(x/a_1) Z^{(0)})`, auxiliary space first.
pub fn transfer_matrix(x: &Q, params: &ParamPoint, n: usize) -> Result<TensorOperator> {
    let w = params.a.len();
    let h = &params.h_half;
    let big = w + 1;
    let mut m = TensorOperator::one_site(n, big, 0, &zeta_diag(n, params)?);
    for k in 0..w {
        let r = r_on_sites(n, big, 0, k + 1, &(x / &params.a[k]), h, RForm::Rtilde)?;
        m = r.mul(&m)?;
    }
    m.trace_first_site()
}

/// `K_i^{(q)} = R_{i,i-1}(q a_i/a_{i-1})…R_{i,1}(q a_i/a_1) Z^{(i)} R_{i,w}(a_i/a_w)…R_{i,i+1}(a_i/a_{i+1})`.
///
/// `i` is zero-based; `q_shift = false` gives `K_i^{(1)}`.
pub fn qkz_operator(i: usize, params: &ParamPoint, n: usize, q_shift: bool) -> Result<TensorOperator> {
    let w = params.a.len();
    if i >= w {
        return Err(Error::Range(format!("site {} outside 1..={w}", i + 1)));
    }
    let h = &params.h_half;
    let a = &params.a;
    let qq = if q_shift { params.q() } else { Q::one() };
    let mut m = TensorOperator::identity(n, w);
    for j in (0..i).rev() {
        m = m.mul(&r_on_sites(n, w, i, j, &(&qq * &a[i] / &a[j]), h, RForm::R)?)?;
    }
    m = m.mul(&TensorOperator::one_site(n, w, i, &zeta_diag(n, params)?))?;
    for j in (i + 1..w).rev() {
        m = m.mul(&r_on_sites(n, w, i, j, &(&a[i] / &a[j]), h, RForm::R)?)?;
    }
    Ok(m)
}

/// `Π_{j≠i} (h a_i - h^{-1} a_j)/(a_i - a_j)`.
pub fn hamiltonian_norm(i: usize, a: &[Q], h: &Q) -> Result<Q> {
    let mut c = Q::one();
    for (j, aj) in a.iter().enumerate() {
        if j != i {
            c *= crate::trs::hbar_ratio(&a[i], aj, h)?;
        }
    }
    Ok(c)
}

/// `H_i = Π_{j≠i}(h a_i - h^{-1} a_j)/(a_i - a_j) · K_i^{(1)}`.
pub fn nonlocal_hamiltonian(i: usize, params: &ParamPoint, n: usize) -> Result<TensorOperator> {
    let c = hamiltonian_norm(i, &params.a, &params.h_half)?;
    Ok(qkz_operator(i, params, n, false)?.scale(&c))
}

/// Coefficient of `H_k` in the pole expansion at `x`: `((h - h^{-1})/2)(x + a_k)/(x - a_k)`.
fn pole_weight(x: &Q, ak: &Q, h: &Q) -> Result<Q> {
    let den = x - ak;
    if den.is_zero() {
        return Err(Error::Pole("sample at a pole".into()));
    }
    Ok((h - h.recip()) / Q::from_integer(2.into()) * (x + ak) / den)
}

/// Solve `T(x_s) = C + Σ_k pole_weight(x_s, a_k) H_k` for `C, H_1..H_w` from `w+1` samples.
pub fn pole_extract(params: &ParamPoint, n: usize, samples: &[Q]) -> Result<(TensorOperator, Vec<TensorOperator>)> {
    let w = params.a.len();
    if samples.len() != w + 1 {
        return Err(Error::Shape(format!("{} samples, need {}", samples.len(), w + 1)));
    }
    let h = &params.h_half;
    let mut rows = Vec::with_capacity(w + 1);
    for x in samples {
        let mut row = vec![Q::one()];
        for ak in &params.a {
            row.push(pole_weight(x, ak, h)?);
        }
        rows.push(row);
    }
    let ident: Vec<Vec<Q>> = (0..=w)
        .map(|r| (0..=w).map(|c| if r == c { Q::one() } else { Q::zero() }).collect())
        .collect();
    let inv = solve_linear(&rows, &ident)?;
    let ts = samples
        .iter()
        .map(|x| transfer_matrix(x, params, n))
        .collect::<Result<Vec<_>>>()?;
    let combine = |k: usize| -> Result<TensorOperator> {
        let mut acc = TensorOperator::zeros(n, w);
        for (s, t) in ts.iter().enumerate() {
            acc = acc.add(&t.scale(&inv[k][s]))?;
        }
        Ok(acc)
    };
    let c = combine(0)?;
    let hs = (1..=w).map(combine).collect::<Result<Vec<_>>>()?;
    Ok((c, hs))
}

/// Re-evaluate the pole expansion at `x`.
pub fn pole_expansion_at(
    x: &Q,
    c: &TensorOperator,
    hs: &[TensorOperator],
    params: &ParamPoint,
) -> Result<TensorOperator> {
    let mut acc = c.clone();
    for (hk, ak) in hs.iter().zip(&params.a) {
        acc = acc.add(&hk.scale(&pole_weight(x, ak, &params.h_half)?))?;
    }
    Ok(acc)
}

/// `E^ℏ = Σ_J h^{inv(J)} E_J` over the block of `weight` (`h = ℏ^{1/2}`).
pub fn e_hbar(weight: &WeightLabel, params: &ParamPoint, n: usize, w: usize) -> Result<TensorVector> {
    if weight.s.len() != n || weight.s.iter().sum::<usize>() != w {
        return Err(Error::Weight(format!("weight {:?} for n = {n}, w = {w}", weight.s)));
    }
    let mut v = TensorVector::zeros(n, w);
    for i in weight.indices(n, w) {
        v.coeffs[i] = qpow(&params.h_half, inversions(&multi_index(n, w, i)) as i64)?;
    }
    Ok(v)
}

/// `E^ℏ` summed over all weight blocks.
pub fn e_hbar_full(params: &ParamPoint, n: usize, w: usize) -> Result<TensorVector> {
    let mut v = TensorVector::zeros(n, w);
    for i in 0..v.dim() {
        v.coeffs[i] = qpow(&params.h_half, inversions(&multi_index(n, w, i)) as i64)?;
    }
    Ok(v)
}

/// `Υ = ⟨E^ℏ, v⟩` for `v` supported on a single weight block.
pub fn upsilon(v: &TensorVector, params: &ParamPoint) -> Result<Q> {
    let ws = v.support_weights();
    if ws.len() > 1 {
        return Err(Error::Weight(format!("vector spans {} weight blocks", ws.len())));
    }
    Ok(e_hbar_full(params, v.n, v.w)?.dot(v))
}

/// `Σ_a ζ_a (h^{S_a} - h^{-S_a})/(h - h^{-1})` as a diagonal operator.
pub fn cartan_sum(params: &ParamPoint, n: usize, w: usize) -> Result<TensorOperator> {
    let h = &params.h_half;
    let den = h - h.recip();
    if den.is_zero() {
        return Err(Error::Pole("h = h^-1".into()));
    }
    if params.zeta.len() != n {
        return Err(Error::Invalid(format!("{} twist parameters for n = {n}", params.zeta.len())));
    }
    let mut m = TensorOperator::zeros(n, w);
    for i in 0..m.dim() {
        let s = super::tensor::weight_of(n, &multi_index(n, w, i));
        let mut v = Q::zero();
        for (a, &sa) in s.iter().enumerate() {
            let e = sa as i64;
            v += &params.zeta[a] * (qpow(h, e)? - qpow(h, -e)?) / &den;
        }
        m.set(i, i, v);
    }
    Ok(m)
}

/// Weight projector onto one block.
pub fn weight_projector(weight: &WeightLabel, n: usize, w: usize) -> TensorOperator {
    let idx = weight.indices(n, w);
    let mut m = TensorOperator::zeros(n, w);
    for i in idx {
        m.set(i, i, Q::one());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    fn pp(a: Vec<Q>, zeta: Vec<Q>) -> ParamPoint {
        ParamPoint::new(rat(1, 2), int(2), a, zeta, 2).unwrap()
    }

    #[test]
    fn r_matrix_example() {
        let r = r_matrix(&int(3), 2, &int(2), RForm::R).unwrap();
        let at = |row: usize, col: usize| r[row * 4 + col].clone();
        assert_eq!(at(0, 0), int(1));
        assert_eq!(at(1, 1), rat(16, 35));
        assert_eq!(at(2, 2), rat(16, 35));
        assert_eq!(at(3, 3), int(1));
        assert_eq!(at(1, 2), rat(27, 35));
        assert_eq!(at(2, 1), rat(3, 35));
    }

    #[test]
    fn permutation_squares_to_identity() {
        let p = TensorOperator::two_site(3, 2, 0, 1, &r_matrix_u(&int(1), 3, &int(2), RForm::P).unwrap());
        assert_eq!(p.mul(&p).unwrap(), TensorOperator::identity(3, 2));
    }

    #[test]
    fn rtilde_is_rescaled_r() {
        let h = rat(3, 2);
        for u in [rat(5, 7), int(3), rat(-2, 9), int(11), rat(13, 4)] {
            let r = r_matrix_u(&u, 2, &h, RForm::R).unwrap();
            let rt = r_matrix_u(&u, 2, &h, RForm::Rtilde).unwrap();
            let f = r_weight(&u, &h).unwrap();
            for k in 0..16 {
                assert_eq!(&rt[k] * &f, r[k]);
            }
        }
    }

    #[test]
    fn single_site_cases() {
        let p = pp(vec![int(2)], vec![int(1), int(5)]);
        let k = qkz_operator(0, &p, 2, true).unwrap();
        assert_eq!(k, TensorOperator::diagonal(2, 1, |j| if j[0] == 0 { int(1) } else { int(5) }));
        assert_eq!(nonlocal_hamiltonian(0, &p, 2).unwrap(), k);
        let p1 = ParamPoint::new(rat(1, 2), int(2), vec![int(2)], vec![int(7)], 2).unwrap();
        let t = transfer_matrix(&int(5), &p1, 1).unwrap();
        let f = r_weight(&rat(5, 2), &int(2)).unwrap();
        assert_eq!(t.get(0, 0), &(int(7) / f));
    }

    #[test]
    fn k1_two_sites() {
        let p = pp(vec![int(2), int(3)], vec![int(1), int(5)]);
        let k = qkz_operator(0, &p, 2, false).unwrap();
        let z = TensorOperator::one_site(2, 2, 0, &[int(1), int(0), int(0), int(5)]);
        let r = r_on_sites(2, 2, 0, 1, &rat(2, 3), &int(2), RForm::R).unwrap();
        assert_eq!(k, z.mul(&r).unwrap());
    }

    #[test]
    fn e_hbar_small() {
        let p = pp(vec![int(2), int(3)], vec![int(1), int(5)]);
        let wt = WeightLabel::new(vec![1, 1], 2).unwrap();
        let e = e_hbar(&wt, &p, 2, 2).unwrap();
        assert_eq!(e.coeffs, vec![int(0), int(1), int(2), int(0)]);
        assert_eq!(upsilon(&e, &p).unwrap(), int(1) + p.hbar());
        let mixed = TensorVector::basis(2, 2, &[0, 0]).add(&TensorVector::basis(2, 2, &[0, 1]));
        assert!(upsilon(&mixed, &p).is_err());
    }
}
