//! Exact operator identities of the XXZ chain, each checked on dense matrices.

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ops::*;
use super::tensor::{charpoly, TensorOperator, TensorVector, WeightLabel};
use crate::error::{Error, Result};
use crate::kernel::scalar::random_q;
use crate::kernel::{ParamPoint, Q};
use crate::report::Report;

/// Names accepted by [`identity_suite`].
pub const IDENTITY_NAMES: [&str; 12] = [
    "commute",
    "weight",
    "ybe",
    "eprop",
    "hi-vs-pole",
    "cartan",
    "hamfirst-i",
    "hamfirst-ii",
    "trsxxz",
    "spectral",
    "spectral-literal",
    "all",
];

/// Two-body factor `C` multiplying products of nonlocal Hamiltonians.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectralKernel {
    /// `C(u) = (u - 1)²/((h u - h^{-1})(h^{-1} u - h))`.
    Corrected,
    /// `C(x) = (x - x^{-1})/((x h - (x h)^{-1})(x h^{-1} - h x^{-1}))`.
    Literal,
}

/// Evaluate the two-body factor at the ratio `u = a_α/a_β`.
pub fn spectral_kernel(u: &Q, h: &Q, kernel: SpectralKernel) -> Result<Q> {
    let hi = h.recip();
    let (num, den) = match kernel {
        SpectralKernel::Corrected => {
            let d = u - Q::one();
            (&d * &d, (h * u - &hi) * (&hi * u - h))
        }
        SpectralKernel::Literal => {
            let ui = u.recip();
            let xh = u * h;
            (u - &ui, (&xh - xh.recip()) * (u * &hi - h * &ui))
        }
    };
    if den.is_zero() {
        return Err(Error::Pole(format!("two-body factor at u = {u}")));
    }
    Ok(num / den)
}

fn check_sizes(n: usize, w: usize) -> Result<()> {
    if n == 0 || w == 0 || n > 3 || w > 4 || n.pow(w as u32) > 81 {
        return Err(Error::Range(format!("identity suite supports n ≤ 3, w ≤ 4, n^w ≤ 81 (got n = {n}, w = {w})")));
    }
    Ok(())
}

fn compare_ops(rep: &mut Report, label: &str, lhs: &TensorOperator, rhs: &TensorOperator) {
    if let Some((r, c, x, y)) = lhs.first_difference(rhs) {
        rep.push_residual(vec![r as i64, c as i64], &(&x - &y));
        rep.fail(format!("{label}: entry ({r}, {c}) differs: {x} vs {y}"));
    }
}

fn compare_vecs(rep: &mut Report, label: &str, lhs: &TensorVector, rhs: &TensorVector) {
    if let Some(k) = (0..lhs.dim()).find(|&k| lhs.coeffs[k] != rhs.coeffs[k]) {
        let d = &lhs.coeffs[k] - &rhs.coeffs[k];
        rep.push_residual(vec![k as i64], &d);
        rep.fail(format!("{label}: component {k} differs by {d}"));
    }
}

fn fresh_points(rng: &mut ChaCha8Rng, count: usize, avoid: &[Q]) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::new();
    while out.len() < count {
        let x = random_q(rng);
        let bad = avoid.iter().chain(out.iter()).any(|y| y == &x || y == &(-x.clone()));
        if !bad {
            out.push(x);
        }
    }
    out
}

fn left_pairing(params: &ParamPoint, n: usize, w: usize) -> Result<TensorVector> {
    e_hbar_full(params, n, w)
}

fn check_commute(params: &ParamPoint, n: usize, seed: u64, rep: &mut Report) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs = fresh_points(&mut rng, 10, &params.a);
    let pairs: Vec<(Q, Q)> = xs.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect();
    let results: Vec<Result<(TensorOperator, TensorOperator)>> = pairs
        .par_iter()
        .map(|(x, y)| {
            let tx = transfer_matrix(x, params, n)?;
            let ty = transfer_matrix(y, params, n)?;
            Ok((tx.mul(&ty)?, ty.mul(&tx)?))
        })
        .collect();
    for (k, r) in results.into_iter().enumerate() {
        let (l, r) = r?;
        compare_ops(rep, &format!("[T(x),T(y)] pair {k}"), &l, &r);
    }
    Ok(())
}

fn check_weight(params: &ParamPoint, n: usize, seed: u64, rep: &mut Report) -> Result<()> {
    let w = params.w();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs = fresh_points(&mut rng, w + 2, &params.a);
    let mut ops: Vec<(String, TensorOperator)> = vec![("T(x)".into(), transfer_matrix(&xs[0], params, n)?)];
    let (c, hs) = pole_extract(params, n, &xs[1..])?;
    ops.push(("C".into(), c));
    for (i, h) in hs.into_iter().enumerate() {
        ops.push((format!("H_{}", i + 1), h));
    }
    for i in 0..w {
        ops.push((format!("K_{}^(q)", i + 1), qkz_operator(i, params, n, true)?));
        ops.push((format!("K_{}^(1)", i + 1), qkz_operator(i, params, n, false)?));
    }
    for (name, op) in &ops {
        if !op.preserves_weights() {
            rep.fail(format!("{name} mixes weight blocks"));
        }
    }
    let mut total = TensorVector::zeros(n, w);
    let v = TensorVector {
        n,
        w,
        coeffs: (0..n.pow(w as u32)).map(|_| random_q(&mut rng)).collect(),
    };
    for wt in WeightLabel::all(n, w) {
        total = total.add(&v.project(&wt));
    }
    compare_vecs(rep, "weight decomposition", &total, &v);
    Ok(())
}

fn check_ybe(params: &ParamPoint, n: usize, seed: u64, rep: &mut Report) -> Result<()> {
    let h = &params.h_half;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..3 {
        let us = fresh_points(&mut rng, 3, &[]);
        let r = |i: usize, j: usize| r_on_sites(n, 3, i, j, &(&us[i] / &us[j]), h, RForm::R);
        let lhs = r(0, 1)?.mul(&r(0, 2)?)?.mul(&r(1, 2)?)?;
        let rhs = r(1, 2)?.mul(&r(0, 2)?)?.mul(&r(0, 1)?)?;
        compare_ops(rep, &format!("Yang-Baxter trial {trial}"), &lhs, &rhs);
        let u = &us[0] / &us[1];
        let unit = r_on_sites(n, 2, 0, 1, &u, h, RForm::R)?.mul(&r_on_sites(n, 2, 1, 0, &u.recip(), h, RForm::R)?)?;
        compare_ops(rep, &format!("unitarity trial {trial}"), &unit, &TensorOperator::identity(n, 2));
    }
    Ok(())
}

fn check_eprop(params: &ParamPoint, n: usize, seed: u64, rep: &mut Report) -> Result<()> {
    let w = params.w();
    let h = &params.h_half;
    let e = left_pairing(params, n, w)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 1..w {
        let u = fresh_points(&mut rng, 1, &[Q::one()])[0].clone();
        let ph = r_on_sites(n, w, i - 1, i, &u, h, RForm::Phbar)?;
        compare_vecs(rep, &format!("P^h_{{{i},{}}} E", i + 1), &ph.apply(&e), &e);
        let p = r_on_sites(n, w, i - 1, i, &u, h, RForm::P)?;
        let r = r_on_sites(n, w, i - 1, i, &u, h, RForm::R)?;
        compare_vecs(rep, &format!("R_{{{i},{}}} E", i + 1), &r.apply(&e), &p.apply(&e));
        let rl = r_on_sites(n, w, i, i - 1, &u, h, RForm::R)?;
        compare_vecs(rep, &format!("E R_{{{},{i}}}", i + 1), &rl.apply_left(&e), &p.apply_left(&e));
    }
    Ok(())
}

fn check_hi_vs_pole(params: &ParamPoint, n: usize, seed: u64, rep: &mut Report) -> Result<()> {
    let w = params.w();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs = fresh_points(&mut rng, 2 * (w + 1) + 1, &params.a);
    let (c1, h1) = pole_extract(params, n, &xs[..=w])?;
    let (c2, h2) = pole_extract(params, n, &xs[w + 1..2 * (w + 1)])?;
    compare_ops(rep, "C sample independence", &c1, &c2);
    for i in 0..w {
        compare_ops(rep, &format!("H_{} sample independence", i + 1), &h1[i], &h2[i]);
        let direct = nonlocal_hamiltonian(i, params, n)?;
        compare_ops(rep, &format!("H_{} pole vs qKZ", i + 1), &h1[i], &direct);
    }
    let hold = &xs[2 * (w + 1)];
    let recon = pole_expansion_at(hold, &c1, &h1, params)?;
    compare_ops(rep, "holdout reconstruction", &recon, &transfer_matrix(hold, params, n)?);
    Ok(())
}

fn hamiltonian_sum(params: &ParamPoint, n: usize) -> Result<TensorOperator> {
    let w = params.w();
    let hs: Vec<Result<TensorOperator>> = (0..w).into_par_iter().map(|i| nonlocal_hamiltonian(i, params, n)).collect();
    let mut acc = TensorOperator::zeros(n, w);
    for h in hs {
        acc = acc.add(&h?)?;
    }
    Ok(acc)
}

fn check_cartan(params: &ParamPoint, n: usize, rep: &mut Report) -> Result<()> {
    let lhs = hamiltonian_sum(params, n)?;
    compare_ops(rep, "sum of H_i vs Cartan form", &lhs, &cartan_sum(params, n, params.w())?);
    Ok(())
}

fn check_hamfirst_i(params: &ParamPoint, n: usize, rep: &mut Report) -> Result<()> {
    let w = params.w();
    let e = left_pairing(params, n, w)?;
    for i in 0..w {
        let kq = qkz_operator(i, params, n, true)?.apply_left(&e);
        let k1 = qkz_operator(i, params, n, false)?.apply_left(&e);
        compare_vecs(rep, &format!("E K_{} q-independence", i + 1), &kq, &k1);
    }
    Ok(())
}

fn check_hamfirst_ii(params: &ParamPoint, n: usize, rep: &mut Report) -> Result<()> {
    let w = params.w();
    let e = left_pairing(params, n, w)?;
    let mut lhs = TensorVector::zeros(n, w);
    for i in 0..w {
        let c = hamiltonian_norm(i, &params.a, &params.h_half)?;
        lhs = lhs.add(&qkz_operator(i, params, n, false)?.apply_left(&e).scale(&c));
    }
    let rhs = cartan_sum(params, n, w)?.apply_left(&e);
    compare_vecs(rep, "hamfirst-ii", &lhs, &rhs);
    Ok(())
}

fn check_trsxxz(params: &ParamPoint, n: usize, rep: &mut Report) -> Result<()> {
    let w = params.w();
    let e = left_pairing(params, n, w)?;
    let h = &params.h_half;
    for i1 in 0..w {
        for i2 in i1 + 1..w {
            let lhs = nonlocal_hamiltonian(i2, params, n)?
                .apply_left(&nonlocal_hamiltonian(i1, params, n)?.apply_left(&e));
            let mut shift = vec![0i64; w];
            shift[i2] = 1;
            let shifted = params.shifted(&shift)?;
            let c = hamiltonian_norm(i1, &params.a, h)? * hamiltonian_norm(i2, &params.a, h)?;
            let rhs = qkz_operator(i2, params, n, true)?
                .apply_left(&qkz_operator(i1, &shifted, n, true)?.apply_left(&e))
                .scale(&c);
            compare_vecs(rep, &format!("E H_{} H_{}", i1 + 1, i2 + 1), &lhs, &rhs);
        }
    }
    Ok(())
}

fn ordered_product(params: &ParamPoint, hs: &[TensorOperator], k: usize, kernel: SpectralKernel) -> Result<TensorOperator> {
    let w = params.w();
    let n = hs[0].n;
    let mut acc = TensorOperator::zeros(n, w);
    for subset in itertools::Itertools::combinations(0..w, k) {
        let mut c = Q::one();
        for (m, &im) in subset.iter().enumerate() {
            for &il in &subset[m + 1..] {
                c *= spectral_kernel(&(&params.a[im] / &params.a[il]), &params.h_half, kernel)?;
            }
        }
        let mut prod = TensorOperator::identity(n, w);
        for &i in &subset {
            prod = prod.mul(&hs[i])?;
        }
        acc = acc.add(&prod.scale(&c))?;
    }
    Ok(acc)
}

fn block_charpolys(params: &ParamPoint, n: usize, k: usize, kernel: SpectralKernel) -> Result<Vec<Vec<Q>>> {
    let w = params.w();
    let hs = (0..w).map(|i| nonlocal_hamiltonian(i, params, n)).collect::<Result<Vec<_>>>()?;
    let op = ordered_product(params, &hs, k, kernel)?;
    Ok(WeightLabel::all(n, w)
        .par_iter()
        .map(|wt| charpoly(&op.restrict(&wt.indices(n, w))))
        .collect())
}

fn check_spectral(params: &ParamPoint, n: usize, seed: u64, kernel: SpectralKernel, rep: &mut Report) -> Result<()> {
    let w = params.w();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5bec);
    let other = loop {
        let a = crate::kernel::scalar::random_distinct(&mut rng, w);
        let p = params.with_a(a);
        if p.validate().is_ok() {
            break p;
        }
    };
    let blocks = WeightLabel::all(n, w);
    for k in 1..=w {
        let pair: Vec<Result<Vec<Vec<Q>>>> =
            [params, &other].par_iter().map(|p| block_charpolys(p, n, k, kernel)).collect();
        let mut it = pair.into_iter();
        let (first, second) = (it.next().expect("two points")?, it.next().expect("two points")?);
        for (b, (c1, c2)) in blocks.iter().zip(first.iter().zip(&second)) {
            if let Some(j) = (0..c1.len()).find(|&j| c1[j] != c2[j]) {
                rep.push_residual(vec![k as i64, j as i64], &(&c1[j] - &c2[j]));
                rep.fail(format!("k = {k}, weight {:?}: characteristic polynomial depends on a", b.s));
            }
        }
    }
    Ok(())
}

/// Run one named identity (or `all`) for local dimension `n` at `params`
/// (which fixes `w` and must carry `n` twist parameters).
pub fn identity_suite(name: &str, n: usize, params: &ParamPoint, seed: u64) -> Result<Report> {
    let w = params.w();
    check_sizes(n, w)?;
    if params.zeta.len() != n {
        return Err(Error::Invalid(format!("{} twist parameters for n = {n}", params.zeta.len())));
    }
    if name == "all" {
        let names: Vec<&str> = IDENTITY_NAMES
            .iter()
            .copied()
            .filter(|x| *x != "all" && *x != "spectral-literal")
            .collect();
        let reps: Vec<Result<Report>> = names.par_iter().map(|nm| identity_suite(nm, n, params, seed)).collect();
        let mut rep = Report::new(format!("xxz-all[n={n},w={w}]"), seed);
        for r in reps {
            rep.absorb(&r?);
        }
        return Ok(rep);
    }
    let mut rep = Report::new(format!("xxz-{name}[n={n},w={w}]"), seed);
    match name {
        "commute" => check_commute(params, n, seed, &mut rep)?,
        "weight" => check_weight(params, n, seed, &mut rep)?,
        "ybe" => check_ybe(params, n, seed, &mut rep)?,
        "eprop" => check_eprop(params, n, seed, &mut rep)?,
        "hi-vs-pole" => check_hi_vs_pole(params, n, seed, &mut rep)?,
        "cartan" => check_cartan(params, n, &mut rep)?,
        "hamfirst-i" => check_hamfirst_i(params, n, &mut rep)?,
        "hamfirst-ii" => check_hamfirst_ii(params, n, &mut rep)?,
        "trsxxz" => check_trsxxz(params, n, &mut rep)?,
        "spectral" => check_spectral(params, n, seed, SpectralKernel::Corrected, &mut rep)?,
        "spectral-literal" => check_spectral(params, n, seed, SpectralKernel::Literal, &mut rep)?,
        other => return Err(Error::Invalid(format!("unknown identity {other:?}"))),
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};
    use crate::xxz::random_params;

    #[test]
    fn all_identities_small() {
        for (n, w) in [(2, 2), (2, 3)] {
            let p = random_params(n, w, 7).unwrap();
            for name in IDENTITY_NAMES.iter().filter(|x| **x != "all" && **x != "spectral-literal") {
                let r = identity_suite(name, n, &p, 3).unwrap();
                assert!(r.passed(), "{name} n={n} w={w}: {:?}", r.notes);
            }
        }
    }

    #[test]
    fn literal_spectral_kernel_fails() {
        let p = random_params(2, 3, 11).unwrap();
        assert!(!identity_suite("spectral-literal", 2, &p, 3).unwrap().passed());
    }

    #[test]
    fn spectral_example_points() {
        let p = ParamPoint::new(rat(1, 2), int(2), vec![int(2), int(3), int(5)], vec![int(1), int(5)], 0).unwrap();
        let q = p.with_a(vec![int(7), int(11), int(13)]);
        let a = block_charpolys(&p, 2, 1, SpectralKernel::Corrected).unwrap();
        let b = block_charpolys(&q, 2, 1, SpectralKernel::Corrected).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hamfirst_ii_named_example() {
        let p = ParamPoint::new(rat(1, 2), int(2), vec![int(2), int(3)], vec![int(1), int(5)], 0).unwrap();
        assert!(identity_suite("hamfirst-ii", 2, &p, 0).unwrap().passed());
        let sum = hamiltonian_sum(&p, 2).unwrap();
        let blk = sum.restrict(&WeightLabel::new(vec![1, 1], 2).unwrap().indices(2, 2));
        assert_eq!(blk, vec![vec![int(6), int(0)], vec![int(0), int(6)]]);
    }

    #[test]
    fn oversized_rejected() {
        let p = random_params(2, 5, 1).unwrap();
        assert!(matches!(identity_suite("commute", 2, &p, 0), Err(Error::Range(_))));
    }
}
