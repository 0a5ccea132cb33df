//! Comparison of Bethe ansatz data with exact transfer-matrix blocks.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::field::{below, bits_for_digits, format_complex, solve_dense, sqrt_q, Field, Mp};
use super::{hamiltonian_eigenvalues, lambda_eval, lambda_limits, residuals, solve, BetheProblem, BetheSolution};
use crate::error::Result;
use crate::kernel::{int, rat, Q};
use crate::report::Report;
use crate::xxz::{nonlocal_hamiltonian, transfer_matrix, WeightLabel};

/// Tolerance exponent for eigenvalue agreement (`10^{-35}`).
pub const TOLERANCE_DIGITS: u32 = 35;

fn block_to_mp(m: &[Vec<Q>]) -> Vec<Vec<Mp>> {
    m.iter().map(|r| r.iter().map(Mp::from_q).collect()).collect()
}

fn matvec(m: &[Vec<Mp>], v: &[Mp], bits: u32) -> Vec<Mp> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, _)| !a.is_zero())
                .fold(Mp::zero(), |s, (a, b)| (s + a.clone() * b.clone()).tidy(bits))
        })
        .collect()
}

fn normalize(v: Vec<Mp>, bits: u32) -> Vec<Mp> {
    let (k, _) = v
        .iter()
        .enumerate()
        .fold((0, -1.0), |acc, (i, z)| if z.mag() > acc.1 { (i, z.mag()) } else { acc });
    let p = v[k].clone();
    v.into_iter().map(|z| (z / p.clone()).tidy(bits)).collect()
}

/// Eigenvector of `m` for the approximate eigenvalue `lam` by inverse iteration.
fn eigenvector(m: &[Vec<Mp>], lam: &Mp, digits: u32, bits: u32) -> Result<Vec<Mp>> {
    let k = m.len();
    let eps = Mp::from_q(&Q::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), (digits + 10) as usize)));
    let shift = lam.clone() + eps;
    let b: Vec<Vec<Mp>> = (0..k)
        .map(|r| (0..k).map(|c| if r == c { m[r][c].clone() - shift.clone() } else { m[r][c].clone() }).collect())
        .collect();
    let mut v: Vec<Mp> = (0..k).map(|i| Mp::from_q(&rat(i as i64 + 2, 3))).collect();
    for _ in 0..3 {
        v = normalize(solve_dense(b.clone(), v, bits)?, bits);
    }
    Ok(v)
}

fn rel_residual(mv: &[Mp], lam: &Mp, v: &[Mp]) -> Mp {
    let scale = if lam.mag() > 1.0 { lam.clone() } else { Mp::one() };
    let worst = mv
        .iter()
        .zip(v)
        .map(|(a, b)| a.clone() - lam.clone() * b.clone())
        .fold(Mp::zero(), |acc, z| if z.mag() > acc.mag() { z } else { acc });
    let s = scale.norm_sqr();
    Mp::new(worst.re / s.clone(), worst.im / s) * scale.conj()
}

fn sample_points(p: &BetheProblem) -> Vec<Q> {
    [rat(7, 3), rat(-5, 2), rat(11, 7), rat(13, 5), rat(-17, 4)]
        .into_iter()
        .filter(|x| !p.a.contains(x))
        .take(3)
        .collect()
}

/// Solve the Bethe equations of the block and compare `Λ(x)` and `h_i`
/// with exact transfer-matrix and Hamiltonian blocks.
pub fn spectral_crosscheck(p: &BetheProblem, digits: u32, seed: u64) -> Result<Report> {
    let bits = bits_for_digits(digits);
    let n = p.n();
    let w = p.w();
    let mut rep = Report::new(format!("bethe-crosscheck[w={w},weight={:?}]", p.weight), seed);
    if !p.h_exact {
        rep.note(format!("h = hbar^(1/2) rounded to {} bits", bits + 64));
    }
    let sols = solve(p, digits, seed)?;
    rep.require(
        sols.len() == p.block_dim(),
        format!("found {} solutions, block dimension {}", sols.len(), p.block_dim()),
    );
    rep.note(format!("{} solutions for block dimension {}", sols.len(), p.block_dim()));
    let params = p.param_point()?;
    let wt = WeightLabel::new(p.weight.clone(), w)?;
    let idx = wt.indices(n, w);
    let xs = sample_points(p);
    let ts: Vec<Vec<Vec<Mp>>> = xs
        .iter()
        .map(|x| Ok(block_to_mp(&transfer_matrix(x, &params, n)?.restrict(&idx))))
        .collect::<Result<_>>()?;
    let hs: Vec<Vec<Vec<Mp>>> = (0..w)
        .map(|i| Ok(block_to_mp(&nonlocal_hamiltonian(i, &params, n)?.restrict(&idx))))
        .collect::<Result<_>>()?;
    let mut lam0 = Vec::new();
    for (si, sol) in sols.iter().enumerate() {
        for r in residuals(p, sol, digits) {
            if !below(&r, digits) {
                rep.push_residual_text(vec![si as i64], format_complex(&r, 12));
                rep.fail(format!("solution {si}: Bethe residual above 1e-{digits}"));
            }
        }
        let lams: Vec<Mp> = xs.iter().map(|x| lambda_eval(p, sol, &Mp::from_q(x), digits)).collect();
        let v = eigenvector(&ts[0], &lams[0], digits, bits)?;
        for (j, (t, lam)) in ts.iter().zip(&lams).enumerate() {
            let r = rel_residual(&matvec(t, &v, bits), lam, &v);
            if !below(&r, TOLERANCE_DIGITS) {
                rep.push_residual_text(vec![si as i64, j as i64], format_complex(&r, 12));
                rep.fail(format!("solution {si}: T(x_{j}) v differs from Lambda(x_{j}) v"));
            }
        }
        let hv = hamiltonian_eigenvalues(p, sol, digits)?;
        for (i, (hm, hval)) in hs.iter().zip(&hv).enumerate() {
            let r = rel_residual(&matvec(hm, &v, bits), hval, &v);
            if !below(&r, TOLERANCE_DIGITS) {
                rep.push_residual_text(vec![si as i64, (100 + i) as i64], format_complex(&r, 12));
                rep.fail(format!("solution {si}: H_{} v differs from h_{} v", i + 1, i + 1));
            }
        }
        let (inf, zero) = lambda_limits(p, sol);
        let sum = hv.iter().fold(Mp::zero(), |a, b| a + b.clone());
        let gap = inf - zero - Mp::from_q(&(&p.h_half - p.h_half.recip())) * sum;
        rep.require(below(&gap, TOLERANCE_DIGITS), format!("solution {si}: Lambda(inf) - Lambda(0) mismatch"));
        lam0.push(lams[0].clone());
    }
    for i in 0..lam0.len() {
        for j in i + 1..lam0.len() {
            let d = lam0[i].clone() - lam0[j].clone();
            rep.require(d.mag() > 1e-10, format!("solutions {i} and {j} share Lambda(x_0)"));
        }
    }
    Ok(rep)
}

/// Which closed form to compare the `a = (1,2)`, `ℏ = 3`, `ζ = (1,2)` roots with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosedFormReading {
    /// `σ = (-9 ± √201)/6`.
    Derived,
    /// `σ = (3 ± √65)/14`.
    Literal,
}

fn closed_form_roots(reading: ClosedFormReading, bits: u32) -> Result<Vec<Mp>> {
    let (c, disc, den) = match reading {
        ClosedFormReading::Derived => (int(-9), int(201), int(6)),
        ClosedFormReading::Literal => (int(3), int(65), int(14)),
    };
    let r = sqrt_q(&disc, bits)?;
    Ok(vec![Mp::from_q(&((&c - &r) / &den)), Mp::from_q(&((&c + &r) / &den))])
}

/// The instance `a = (1,2)`, `ℏ = 3`, `ζ = (1,2)`, weight `(1,1)` with its closed-form roots.
pub fn closed_form_problem(digits: u32) -> Result<BetheProblem> {
    BetheProblem::with_hbar(int(3), vec![int(1), int(2)], vec![int(1), int(2)], vec![1, 1], digits)
}

/// Compare the solver's roots with a closed form, and plug the closed form into the equations.
pub fn closed_form_check(reading: ClosedFormReading, digits: u32, seed: u64) -> Result<Report> {
    let bits = bits_for_digits(digits);
    let name = match reading {
        ClosedFormReading::Derived => "bethe-closed-form",
        ClosedFormReading::Literal => "bethe-closed-form-literal",
    };
    let mut rep = Report::new(name, seed);
    let p = closed_form_problem(digits)?;
    let expected = closed_form_roots(reading, bits)?;
    for (k, e) in expected.iter().enumerate() {
        let r = residuals(&p, &BetheSolution { roots: vec![vec![e.clone()]] }, digits);
        if !below(&r[0], TOLERANCE_DIGITS) {
            rep.push_residual_text(vec![k as i64], format_complex(&r[0], 12));
            rep.fail(format!("closed-form root {} does not satisfy the Bethe equation", format_complex(e, 20)));
        }
    }
    let sols = solve(&p, digits, seed)?;
    let mut found: Vec<Mp> = sols.iter().map(|s| s.roots[0][0].clone()).collect();
    found.sort_by(|x, y| x.re.cmp(&y.re));
    rep.require(found.len() == 2, format!("found {} roots, expected 2", found.len()));
    for (k, (f, e)) in found.iter().zip(&expected).enumerate() {
        let d = f.clone() - e.clone();
        if !below(&d, TOLERANCE_DIGITS) {
            rep.push_residual_text(vec![k as i64], format_complex(&d, 12));
            rep.fail(format!("solver root {} vs closed form {}", format_complex(f, 20), format_complex(e, 20)));
        }
    }
    rep.note(format!(
        "solver roots: {}",
        found.iter().map(|z| format_complex(z, 20)).collect::<Vec<_>>().join(", ")
    ));
    Ok(rep)
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_derived_passes_literal_fails() {
        assert!(closed_form_check(ClosedFormReading::Derived, 50, 0).unwrap().passed());
        assert!(!closed_form_check(ClosedFormReading::Literal, 50, 0).unwrap().passed());
    }

    #[test]
    fn crosscheck_two_sites() {
        let p = BetheProblem::with_hbar(rat(9, 4), vec![int(2), int(3)], vec![int(1), int(5)], vec![1, 1], 50).unwrap();
        let r = spectral_crosscheck(&p, 50, 0).unwrap();
        assert!(r.passed(), "{:?}", r.notes);
    }
}
