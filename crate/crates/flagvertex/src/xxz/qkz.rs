//! Weighted sum of T*ℙ¹ vertex functions with linear insertions, compared
//! against the eigenfunction series up to one constant.
//!
//! The fixed points `{a_1}` and `{a_2}` carry the weights `ℏ^{ℓ/2}` with
//! `ℓ = 0, 1`. Each insertion is `λ_q + μ_q s` in the single level variable.
//! In fit mode they are normalized by `τ_1(a_1) = 1`, `τ_1(a_2) = 0`,
//! `τ_2(a_1) = 0`; the remaining unknown and the constant come from degrees 0
//! and 1, and all higher degrees are validated.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::tensor::solve_linear;
use crate::error::{Error, Result};
use crate::kernel::{format_q, ParamPoint, Q};
use crate::quiver::FixedPointChain;
use crate::report::Report;
use crate::vertex::{vertex_series, Insertion, SeriesConvention};

/// Coefficients of the two linear insertions and the proportionality constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FittedInsertions {
    #[serde(with = "crate::kernel::scalar::serde_q")]
    pub lambda1: Q,
    #[serde(with = "crate::kernel::scalar::serde_q")]
    pub mu1: Q,
    #[serde(with = "crate::kernel::scalar::serde_q")]
    pub lambda2: Q,
    #[serde(with = "crate::kernel::scalar::serde_q")]
    pub mu2: Q,
    #[serde(with = "crate::kernel::scalar::serde_q")]
    pub constant: Q,
}

impl FittedInsertions {
    /// The pair of insertions `(τ_1, τ_2)`.
    pub fn insertions(&self) -> (Insertion, Insertion) {
        (
            Insertion::linear(self.lambda1.clone(), self.mu1.clone(), 0),
            Insertion::linear(self.lambda2.clone(), self.mu2.clone(), 0),
        )
    }
}

/// The plain and `s`-inserted vertex series of the point `{a_1}`, in `ž`, degrees `0..=order`.
fn basis_series(params: &ParamPoint, order: i64) -> Result<(Vec<Q>, Vec<Q>)> {
    check_tp1(params)?;
    let p = FixedPointChain::new(2, vec![vec![0]])?;
    let one = vertex_series(&p, &Insertion::one(), &[order], params, SeriesConvention::Zh)?;
    let s = vertex_series(&p, &Insertion::linear(Q::zero(), Q::one(), 0), &[order], params, SeriesConvention::Zh)?;
    Ok((
        (0..=order).map(|d| one.coeff(&[d])).collect(),
        (0..=order).map(|d| s.coeff(&[d])).collect(),
    ))
}

fn check_tp1(params: &ParamPoint) -> Result<()> {
    if params.w() != 2 {
        return Err(Error::Shape(format!("T*P1 needs two equivariant parameters, got {}", params.w())));
    }
    Ok(())
}

/// Solve for the insertions and the constant from degrees 0 and 1.
pub fn fit_insertions(params: &ParamPoint) -> Result<FittedInsertions> {
    let (v1, vs) = basis_series(params, 1)?;
    let (a1, a2) = (&params.a[0], &params.a[1]);
    let h = &params.h_half;
    let z = Q::zero;
    let o = Q::one;
    let mut rows = vec![
        vec![o(), a1.clone(), z(), z(), z()],
        vec![o(), a2.clone(), z(), z(), z()],
        vec![z(), z(), o(), a1.clone(), z()],
    ];
    let mut rhs = vec![vec![o()], vec![z()], vec![z()]];
    for d in 0..2 {
        rows.push(vec![v1[d].clone(), vs[d].clone(), h * &v1[d], h * &vs[d], -v1[d].clone()]);
        rhs.push(vec![z()]);
    }
    let x = solve_linear(&rows, &rhs).map_err(|e| Error::NoFit(format!("low-order system: {e}")))?;
    let g = |k: usize| x[k][0].clone();
    Ok(FittedInsertions {
        lambda1: g(0),
        mu1: g(1),
        lambda2: g(2),
        mu2: g(3),
        constant: g(4),
    })
}

/// Check `Σ_q ℏ^{ℓ(q)/2} V^{(τ_q)} = c · V` degree by degree through `order`.
///
/// With `insertions = None` the insertions are fitted; otherwise the supplied
/// pair is used and only `c` is fitted at degree 0.
pub fn qkz_trs_sum_check(
    params: &ParamPoint,
    order: i64,
    insertions: Option<&FittedInsertions>,
    seed: u64,
) -> Result<Report> {
    let mut rep = Report::new("qkz-trs-sum", seed);
    rep.reliable_order = vec![order];
    let (v1, vs) = basis_series(params, order)?;
    let h = &params.h_half;
    let (coef, first) = match insertions {
        None => (fit_insertions(params)?, 2),
        Some(c) => {
            let lhs0 = &c.lambda1 * &v1[0] + &c.mu1 * &vs[0] + h * (&c.lambda2 * &v1[0] + &c.mu2 * &vs[0]);
            if v1[0].is_zero() {
                return Err(Error::NoFit("degree-0 coefficient vanishes".into()));
            }
            let mut c = c.clone();
            c.constant = lhs0 / &v1[0];
            (c, 1)
        }
    };
    rep.note(format!(
        "tau_1 = {} + {} s, tau_2 = {} + {} s, constant = {}",
        format_q(&coef.lambda1),
        format_q(&coef.mu1),
        format_q(&coef.lambda2),
        format_q(&coef.mu2),
        format_q(&coef.constant)
    ));
    for d in first..=order as usize {
        let lhs = &coef.lambda1 * &v1[d] + &coef.mu1 * &vs[d] + h * (&coef.lambda2 * &v1[d] + &coef.mu2 * &vs[d]);
        let diff = lhs - &coef.constant * &v1[d];
        if !diff.is_zero() {
            rep.push_residual(vec![d as i64], &diff);
        }
    }
    if let Some(first_bad) = rep.residuals.first() {
        let deg = first_bad.deg[0];
        rep.note(format!("first mismatch at degree {deg}"));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    fn params() -> ParamPoint {
        ParamPoint::new(rat(1, 2), rat(1, 3), vec![int(2), int(3)], vec![int(1), int(5)], 10).unwrap()
    }

    #[test]
    fn fit_has_closed_form() {
        let p = params();
        let f = fit_insertions(&p).unwrap();
        assert_eq!(f.lambda1, int(3));
        assert_eq!(f.mu1, int(-1));
        assert_eq!(f.constant, int(1));
        assert_eq!(&f.lambda2 + &f.mu2 * int(2), int(0));
        assert_eq!(f.mu2, int(3));
    }

    #[test]
    fn fit_validates_and_perturbation_fails() {
        let p = params();
        assert!(qkz_trs_sum_check(&p, 8, None, 0).unwrap().passed());
        let mut f = fit_insertions(&p).unwrap();
        assert!(qkz_trs_sum_check(&p, 8, Some(&f), 0).unwrap().passed());
        f.mu1 += int(1);
        let r = qkz_trs_sum_check(&p, 8, Some(&f), 0).unwrap();
        assert!(!r.passed());
        assert!(r.residuals[0].deg[0] <= 2);
    }
}
