//! Vertex functions: single-assignment coefficients, truncated series in the
//! `z` and `ž` conventions, eigenfunction candidates with their shift cocycle,
//! sign-convention calibration and the `ℏ → ∞` limit.

mod eigen;
mod insertion;
mod toda;

pub use eigen::{
    calibrate_convention, calibrate_convention_with, frozen_convention, normalization_parts,
    normalization_prefactor, shift_cocycle, CocycleConvention, CocycleEntry,
    EigenfunctionCandidate, SeriesProvider,
};
pub use insertion::{Expr, Insertion};
pub use toda::{toda_limit, toda_limit_z, HPoly, HRational};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{curly_bracket, qpow, ParamPoint, SeriesTerm, TruncatedSeries, Q};
use crate::quiver::{enumerate_degree_assignments, DegreeAssignment, FixedPointChain};

/// Series variable convention: `z` or the internal `ž`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesConvention {
    #[serde(rename = "z")]
    Z,
    #[serde(rename = "zh")]
    Zh,
}

/// Minimal field interface shared by exact numbers and rational functions in `ℏ^{1/2}`.
pub(crate) trait CoeffField: Clone + Send {
    fn unit() -> Self;
    fn times(&self, o: &Self) -> Self;
    fn over(&self, o: &Self) -> Result<Self>;
    fn bracket(x: &Q, d: i64, params: &ParamPoint) -> Result<Self>;
}

impl CoeffField for Q {
    fn unit() -> Self {
        Q::one()
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn over(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::Pole("inverse of a vanishing bracket".into()));
        }
        Ok(self / o)
    }
    fn bracket(x: &Q, d: i64, params: &ParamPoint) -> Result<Self> {
        curly_bracket(x, d, params)
    }
}

/// `E·H·G` without the `q^{N/2}` factor or insertion, in any coefficient field.
///
/// `E = Π_m Π_{j≠k ∈ V_m} {a_j/a_k}^{-1}_{d_m(j) - d_m(k)}`,
/// `H = Π_m Π_{j ∈ V_m, k ∈ V_{m+1}} {a_j/a_k}_{d_m(j) - d_{m+1}(k)}`,
/// `G = Π_{j ∈ V_{n-1}} Π_{k=1}^{w} {a_j/a_k}_{d_{n-1}(j)}`.
pub(crate) fn ehg<F: CoeffField>(
    p: &FixedPointChain,
    asg: &DegreeAssignment,
    params: &ParamPoint,
) -> Result<F> {
    let a = &params.a;
    if a.len() != p.w {
        return Err(Error::Invalid(format!(
            "fixed point has w = {} but params carry {} equivariant parameters",
            p.w,
            a.len()
        )));
    }
    let nl = p.levels.len();
    let mut r = F::unit();
    for m in 0..nl {
        let lvl = &p.levels[m];
        for (jj, &j) in lvl.iter().enumerate() {
            for (kk, &k) in lvl.iter().enumerate() {
                if j == k {
                    continue;
                }
                let b = F::bracket(&(&a[j] / &a[k]), asg.deg[m][jj] - asg.deg[m][kk], params)?;
                r = r.over(&b)?;
            }
        }
    }
    let top = nl - 1;
    for (jj, &j) in p.levels[top].iter().enumerate() {
        for ak in a.iter() {
            r = r.times(&F::bracket(&(&a[j] / ak), asg.deg[top][jj], params)?);
        }
    }
    for m in 0..top {
        for (jj, &j) in p.levels[m].iter().enumerate() {
            for (kk, &k) in p.levels[m + 1].iter().enumerate() {
                let d = asg.deg[m][jj] - asg.deg[m + 1][kk];
                r = r.times(&F::bracket(&(&a[j] / &a[k]), d, params)?);
            }
        }
    }
    Ok(r)
}

/// Level variables displaced by the degrees: `x_{m,j} q^{-d_m(j)}`.
pub(crate) fn displaced_points(
    p: &FixedPointChain,
    asg: &DegreeAssignment,
    params: &ParamPoint,
) -> Result<Vec<Vec<Q>>> {
    let q = params.q();
    p.levels
        .iter()
        .zip(&asg.deg)
        .map(|(lvl, ds)| {
            lvl.iter()
                .zip(ds)
                .map(|(&k, &d)| Ok(&params.a[k] * qpow(&q, -d)?))
                .collect()
        })
        .collect()
}

/// Single-assignment contribution `q^{N(d)/2}·E·H·G·τ(x q^{-d})` in the `z` convention.
pub fn vertex_coefficient(
    p: &FixedPointChain,
    asg: &DegreeAssignment,
    tau: &Insertion,
    params: &ParamPoint,
) -> Result<Q> {
    let n_d = asg.n_of_d(&p.flag());
    let mut v: Q = ehg(p, asg, params)?;
    v *= qpow(&params.q_half, n_d)?;
    if !tau.is_one() {
        v *= tau.eval(&displaced_points(p, asg, params)?, params)?;
    }
    Ok(v)
}

/// A truncated vertex series together with its variable convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSeries {
    pub series: TruncatedSeries,
    pub convention: SeriesConvention,
    pub vprime: Vec<i64>,
    /// `ℏ^{1/2}` used for `z ↔ ž` conversion; `None` for `ℏ`-free limits.
    pub h_half: Option<Q>,
}

/// JSON layout of a series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub vars: usize,
    pub convention: SeriesConvention,
    pub reliable_order: Vec<i64>,
    pub terms: Vec<SeriesTerm>,
}

impl VertexSeries {
    /// Coefficient at a degree.
    pub fn coeff(&self, deg: &[i64]) -> Q {
        self.series.coeff(deg)
    }

    /// Convert between `z` and `ž`: `c_ž(d) = c_z(d)·(-ℏ^{1/2})^{-⟨v', d⟩}`.
    pub fn to_convention(&self, target: SeriesConvention) -> Result<VertexSeries> {
        if target == self.convention {
            return Ok(self.clone());
        }
        let h = self
            .h_half
            .clone()
            .ok_or_else(|| Error::Limit("no finite ℏ^{1/2} to convert conventions".into()))?;
        let sign = if target == SeriesConvention::Zh { -1 } else { 1 };
        let minus_h = -h;
        let vp = self.vprime.clone();
        let series = self.series.map_coeffs(|d, c| {
            let e: i64 = vp.iter().zip(d).map(|(a, b)| a * b).sum();
            c * qpow(&minus_h, sign * e).expect("nonzero h")
        });
        Ok(VertexSeries {
            series,
            convention: target,
            ..self.clone()
        })
    }

    /// Serializable form.
    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            vars: self.series.num_vars(),
            convention: self.convention,
            reliable_order: self.series.reliable_order().to_vec(),
            terms: self.series.to_terms(),
        }
    }
}

/// All degree vectors `0 ≤ d ≤ D` componentwise, in lexicographic order.
pub(crate) fn degree_box(order: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &o in order {
        let mut next = Vec::new();
        for prefix in &out {
            for x in 0..=o.max(-1) {
                let mut v = prefix.clone();
                v.push(x);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Sum of coefficients over the chamber, for every degree up to `order`.
pub fn vertex_series(
    p: &FixedPointChain,
    tau: &Insertion,
    order: &[i64],
    params: &ParamPoint,
    convention: SeriesConvention,
) -> Result<VertexSeries> {
    let nl = p.levels.len();
    if order.len() != nl {
        return Err(Error::Shape(format!("order has {} entries, expected {nl}", order.len())));
    }
    let degrees = degree_box(order);
    let values: Vec<Result<Q>> = degrees
        .par_iter()
        .map(|d| {
            let mut acc = Q::zero();
            for asg in enumerate_degree_assignments(p, d) {
                acc += vertex_coefficient(p, &asg, tau, params)?;
            }
            Ok(acc)
        })
        .collect();
    let mut series = TruncatedSeries::zero(nl, order.to_vec());
    for (d, v) in degrees.into_iter().zip(values) {
        series.add_term(d, v?);
    }
    let z = VertexSeries {
        series,
        convention: SeriesConvention::Z,
        vprime: p.flag().vprime(),
        h_half: Some(params.h_half.clone()),
    };
    z.to_convention(convention)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};
    use crate::quiver::enumerate_fixed_points;

    fn params(a: Vec<Q>) -> ParamPoint {
        ParamPoint::new(rat(1, 2), rat(1, 3), a, vec![int(1), int(5)], 10).unwrap()
    }

    #[test]
    fn zero_assignment_is_one() {
        let f = crate::quiver::FlagData::new(vec![1, 2], 3).unwrap();
        let pr = params(vec![int(2), int(3), int(7)]);
        for p in enumerate_fixed_points(&f) {
            let z = DegreeAssignment::zero(&p);
            assert_eq!(vertex_coefficient(&p, &z, &Insertion::one(), &pr).unwrap(), int(1));
        }
    }

    #[test]
    fn tp1_degree_one_in_z() {
        let pr = params(vec![int(2), int(3)]);
        let p = FixedPointChain::new(2, vec![vec![0]]).unwrap();
        let asg = DegreeAssignment { deg: vec![vec![1]] };
        // N(d) = v'·d = 2, so the q^{N/2} factor is q = 1/4.
        let v = vertex_coefficient(&p, &asg, &Insertion::one(), &pr).unwrap();
        let b1 = curly_bracket(&int(1), 1, &pr).unwrap();
        let bx = curly_bracket(&rat(2, 3), 1, &pr).unwrap();
        assert_eq!(v, rat(1, 4) * b1 * bx);
        assert_eq!(v, rat(8, 9));
    }

    #[test]
    fn weyl_relabeling() {
        let p1 = FixedPointChain::new(2, vec![vec![0]]).unwrap();
        let p2 = FixedPointChain::new(2, vec![vec![1]]).unwrap();
        let s1 = vertex_series(&p1, &Insertion::one(), &[4], &params(vec![int(2), int(3)]), SeriesConvention::Zh).unwrap();
        let s2 = vertex_series(&p2, &Insertion::one(), &[4], &params(vec![int(3), int(2)]), SeriesConvention::Zh).unwrap();
        assert_eq!(s1.series, s2.series);
    }

    #[test]
    fn conversion_is_involution() {
        let p = FixedPointChain::new(2, vec![vec![0]]).unwrap();
        let s = vertex_series(&p, &Insertion::one(), &[3], &params(vec![int(2), int(3)]), SeriesConvention::Z).unwrap();
        let back = s.to_convention(SeriesConvention::Zh).unwrap().to_convention(SeriesConvention::Z).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn power_sum_insertion_at_degree_zero() {
        let p = FixedPointChain::new(2, vec![vec![0]]).unwrap();
        let s = vertex_series(&p, &Insertion::power_sum(0, 1), &[1], &params(vec![int(2), int(3)]), SeriesConvention::Z).unwrap();
        assert_eq!(s.coeff(&[0]), int(2));
    }
}
