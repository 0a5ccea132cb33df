//! Eigenfunction candidates: residue-normalized φ prefactor, shift cocycle and
//! the `ž` series, plus calibration of the cocycle sign convention.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{vertex_series, Insertion, SeriesConvention};
use crate::error::{Error, Result};
use crate::kernel::{int, rat, Monomial, ParamPoint, PhiProduct, Symbol, TruncatedSeries};
use crate::quiver::FixedPointChain;
use crate::trs;

/// Signs of the `ζ_n` exponent and of the level exponents in the cocycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CocycleConvention {
    pub sigma_pref: i64,
    pub sigma_int: i64,
}

impl CocycleConvention {
    /// All four sign choices.
    pub fn all() -> [CocycleConvention; 4] {
        let mut out = [CocycleConvention {
            sigma_pref: 1,
            sigma_int: 1,
        }; 4];
        let mut i = 0;
        for sp in [1, -1] {
            for si in [1, -1] {
                out[i] = CocycleConvention {
                    sigma_pref: sp,
                    sigma_int: si,
                };
                i += 1;
            }
        }
        out
    }
}

/// Effect of `a_k → q a_k` on the transcendental prefactor: multiply by
/// `ζ_n^{zeta_n_power}` and shift the `ž` degree by `shift`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleEntry {
    pub zeta_n_power: i64,
    pub shift: Vec<i64>,
}

/// Cocycle table: `w_k = ζ_n^{σ_pref}`, `e_k = σ_int` at positions `m ≥ level_of(k)`.
pub fn shift_cocycle(p: &FixedPointChain, conv: CocycleConvention) -> Vec<CocycleEntry> {
    let nl = p.levels.len();
    (0..p.w)
        .map(|k| {
            let l = p.level_of(k);
            CocycleEntry {
                zeta_n_power: conv.sigma_pref,
                shift: (1..=nl).map(|m| if m >= l { conv.sigma_int } else { 0 }).collect(),
            }
        })
        .collect()
}

fn phi_pair(num_t: i64, j: usize, k: usize, power: i64) -> PhiProduct {
    PhiProduct::phi(Monomial::ratio(Symbol::A(j), Symbol::A(k)).with_t(num_t), power)
}

/// The three factors `(E, G, H)` of the normalization with unit-ratio pairs struck.
pub fn normalization_parts(p: &FixedPointChain) -> (PhiProduct, PhiProduct, PhiProduct) {
    let nl = p.levels.len();
    let mut e = PhiProduct::one();
    for lvl in &p.levels {
        for &j in lvl {
            for &k in lvl {
                if j != k {
                    e = e.mul(&phi_pair(0, j, k, 1)).mul(&phi_pair(1, j, k, -1));
                }
            }
        }
    }
    let mut g = PhiProduct::one();
    for &j in &p.levels[nl - 1] {
        for k in 0..p.w {
            if j != k {
                g = g.mul(&phi_pair(1, j, k, 1)).mul(&phi_pair(0, j, k, -1));
            }
        }
    }
    let mut h = PhiProduct::one();
    for m in 0..nl.saturating_sub(1) {
        for &j in &p.levels[m + 1] {
            for &k in &p.levels[m] {
                if j != k {
                    h = h.mul(&phi_pair(1, k, j, 1)).mul(&phi_pair(0, k, j, -1));
                }
            }
        }
    }
    (e, g, h)
}

/// `N_p = E·G·H` evaluated at `s = x`, with all unit-argument ratios struck.
pub fn normalization_prefactor(p: &FixedPointChain) -> PhiProduct {
    let (e, g, h) = normalization_parts(p);
    e.mul(&g).mul(&h)
}

/// Normalized tRS eigenfunction candidate attached to a fixed point.
#[derive(Clone, Debug)]
pub struct EigenfunctionCandidate {
    pub point: FixedPointChain,
    pub prefactor: PhiProduct,
    pub cocycle: Vec<CocycleEntry>,
    pub convention: CocycleConvention,
    pub tau: Insertion,
    pub order: Vec<i64>,
    /// `ž`-series at the base parameter point.
    pub series: TruncatedSeries,
}

impl EigenfunctionCandidate {
    /// Build the candidate at `params` with series reliable to `order`.
    pub fn new(
        p: &FixedPointChain,
        tau: Insertion,
        order: &[i64],
        params: &ParamPoint,
        conv: CocycleConvention,
    ) -> Result<Self> {
        let series = vertex_series(p, &tau, order, params, SeriesConvention::Zh)?.series;
        Ok(Self::with_series(p, tau, order, conv, series))
    }

    /// Build the candidate from an externally supplied base series.
    pub fn with_series(
        p: &FixedPointChain,
        tau: Insertion,
        order: &[i64],
        conv: CocycleConvention,
        series: TruncatedSeries,
    ) -> Self {
        EigenfunctionCandidate {
            point: p.clone(),
            prefactor: normalization_prefactor(p),
            cocycle: shift_cocycle(p, conv),
            convention: conv,
            tau,
            order: order.to_vec(),
            series,
        }
    }

    /// `ž`-series of the same fixed point and insertion at other parameters.
    pub fn series_at(&self, params: &ParamPoint) -> Result<TruncatedSeries> {
        Ok(vertex_series(&self.point, &self.tau, &self.order, params, SeriesConvention::Zh)?.series)
    }
}

/// Source of `ž`-series used when operators re-evaluate at shifted parameters.
pub type SeriesProvider<'a> =
    &'a (dyn Fn(&FixedPointChain, &ParamPoint, &[i64]) -> Result<TruncatedSeries> + Sync);

fn honest_provider(p: &FixedPointChain, params: &ParamPoint, order: &[i64]) -> Result<TruncatedSeries> {
    Ok(vertex_series(p, &Insertion::one(), order, params, SeriesConvention::Zh)?.series)
}

/// Select the unique sign convention for which the `r = 1` relation holds on
/// `T*ℙ¹` (both fixed points) through `ž`-order 2.
pub fn calibrate_convention(params: &ParamPoint) -> Result<CocycleConvention> {
    calibrate_convention_with(params, &honest_provider)
}

/// Calibration against an arbitrary series provider (used for negative controls).
pub fn calibrate_convention_with(
    params: &ParamPoint,
    provider: SeriesProvider<'_>,
) -> Result<CocycleConvention> {
    if params.a.len() < 2 {
        return Err(Error::Calibration("calibration needs two equivariant parameters".into()));
    }
    let pr = params.with_a(params.a[..2].to_vec());
    let order = [3];
    let op = trs::trs_operator(1, 2, 1, &pr.t())?;
    let flag = crate::quiver::FlagData::new(vec![1], 2)?;
    let mut passing = Vec::new();
    for conv in CocycleConvention::all() {
        let mut ok = true;
        for p in crate::quiver::enumerate_fixed_points(&flag) {
            let base = provider(&p, &pr, &order)?;
            let cand = EigenfunctionCandidate::with_series(&p, Insertion::one(), &order, conv, base);
            let lhs = trs::apply_with(&op, &cand, &pr, provider)?;
            let (zp, lam) = trs::eigenvalue_laurent(&flag, &pr, 1)?;
            let rhs = trs::laurent_times(&lam, &cand.series)?;
            let res = lhs.series.sub(&rhs)?;
            if lhs.zeta_n_power != zp || !res.truncate(&[2]).is_zero() {
                ok = false;
                break;
            }
        }
        if ok {
            passing.push(conv);
        }
    }
    match passing.as_slice() {
        [c] => Ok(*c),
        [] => Err(Error::Calibration("no sign convention satisfies the r = 1 relation".into())),
        many => Err(Error::Calibration(format!("{} conventions pass; expected one", many.len()))),
    }
}

/// The globally frozen convention, calibrated once at a fixed generic point.
pub fn frozen_convention() -> Result<CocycleConvention> {
    static FROZEN: OnceLock<std::result::Result<CocycleConvention, Error>> = OnceLock::new();
    FROZEN
        .get_or_init(|| {
            let p = ParamPoint::new(rat(1, 2), rat(1, 3), vec![int(2), int(3)], vec![], 8)?;
            calibrate_convention(&p)
        })
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tp1_prefactor() {
        let p = FixedPointChain::new(2, vec![vec![0]]).unwrap();
        let want = phi_pair(1, 0, 1, 1).mul(&phi_pair(0, 0, 1, -1));
        assert_eq!(normalization_prefactor(&p), want);
        let p2 = FixedPointChain::new(2, vec![vec![1]]).unwrap();
        let want2 = phi_pair(1, 1, 0, 1).mul(&phi_pair(0, 1, 0, -1));
        assert_eq!(normalization_prefactor(&p2), want2);
    }

    #[test]
    fn top_degenerate_g_pairs() {
        let w = 3;
        let p = FixedPointChain::new(w, vec![(0..w).collect()]).unwrap();
        let (_, g, _) = normalization_parts(&p);
        assert_eq!(g.factors().len(), 2 * w * (w - 1));
    }

    #[test]
    fn cocycle_examples() {
        let p = FixedPointChain::new(2, vec![vec![0]]).unwrap();
        let c = shift_cocycle(&p, CocycleConvention { sigma_pref: 1, sigma_int: 1 });
        assert_eq!(c[0].shift, vec![1]);
        assert_eq!(c[1].shift, vec![0]);
        assert_eq!(c[0].zeta_n_power, 1);
        let ff = FixedPointChain::new(3, vec![vec![0], vec![0, 1]]).unwrap();
        let c = shift_cocycle(&ff, CocycleConvention { sigma_pref: 1, sigma_int: -1 });
        assert_eq!(c[0].shift, vec![-1, -1]);
        assert_eq!(c[1].shift, vec![0, -1]);
        assert_eq!(c[2].shift, vec![0, 0]);
    }

    #[test]
    fn calibration_selects_one() {
        let c = frozen_convention().unwrap();
        assert_eq!(c, CocycleConvention { sigma_pref: 1, sigma_int: -1 });
    }
}
