//! The `ℏ → ∞` limit of vertex coefficients, computed exactly by treating
//! `h = ℏ^{1/2}` as a formal variable and keeping leading terms.

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{degree_box, ehg, CoeffField, SeriesConvention, VertexSeries};
use crate::error::{Error, Result};
use crate::kernel::{qpoch_with, qpow, ParamPoint, TruncatedSeries, Q};
use crate::quiver::{enumerate_degree_assignments, FixedPointChain};

/// Laurent polynomial `Σ_i c_i h^{low + i}` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPoly {
    low: i64,
    c: Vec<Q>,
}

impl HPoly {
    pub fn zero() -> Self {
        HPoly { low: 0, c: vec![] }
    }

    pub fn constant(x: Q) -> Self {
        HPoly { low: 0, c: vec![x] }.trimmed()
    }

    /// `x·h^k`.
    pub fn monomial(x: Q, k: i64) -> Self {
        HPoly { low: k, c: vec![x] }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|x| x.is_zero()).count();
        if lead > 0 {
            self.c.drain(..lead);
            self.low += lead as i64;
        }
        if self.c.is_empty() {
            self.low = 0;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Highest exponent present (`None` for zero).
    pub fn degree(&self) -> Option<i64> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.low + self.c.len() as i64 - 1)
        }
    }

    /// Coefficient of the highest exponent.
    pub fn leading(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn mul(&self, o: &HPoly) -> HPoly {
        if self.is_zero() || o.is_zero() {
            return HPoly::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, x) in self.c.iter().enumerate() {
            for (j, y) in o.c.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        HPoly { low: self.low + o.low, c }.trimmed()
    }

    pub fn add(&self, o: &HPoly) -> HPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let high = self.degree().unwrap().max(o.degree().unwrap());
        let mut c = vec![Q::zero(); (high - low + 1) as usize];
        for (i, x) in self.c.iter().enumerate() {
            c[(self.low - low) as usize + i] += x;
        }
        for (i, x) in o.c.iter().enumerate() {
            c[(o.low - low) as usize + i] += x;
        }
        HPoly { low, c }.trimmed()
    }

    /// Exact value at a number.
    pub fn eval(&self, h: &Q) -> Result<Q> {
        let mut acc = Q::zero();
        for (i, x) in self.c.iter().enumerate() {
            acc += x * qpow(h, self.low + i as i64)?;
        }
        Ok(acc)
    }
}

/// Rational function `num/den` in `h = ℏ^{1/2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRational {
    pub num: HPoly,
    pub den: HPoly,
}

impl HRational {
    pub fn from_poly(p: HPoly) -> Self {
        HRational {
            num: p,
            den: HPoly::constant(Q::one()),
        }
    }

    pub fn add(&self, o: &HRational) -> HRational {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return HRational {
                num: self.num.add(&o.num),
                den: self.den.clone(),
            };
        }
        HRational {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    /// Leading coefficient as `h → ∞`; errors if the function grows.
    pub fn limit_at_infinity(&self) -> Result<Q> {
        let Some(dn) = self.num.degree() else {
            return Ok(Q::zero());
        };
        let dd = self.den.degree().expect("nonzero denominator");
        match dn.cmp(&dd) {
            std::cmp::Ordering::Greater => Err(Error::Limit(format!(
                "coefficient grows like ℏ^{}",
                (dn - dd) as f64 / 2.0
            ))),
            std::cmp::Ordering::Less => Ok(Q::zero()),
            std::cmp::Ordering::Equal => Ok(self.num.leading() / self.den.leading()),
        }
    }

    /// Exact value at a number.
    pub fn eval(&self, h: &Q) -> Result<Q> {
        let d = self.den.eval(h)?;
        if d.is_zero() {
            return Err(Error::Pole("denominator vanishes".into()));
        }
        Ok(self.num.eval(h)? / d)
    }
}

impl CoeffField for HRational {
    fn unit() -> Self {
        HRational::from_poly(HPoly::constant(Q::one()))
    }
    fn times(&self, o: &Self) -> Self {
        HRational {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
    }
    fn over(&self, o: &Self) -> Result<Self> {
        if o.num.is_zero() {
            return Err(Error::Pole("inverse of a vanishing bracket".into()));
        }
        Ok(HRational {
            num: self.num.mul(&o.den),
            den: self.den.mul(&o.num),
        })
    }
    fn bracket(x: &Q, d: i64, params: &ParamPoint) -> Result<Self> {
        if d == 0 {
            return Ok(Self::unit());
        }
        let q = params.q();
        let den_q = qpoch_with(&(&q / x), d, &q)?;
        if den_q.is_zero() {
            return Err(Error::Pole(format!("bracket {{{x}}}_{d}: denominator vanishes")));
        }
        let xinv = x.recip();
        let mut poch = HPoly::constant(Q::one());
        if d > 0 {
            let mut qi = Q::one();
            for _ in 0..d {
                let f = HPoly::constant(Q::one()).add(&HPoly::monomial(-(&qi * &xinv), 2));
                poch = poch.mul(&f);
                qi *= &q;
            }
        } else {
            let qinv = q.recip();
            let mut qi = qinv.clone();
            for _ in 0..(-d) {
                let f = HPoly::constant(Q::one()).add(&HPoly::monomial(-(&qi * &xinv), 2));
                poch = poch.mul(&f);
                qi *= &qinv;
            }
        }
        let sign = HPoly::monomial(qpow(&(-params.q_half.clone()), d)? / den_q, -d);
        Ok(if d > 0 {
            HRational::from_poly(poch.mul(&sign))
        } else {
            HRational {
                num: sign,
                den: poch,
            }
        })
    }
}

fn limit_series(
    p: &FixedPointChain,
    order: &[i64],
    params: &ParamPoint,
    zh: bool,
) -> Result<TruncatedSeries> {
    let nl = p.levels.len();
    if order.len() != nl {
        return Err(Error::Shape(format!("order has {} entries, expected {nl}", order.len())));
    }
    let f = p.flag();
    let degrees = degree_box(order);
    let values: Vec<Result<Q>> = degrees
        .par_iter()
        .map(|d| {
            let mut acc = HRational::from_poly(HPoly::zero());
            for asg in enumerate_degree_assignments(p, d) {
                let n_d = asg.n_of_d(&f);
                let mut c: HRational = ehg(p, &asg, params)?;
                let mut factor = qpow(&params.q_half, n_d)?;
                let mut hexp = 0;
                if zh {
                    if n_d % 2 != 0 {
                        factor = -factor;
                    }
                    hexp = -n_d;
                }
                c = c.times(&HRational::from_poly(HPoly::monomial(factor, hexp)));
                acc = acc.add(&c);
            }
            acc.limit_at_infinity()
                .map_err(|e| Error::Limit(format!("degree {d:?}: {e}")))
        })
        .collect();
    let mut series = TruncatedSeries::zero(nl, order.to_vec());
    for (d, v) in degrees.into_iter().zip(values) {
        series.add_term(d, v?);
    }
    Ok(series)
}

/// Coefficientwise `ℏ → ∞` limit of the `ž`-convention vertex series.
pub fn toda_limit(p: &FixedPointChain, order: &[i64], params: &ParamPoint) -> Result<VertexSeries> {
    Ok(VertexSeries {
        series: limit_series(p, order, params, true)?,
        convention: SeriesConvention::Zh,
        vprime: p.flag().vprime(),
        h_half: None,
    })
}

/// Coefficientwise `ℏ → ∞` limit of the `z`-convention series (diverges for `d > 0`).
pub fn toda_limit_z(p: &FixedPointChain, order: &[i64], params: &ParamPoint) -> Result<VertexSeries> {
    Ok(VertexSeries {
        series: limit_series(p, order, params, false)?,
        convention: SeriesConvention::Z,
        vprime: p.flag().vprime(),
        h_half: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{curly_bracket, int, rat};

    #[test]
    fn symbolic_bracket_matches_numeric() {
        let pr = ParamPoint::new(rat(1, 2), rat(2, 7), vec![int(2), int(3)], vec![], 4).unwrap();
        for d in -3..=3 {
            let s = HRational::bracket(&rat(5, 3), d, &pr).unwrap();
            assert_eq!(s.eval(&pr.h_half).unwrap(), curly_bracket(&rat(5, 3), d, &pr).unwrap());
        }
    }

    #[test]
    fn degree_zero_limit_is_one() {
        let pr = ParamPoint::new(rat(1, 2), rat(1, 3), vec![int(2), int(3)], vec![], 4).unwrap();
        let p = FixedPointChain::new(2, vec![vec![0]]).unwrap();
        let s = toda_limit(&p, &[3], &pr).unwrap();
        assert_eq!(s.coeff(&[0]), int(1));
    }

    #[test]
    fn z_convention_limit_diverges() {
        let pr = ParamPoint::new(rat(1, 2), rat(1, 3), vec![int(2), int(3)], vec![], 4).unwrap();
        let p = FixedPointChain::new(2, vec![vec![0]]).unwrap();
        assert!(matches!(toda_limit_z(&p, &[1], &pr), Err(Error::Limit(_))));
    }
}
