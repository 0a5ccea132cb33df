//! Truncated multigraded Laurent series with exact coefficients.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::scalar::{format_q, Q};
use crate::error::{Error, Result};

/// Exact series in `num_vars` grading variables, trustworthy up to `reliable_order`.
///
/// Degrees may be negative (operator application can lower degrees); the only
/// truncation is from above, componentwise at the reliable order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    num_vars: usize,
    coeffs: BTreeMap<Vec<i64>, Q>,
    reliable_order: Vec<i64>,
}

/// Binary operation selector for [`series_combine`].
#[derive(Clone, Debug)]
pub enum SeriesOp<'a> {
    Add(&'a TruncatedSeries),
    Mul(&'a TruncatedSeries),
    Scale(&'a Q),
}

impl TruncatedSeries {
    /// The zero series.
    pub fn zero(num_vars: usize, reliable_order: Vec<i64>) -> Self {
        assert_eq!(num_vars, reliable_order.len(), "reliable order length");
        TruncatedSeries {
            num_vars,
            coeffs: BTreeMap::new(),
            reliable_order,
        }
    }

    /// A constant series.
    pub fn constant(num_vars: usize, c: Q, reliable_order: Vec<i64>) -> Self {
        let mut s = Self::zero(num_vars, reliable_order);
        s.add_term(vec![0; num_vars], c);
        s
    }

    /// Build from explicit terms; terms beyond the reliable order are dropped.
    pub fn from_terms(
        num_vars: usize,
        terms: impl IntoIterator<Item = (Vec<i64>, Q)>,
        reliable_order: Vec<i64>,
    ) -> Self {
        let mut s = Self::zero(num_vars, reliable_order);
        for (d, c) in terms {
            s.add_term(d, c);
        }
        s
    }

    /// Number of grading variables.
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Componentwise reliable order.
    pub fn reliable_order(&self) -> &[i64] {
        &self.reliable_order
    }

    /// True iff `deg` is within the reliable order.
    pub fn in_range(&self, deg: &[i64]) -> bool {
        deg.iter().zip(&self.reliable_order).all(|(d, o)| d <= o)
    }

    /// Add `c · ž^deg` (dropped if beyond the reliable order).
    pub fn add_term(&mut self, deg: Vec<i64>, c: Q) {
        assert_eq!(deg.len(), self.num_vars, "degree length");
        if c.is_zero() || !self.in_range(&deg) {
            return;
        }
        let entry = self.coeffs.entry(deg.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&deg);
        }
    }

    /// Coefficient at a degree (zero if absent).
    pub fn coeff(&self, deg: &[i64]) -> Q {
        self.coeffs.get(deg).cloned().unwrap_or_else(Q::zero)
    }

    /// Nonzero terms in degree order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Q)> {
        self.coeffs.iter()
    }

    /// True iff all stored coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_shape(&self, other: &TruncatedSeries) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::Shape(format!(
                "{} vs {} grading variables",
                self.num_vars, other.num_vars
            )));
        }
        Ok(())
    }

    fn min_order(&self, other: &TruncatedSeries) -> Vec<i64> {
        self.reliable_order
            .iter()
            .zip(&other.reliable_order)
            .map(|(a, b)| *a.min(b))
            .collect()
    }

    /// Sum, reliable to the componentwise minimum order.
    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_shape(other)?;
        let mut out = Self::zero(self.num_vars, self.min_order(other));
        for (d, c) in self.terms().chain(other.terms()) {
            out.add_term(d.clone(), c.clone());
        }
        Ok(out)
    }

    /// Difference, reliable to the componentwise minimum order.
    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.add(&other.scale(&(-Q::from_integer(1.into()))))
    }

    /// Product, reliable to the componentwise minimum order.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_shape(other)?;
        let mut out = Self::zero(self.num_vars, self.min_order(other));
        for (d1, c1) in self.terms() {
            for (d2, c2) in other.terms() {
                let d: Vec<i64> = d1.iter().zip(d2).map(|(a, b)| a + b).collect();
                out.add_term(d, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Q) -> TruncatedSeries {
        let mut out = Self::zero(self.num_vars, self.reliable_order.clone());
        for (d, v) in self.terms() {
            out.add_term(d.clone(), v * c);
        }
        out
    }

    /// Multiply by the monomial `ž^e`; the reliable order moves with it.
    pub fn shift_degree(&self, e: &[i64]) -> TruncatedSeries {
        let order: Vec<i64> = self.reliable_order.iter().zip(e).map(|(o, s)| o + s).collect();
        let mut out = Self::zero(self.num_vars, order);
        for (d, v) in self.terms() {
            out.add_term(d.iter().zip(e).map(|(a, b)| a + b).collect(), v.clone());
        }
        out
    }

    /// Lower the reliable order (terms beyond it are dropped).
    pub fn truncate(&self, order: &[i64]) -> TruncatedSeries {
        let o: Vec<i64> = self
            .reliable_order
            .iter()
            .zip(order)
            .map(|(a, b)| *a.min(b))
            .collect();
        Self::from_terms(
            self.num_vars,
            self.terms().map(|(d, c)| (d.clone(), c.clone())),
            o,
        )
    }

    /// Map every coefficient through a degree-dependent function.
    pub fn map_coeffs(&self, f: impl Fn(&[i64], &Q) -> Q) -> TruncatedSeries {
        Self::from_terms(
            self.num_vars,
            self.terms().map(|(d, c)| (d.clone(), f(d, c))),
            self.reliable_order.clone(),
        )
    }

    /// JSON-friendly term list.
    pub fn to_terms(&self) -> Vec<SeriesTerm> {
        self.terms()
            .map(|(d, c)| SeriesTerm {
                deg: d.clone(),
                coeff: format_q(c),
            })
            .collect()
    }
}

/// One serialized term `{"deg": [...], "coeff": "p/q"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub deg: Vec<i64>,
    pub coeff: String,
}

/// Graded arithmetic entry point: add, multiply or scale.
pub fn series_combine(a: &TruncatedSeries, op: SeriesOp<'_>) -> Result<TruncatedSeries> {
    match op {
        SeriesOp::Add(b) => a.add(b),
        SeriesOp::Mul(b) => a.mul(b),
        SeriesOp::Scale(c) => Ok(a.scale(c)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::scalar::int;

    #[test]
    fn difference_of_squares() {
        let a = TruncatedSeries::from_terms(1, [(vec![0], int(1)), (vec![1], int(1))], vec![2]);
        let b = TruncatedSeries::from_terms(1, [(vec![0], int(1)), (vec![1], int(-1))], vec![2]);
        let p = series_combine(&a, SeriesOp::Mul(&b)).unwrap();
        let want = TruncatedSeries::from_terms(1, [(vec![0], int(1)), (vec![2], int(-1))], vec![2]);
        assert_eq!(p, want);
    }

    #[test]
    fn product_order_is_minimum() {
        let a = TruncatedSeries::constant(1, int(1), vec![3]);
        let b = TruncatedSeries::constant(1, int(1), vec![5]);
        assert_eq!(a.mul(&b).unwrap().reliable_order(), &[3]);
    }

    #[test]
    fn shape_mismatch() {
        let a = TruncatedSeries::constant(1, int(1), vec![3]);
        let b = TruncatedSeries::constant(2, int(1), vec![3, 3]);
        assert!(matches!(a.add(&b), Err(Error::Shape(_))));
    }

    #[test]
    fn multiply_by_one_is_identity() {
        let a = TruncatedSeries::from_terms(2, [(vec![0, 1], int(3)), (vec![2, 0], int(-5))], vec![2, 2]);
        let one = TruncatedSeries::constant(2, int(1), vec![2, 2]);
        assert_eq!(a.mul(&one).unwrap(), a);
    }
}
