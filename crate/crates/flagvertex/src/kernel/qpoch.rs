//! q-Pochhammer symbols and the vertex bracket `{x}_d`.

use num_traits::{One, Zero};

use super::params::ParamPoint;
use super::scalar::{qpow, Q};
use crate::error::{Error, Result};

/// `(x; q)_d` for an explicit `q`, with the splice convention for `d < 0`:
/// `(x; q)_{-m} = Π_{i=1}^{m} (1 - x q^{-i})^{-1}`.
pub fn qpoch_with(x: &Q, d: i64, q: &Q) -> Result<Q> {
    let mut acc = Q::one();
    if d >= 0 {
        let mut qi = Q::one();
        for _ in 0..d {
            acc *= Q::one() - &qi * x;
            qi *= q;
        }
    } else {
        let qinv = q.recip();
        let mut qi = qinv.clone();
        for i in 1..=(-d) {
            let f = Q::one() - x * &qi;
            if f.is_zero() {
                return Err(Error::Pole(format!("(x;q)_{d}: factor 1 - x q^-{i} vanishes")));
            }
            acc /= f;
            qi *= &qinv;
        }
    }
    Ok(acc)
}

/// `(x; q)_d` at the `q` of a parameter point.
pub fn qpoch(x: &Q, d: i64, params: &ParamPoint) -> Result<Q> {
    qpoch_with(x, d, &params.q())
}

/// `{x}_d = (ℏ/x; q)_d / (q/x; q)_d · (-q^{1/2} ℏ^{-1/2})^d`.
pub fn curly_bracket(x: &Q, d: i64, params: &ParamPoint) -> Result<Q> {
    if d == 0 {
        return Ok(Q::one());
    }
    if x.is_zero() {
        return Err(Error::Pole("bracket argument is zero".into()));
    }
    let q = params.q();
    let num = qpoch_with(&(params.hbar() / x), d, &q)?;
    let den = qpoch_with(&(&q / x), d, &q)?;
    if den.is_zero() {
        return Err(Error::Pole(format!("bracket {{{x}}}_{d}: denominator vanishes")));
    }
    let sign = qpow(&(-(&params.q_half / &params.h_half)), d)?;
    Ok(num / den * sign)
}
