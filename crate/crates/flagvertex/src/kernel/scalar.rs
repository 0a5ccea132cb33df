//! Exact rational scalars and their string serialization.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

/// Exact scalar type used by every exact computation in the crate.
pub type Q = BigRational;

/// `n / d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as an exact rational.
pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Integer power with support for negative exponents.
pub fn qpow(x: &Q, e: i64) -> Result<Q> {
    if e >= 0 {
        Ok(num_traits::pow(x.clone(), e as usize))
    } else if x.is_zero() {
        Err(Error::Pole("negative power of zero".into()))
    } else {
        Ok(num_traits::pow(x.recip(), (-e) as usize))
    }
}

/// Exact reciprocal, failing on zero.
pub fn recip(x: &Q) -> Result<Q> {
    if x.is_zero() {
        Err(Error::Pole("division by zero".into()))
    } else {
        Ok(x.recip())
    }
}

/// Render as `"num/den"` (integers render without a denominator).
pub fn format_q(x: &Q) -> String {
    x.to_string()
}

/// Parse `"p/q"`, `"p"` or a finite decimal such as `"0.25"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("{s}: zero denominator")));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
        let n = BigInt::from_str(&digits).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    BigInt::from_str(s)
        .map(Q::from_integer)
        .map_err(|e| Error::Parse(format!("{s}: {e}")))
}

/// Approximate value as `f64`, used only for diagnostics and seeding.
pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        let n = x.numer().bits() as i64;
        let d = x.denom().bits() as i64;
        let shift = n.max(d) - 60;
        let scale = num_traits::pow(BigInt::from(2), shift.max(0) as usize);
        let nn = (x.numer() / &scale).to_f64().unwrap_or(0.0);
        let dd = (x.denom() / &scale).to_f64().unwrap_or(1.0);
        nn / dd
    })
}

/// Random nonzero rational with small numerator and denominator.
pub fn random_q<R: Rng + ?Sized>(rng: &mut R) -> Q {
    loop {
        let n: i64 = rng.gen_range(-60..=60);
        let d: i64 = rng.gen_range(1..=37);
        if n != 0 {
            return rat(n, d);
        }
    }
}

/// Random tuple of pairwise distinct nonzero rationals whose pairwise ratios avoid `±1`.
pub fn random_distinct<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::with_capacity(len);
    while out.len() < len {
        let x = random_q(rng);
        if out.iter().all(|y| y != &x && y != &(-x.clone())) {
            out.push(x);
        }
    }
    out
}

/// Absolute value helper.
pub fn abs(x: &Q) -> Q {
    x.abs()
}

/// True iff `x == 1`.
pub fn is_one(x: &Q) -> bool {
    x.is_one()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum QRepr {
    Text(String),
    Int(i64),
}

impl QRepr {
    fn into_q(self) -> Result<Q> {
        match self {
            QRepr::Text(s) => parse_q(&s),
            QRepr::Int(i) => Ok(int(i)),
        }
    }
}

/// Serde adapter for a single rational stored as `"p/q"`.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        QRepr::deserialize(d)?
            .into_q()
            .map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a sequence of rationals stored as `["p/q", ...]`.
pub mod serde_qvec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(x: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(x.len()))?;
        for v in x {
            seq.serialize_element(&format_q(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        Vec::<QRepr>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_q().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("16/9").unwrap(), rat(16, 9));
        assert_eq!(parse_q("-4").unwrap(), int(-4));
        assert_eq!(parse_q("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_q("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_q("1/0").is_err());
    }

    #[test]
    fn format_is_reduced() {
        assert_eq!(format_q(&rat(4, 6)), "2/3");
        assert_eq!(format_q(&rat(8, -2)), "-4");
    }

    #[test]
    fn negative_powers() {
        assert_eq!(qpow(&rat(2, 3), -2).unwrap(), rat(9, 4));
        assert!(qpow(&int(0), -1).is_err());
    }
}
