//! Exact parameter points: `q^{1/2}`, `ℏ^{1/2}`, equivariant and Kähler parameters.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::scalar::{qpow, serde_q, serde_qvec, Q};
use crate::error::{Error, Result};

/// A generic exact specialization of all scalar symbols.
///
/// Only the half powers `q^{1/2}` and `ℏ^{1/2}` are stored; `q`, `ℏ` and
/// `t = q/ℏ` are always derived from them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamPoint {
    #[serde(with = "serde_q")]
    pub q_half: Q,
    #[serde(with = "serde_q")]
    pub h_half: Q,
    #[serde(with = "serde_qvec")]
    pub a: Vec<Q>,
    #[serde(with = "serde_qvec", default)]
    pub zeta: Vec<Q>,
    #[serde(default)]
    pub guard_window: u32,
}

impl ParamPoint {
    /// Build and validate a parameter point.
    pub fn new(q_half: Q, h_half: Q, a: Vec<Q>, zeta: Vec<Q>, guard_window: u32) -> Result<Self> {
        let p = ParamPoint {
            q_half,
            h_half,
            a,
            zeta,
            guard_window,
        };
        p.validate()?;
        Ok(p)
    }

    /// Default guard window for a truncation order and framing rank.
    pub fn default_guard(max_order: usize, w: usize) -> u32 {
        (max_order + w + 2) as u32
    }

    /// Check nonvanishing, distinctness and the genericity guard.
    pub fn validate(&self) -> Result<()> {
        if self.q_half.is_zero() || self.h_half.is_zero() {
            return Err(Error::Invalid("q_half and h_half must be nonzero".into()));
        }
        if self.a.iter().chain(self.zeta.iter()).any(|x| x.is_zero()) {
            return Err(Error::Invalid("equivariant and Kähler parameters must be nonzero".into()));
        }
        let q = self.q();
        let g = self.guard_window as i64;
        for (k, ak) in self.a.iter().enumerate() {
            for (l, al) in self.a.iter().enumerate() {
                if k == l {
                    continue;
                }
                if ak == al {
                    return Err(Error::Invalid(format!("a_{} = a_{}", k + 1, l + 1)));
                }
                for m in -g..=g {
                    if ak == &(al * qpow(&q, m)?) {
                        return Err(Error::Invalid(format!(
                            "genericity guard: a_{} = q^{m} a_{}",
                            k + 1,
                            l + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parse from JSON and validate.
    pub fn from_json(s: &str) -> Result<Self> {
        let p: ParamPoint =
            serde_json::from_str(s).map_err(|e| Error::Invalid(format!("params: {e}")))?;
        p.validate()?;
        Ok(p)
    }

    /// `q = (q^{1/2})^2`.
    pub fn q(&self) -> Q {
        &self.q_half * &self.q_half
    }

    /// `ℏ = (ℏ^{1/2})^2`.
    pub fn hbar(&self) -> Q {
        &self.h_half * &self.h_half
    }

    /// `t = q/ℏ`.
    pub fn t(&self) -> Q {
        self.q() / self.hbar()
    }

    /// `t^{1/2} = q^{1/2}/ℏ^{1/2}`.
    pub fn t_half(&self) -> Q {
        &self.q_half / &self.h_half
    }

    /// Number of equivariant parameters.
    pub fn w(&self) -> usize {
        self.a.len()
    }

    /// Same point with replaced equivariant parameters (not re-validated).
    pub fn with_a(&self, a: Vec<Q>) -> Self {
        ParamPoint {
            a,
            ..self.clone()
        }
    }

    /// Same point with replaced Kähler parameters.
    pub fn with_zeta(&self, zeta: Vec<Q>) -> Self {
        ParamPoint {
            zeta,
            ..self.clone()
        }
    }

    /// Apply `a_k -> q^{shift_k} a_k` (not re-validated).
    pub fn shifted(&self, shift: &[i64]) -> Result<Self> {
        let q = self.q();
        let a = self
            .a
            .iter()
            .zip(shift)
            .map(|(ak, &s)| Ok(ak * qpow(&q, s)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.with_a(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::scalar::{int, rat};

    fn sample() -> ParamPoint {
        ParamPoint::new(rat(1, 2), rat(1, 3), vec![int(2), int(3)], vec![int(1), int(5)], 8).unwrap()
    }

    #[test]
    fn derived_symbols() {
        let p = sample();
        assert_eq!(p.q(), rat(1, 4));
        assert_eq!(p.hbar(), rat(1, 9));
        assert_eq!(p.t(), rat(9, 4));
        assert_eq!(p.t_half(), rat(3, 2));
    }

    #[test]
    fn guard_rejects_q_related_pair() {
        let r = ParamPoint::new(rat(1, 2), rat(1, 3), vec![int(2), rat(1, 2)], vec![], 2);
        assert!(r.is_err());
        let ok = ParamPoint::new(rat(1, 2), rat(1, 3), vec![int(2), rat(1, 2)], vec![], 0);
        assert!(ok.is_ok());
    }

    #[test]
    fn json_round_trip() {
        let p = sample();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"1/2\""));
        assert_eq!(ParamPoint::from_json(&s).unwrap(), p);
    }
}
