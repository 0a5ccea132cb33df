//! Formal products of `φ(x) = Π_{i≥0}(1 - q^i x)` with canonical q-shift rewriting.
//!
//! A [`PhiProduct`] stores `Π φ(m)^{e}` over monomials `m` with zero q-exponent,
//! together with a rational prefactor `Π (1 - m')^{e'}`. Integer q-powers in a
//! φ argument are pulled into the prefactor by the two rules
//! `φ(q m) = φ(m)/(1 - m)` and `φ(q^{-1} m) = (1 - q^{-1} m) φ(m)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::scalar::{qpow, Q};
use crate::error::{Error, Result};

/// A formal symbol appearing in φ arguments.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// Equivariant parameter `a_{k+1}` (zero-based index).
    A(usize),
    /// Integration placeholder `s_{m+1, j+1}` (zero-based level and slot).
    S(usize, usize),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::A(k) => write!(f, "a{}", k + 1),
            Symbol::S(m, j) => write!(f, "s{}_{}", m + 1, j + 1),
        }
    }
}

/// `t^{t_pow} q^{q_pow} Π sym^{e}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub t_pow: i64,
    pub q_pow: i64,
    pub vars: BTreeMap<Symbol, i64>,
}

impl Monomial {
    /// The unit monomial.
    pub fn one() -> Self {
        Monomial::default()
    }

    /// A single symbol.
    pub fn var(s: Symbol) -> Self {
        let mut vars = BTreeMap::new();
        vars.insert(s, 1);
        Monomial {
            vars,
            ..Default::default()
        }
    }

    /// `num / den`.
    pub fn ratio(num: Symbol, den: Symbol) -> Self {
        Monomial::var(num).mul(&Monomial::var(den).inv())
    }

    /// Multiply by `t^k`.
    pub fn with_t(mut self, k: i64) -> Self {
        self.t_pow += k;
        self
    }

    /// Multiply by `q^k`.
    pub fn with_q(mut self, k: i64) -> Self {
        self.q_pow += k;
        self
    }

    /// Product of monomials.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        out.t_pow += other.t_pow;
        out.q_pow += other.q_pow;
        for (s, e) in &other.vars {
            let v = out.vars.entry(s.clone()).or_insert(0);
            *v += e;
            if *v == 0 {
                out.vars.remove(s);
            }
        }
        out
    }

    /// Inverse monomial.
    pub fn inv(&self) -> Monomial {
        Monomial {
            t_pow: -self.t_pow,
            q_pow: -self.q_pow,
            vars: self.vars.iter().map(|(s, e)| (s.clone(), -e)).collect(),
        }
    }

    /// Exponent of a symbol.
    pub fn degree_in(&self, s: &Symbol) -> i64 {
        self.vars.get(s).copied().unwrap_or(0)
    }

    /// Substitute `s -> q^{dir} s`.
    pub fn shift(&self, s: &Symbol, dir: i64) -> Monomial {
        let mut out = self.clone();
        out.q_pow += dir * self.degree_in(s);
        out
    }

    /// Numeric value under an assignment of the symbols.
    pub fn eval(&self, assign: &dyn Fn(&Symbol) -> Q, q: &Q, t: &Q) -> Result<Q> {
        let mut v = qpow(t, self.t_pow)? * qpow(q, self.q_pow)?;
        for (s, e) in &self.vars {
            v *= qpow(&assign(s), *e)?;
        }
        Ok(v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.t_pow != 0 {
            parts.push(format!("t^{}", self.t_pow));
        }
        if self.q_pow != 0 {
            parts.push(format!("q^{}", self.q_pow));
        }
        for (s, e) in &self.vars {
            parts.push(if *e == 1 { s.to_string() } else { format!("{s}^{e}") });
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Canonical formal product of φ symbols with a rational prefactor.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PhiProduct {
    factors: BTreeMap<Monomial, i64>,
    prefactor: BTreeMap<Monomial, i64>,
}

fn bump(map: &mut BTreeMap<Monomial, i64>, m: Monomial, e: i64) {
    if e == 0 {
        return;
    }
    let v = map.entry(m.clone()).or_insert(0);
    *v += e;
    if *v == 0 {
        map.remove(&m);
    }
}

impl PhiProduct {
    /// The empty product.
    pub fn one() -> Self {
        PhiProduct::default()
    }

    /// `φ(m)^{power}`, canonicalized.
    pub fn phi(m: Monomial, power: i64) -> Self {
        let mut p = PhiProduct::one();
        p.push_phi(m, power);
        p
    }

    /// Multiply in `φ(m)^{power}`, rewriting any q-power of `m` into the prefactor.
    pub fn push_phi(&mut self, m: Monomial, power: i64) {
        let k = m.q_pow;
        let base = Monomial { q_pow: 0, ..m };
        if k > 0 {
            for i in 0..k {
                bump(&mut self.prefactor, base.clone().with_q(i), -power);
            }
        } else if k < 0 {
            for i in 1..=(-k) {
                bump(&mut self.prefactor, base.clone().with_q(-i), power);
            }
        }
        bump(&mut self.factors, base, power);
    }

    /// Multiply in a prefactor factor `(1 - m)^{power}`.
    pub fn push_linear(&mut self, m: Monomial, power: i64) {
        bump(&mut self.prefactor, m, power);
    }

    /// Product of two φ-products.
    pub fn mul(&self, other: &PhiProduct) -> PhiProduct {
        let mut out = self.clone();
        for (m, e) in &other.factors {
            bump(&mut out.factors, m.clone(), *e);
        }
        for (m, e) in &other.prefactor {
            bump(&mut out.prefactor, m.clone(), *e);
        }
        out
    }

    /// Canonical φ factors `m -> exponent` (all with zero q-exponent).
    pub fn factors(&self) -> &BTreeMap<Monomial, i64> {
        &self.factors
    }

    /// Prefactor factors `m -> exponent` meaning `Π (1 - m)^{exponent}`.
    pub fn prefactor(&self) -> &BTreeMap<Monomial, i64> {
        &self.prefactor
    }

    /// True iff the prefactor is exactly 1.
    pub fn prefactor_is_one(&self) -> bool {
        self.prefactor.is_empty()
    }

    /// Same φ factors, unit prefactor.
    pub fn without_prefactor(&self) -> PhiProduct {
        PhiProduct {
            factors: self.factors.clone(),
            prefactor: BTreeMap::new(),
        }
    }

    /// Substitute `s -> q^{dir} s` everywhere and re-canonicalize.
    pub fn shift(&self, s: &Symbol, dir: i64) -> PhiProduct {
        let mut out = PhiProduct::one();
        for (m, e) in &self.prefactor {
            bump(&mut out.prefactor, m.shift(s, dir), *e);
        }
        for (m, e) in &self.factors {
            out.push_phi(m.shift(s, dir), *e);
        }
        out
    }

    /// Evaluate the rational prefactor; flags `(1 - m)^{-e}` with `m = 1`.
    pub fn eval_prefactor(&self, assign: &dyn Fn(&Symbol) -> Q, q: &Q, t: &Q) -> Result<Q> {
        let mut v = Q::one();
        for (m, e) in &self.prefactor {
            let f = Q::one() - m.eval(assign, q, t)?;
            if f.is_zero() {
                if *e < 0 {
                    return Err(Error::RewritePole(format!("factor (1 - {m}) vanishes")));
                }
                return Ok(Q::zero());
            }
            v *= qpow(&f, *e)?;
        }
        Ok(v)
    }
}

impl fmt::Display for PhiProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (m, e) in &self.prefactor {
            parts.push(format!("(1-{m})^{e}"));
        }
        for (m, e) in &self.factors {
            parts.push(format!("phi({m})^{e}"));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// `phi_shift(p, s, ±1)`: shift the symbol by `q^{±1}` and re-canonicalize.
pub fn phi_shift(p: &PhiProduct, s: &Symbol, direction: i64) -> PhiProduct {
    p.shift(s, direction)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s_over_a() -> Monomial {
        Monomial::ratio(Symbol::S(0, 0), Symbol::A(0))
    }

    #[test]
    fn shift_denominator_symbol_up() {
        let p = PhiProduct::phi(s_over_a(), 1);
        let r = phi_shift(&p, &Symbol::A(0), 1);
        assert_eq!(r.factors(), p.factors());
        let mut want = BTreeMap::new();
        want.insert(s_over_a().with_q(-1), 1);
        assert_eq!(r.prefactor(), &want);
    }

    #[test]
    fn shift_numerator_symbol_twice() {
        let p = PhiProduct::phi(s_over_a(), 1);
        let s = Symbol::S(0, 0);
        let r = phi_shift(&phi_shift(&p, &s, 1), &s, 1);
        let mut want = BTreeMap::new();
        want.insert(s_over_a(), -1);
        want.insert(s_over_a().with_q(1), -1);
        assert_eq!(r.prefactor(), &want);
        assert_eq!(r.factors(), p.factors());
    }

    #[test]
    fn round_trip_is_identity() {
        let p = PhiProduct::phi(s_over_a().with_t(1), 2).mul(&PhiProduct::phi(s_over_a(), -1));
        for s in [Symbol::A(0), Symbol::S(0, 0)] {
            let r = phi_shift(&phi_shift(&p, &s, 1), &s, -1);
            assert_eq!(r, p);
            assert!(r.prefactor_is_one());
        }
    }

    #[test]
    fn rewrite_pole_is_flagged() {
        let p = PhiProduct::phi(s_over_a(), 1);
        let r = phi_shift(&p, &Symbol::S(0, 0), 1);
        let assign = |_: &Symbol| Q::one();
        let e = r.eval_prefactor(&assign, &Q::from_integer(2.into()), &Q::one());
        assert!(matches!(e, Err(Error::RewritePole(_))));
    }
}
