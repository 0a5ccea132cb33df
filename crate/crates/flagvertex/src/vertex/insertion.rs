//! Descendant insertions: a small expression language over level variables.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := power (('*' | '/') power)*
//! power  := unary ('^' ['-'] int)?
//! unary  := '-' unary | atom
//! atom   := number | 's[' int '][' int ']' | 'a[' int ']' | 'q' | 'h' | 't' | '(' expr ')'
//! ```
//!
//! `s[i][j]` is the `j`-th variable of level `i` (both one-based), `a[k]` the
//! `k`-th equivariant parameter, `q` and `t` the derived symbols and `h` is
//! `ℏ^{1/2}`.

use std::fmt;
use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::kernel::{parse_q, qpow, ParamPoint, Q};

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Q),
    Var(usize, usize),
    A(usize),
    QSym,
    HHalf,
    TSym,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    /// Evaluate with level values `levels[i][j]` (zero-based here).
    pub fn eval(&self, levels: &[Vec<Q>], params: &ParamPoint) -> Result<Q> {
        Ok(match self {
            Expr::Const(c) => c.clone(),
            Expr::Var(i, j) => levels
                .get(*i)
                .and_then(|l| l.get(*j))
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("s[{}][{}] out of range", i + 1, j + 1)))?,
            Expr::A(k) => params
                .a
                .get(*k)
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("a[{}] out of range", k + 1)))?,
            Expr::QSym => params.q(),
            Expr::HHalf => params.h_half.clone(),
            Expr::TSym => params.t(),
            Expr::Neg(e) => -e.eval(levels, params)?,
            Expr::Add(a, b) => a.eval(levels, params)? + b.eval(levels, params)?,
            Expr::Sub(a, b) => a.eval(levels, params)? - b.eval(levels, params)?,
            Expr::Mul(a, b) => a.eval(levels, params)? * b.eval(levels, params)?,
            Expr::Div(a, b) => {
                let d = b.eval(levels, params)?;
                crate::kernel::scalar::recip(&d)
                    .map_err(|_| Error::Pole("insertion denominator vanishes".into()))?
                    * a.eval(levels, params)?
            }
            Expr::Pow(e, k) => qpow(&e.eval(levels, params)?, *k)?,
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "({c})"),
            Expr::Var(i, j) => write!(f, "s[{}][{}]", i + 1, j + 1),
            Expr::A(k) => write!(f, "a[{}]", k + 1),
            Expr::QSym => write!(f, "q"),
            Expr::HHalf => write!(f, "h"),
            Expr::TSym => write!(f, "t"),
            Expr::Neg(e) => write!(f, "-({e})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/{b}"),
            Expr::Pow(e, k) => write!(f, "({e})^{k}"),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn int(&mut self) -> Result<i64> {
        self.skip();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("expected integer"))
    }

    fn index(&mut self) -> Result<usize> {
        self.expect(b'[')?;
        let i = self.int()?;
        self.expect(b']')?;
        if i < 1 {
            return Err(self.err("indices are one-based"));
        }
        Ok(i as usize - 1)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.unary()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let k = self.int()?;
            return Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b's') => {
                self.pos += 1;
                let i = self.index()?;
                let j = self.index()?;
                Ok(Expr::Var(i, j))
            }
            Some(b'a') => {
                self.pos += 1;
                Ok(Expr::A(self.index()?))
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(Expr::QSym)
            }
            Some(b'h') => {
                self.pos += 1;
                Ok(Expr::HHalf)
            }
            Some(b't') => {
                self.pos += 1;
                Ok(Expr::TSym)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'.')
                {
                    self.pos += 1;
                }
                let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                Ok(Expr::Const(parse_q(txt)?))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

/// A descendant insertion `τ`, evaluated at the displaced points `x_{i,j} q^{-d_{i,j}}`.
#[derive(Clone)]
pub struct Insertion {
    expr: Arc<Expr>,
    source: String,
}

impl Insertion {
    /// The trivial insertion `τ = 1`.
    pub fn one() -> Self {
        Insertion {
            expr: Arc::new(Expr::Const(Q::one())),
            source: "1".into(),
        }
    }

    /// Parse from the expression grammar.
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser {
            s: src.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(Insertion {
            expr: Arc::new(e),
            source: src.to_string(),
        })
    }

    /// Wrap an expression tree.
    pub fn from_expr(e: Expr) -> Self {
        let source = e.to_string();
        Insertion {
            expr: Arc::new(e),
            source,
        }
    }

    /// `λ + μ·s[level][1]`.
    pub fn linear(lambda: Q, mu: Q, level: usize) -> Self {
        Self::from_expr(Expr::Add(
            Box::new(Expr::Const(lambda)),
            Box::new(Expr::Mul(Box::new(Expr::Const(mu)), Box::new(Expr::Var(level, 0)))),
        ))
    }

    /// First power sum of one level, `Σ_j s[level][j]` for `size` variables.
    pub fn power_sum(level: usize, size: usize) -> Self {
        let mut e = Expr::Var(level, 0);
        for j in 1..size {
            e = Expr::Add(Box::new(e), Box::new(Expr::Var(level, j)));
        }
        Self::from_expr(e)
    }

    /// True for the constant insertion 1.
    pub fn is_one(&self) -> bool {
        matches!(&*self.expr, Expr::Const(c) if c.is_one())
    }

    /// Source text.
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Evaluate at per-level variable values.
    pub fn eval(&self, levels: &[Vec<Q>], params: &ParamPoint) -> Result<Q> {
        self.expr.eval(levels, params)
    }

    /// Spot-check symmetry within each level by reversing that level's values.
    pub fn is_symmetric_at(&self, levels: &[Vec<Q>], params: &ParamPoint) -> Result<bool> {
        let base = self.eval(levels, params)?;
        for m in 0..levels.len() {
            let mut perm = levels.to_vec();
            perm[m].reverse();
            if self.eval(&perm, params)? != base {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for Insertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Insertion({})", self.source)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    fn params() -> ParamPoint {
        ParamPoint::new(rat(1, 2), rat(1, 3), vec![int(2), int(3)], vec![int(1), int(5)], 4).unwrap()
    }

    #[test]
    fn parse_and_eval() {
        let i = Insertion::parse("(s[1][1] - a[2])/(a[1]-a[2]) + 2*h^2 - q^-1").unwrap();
        let v = i.eval(&[vec![int(7)]], &params()).unwrap();
        assert_eq!(v, int(-4) + rat(2, 9) - int(4));
    }

    #[test]
    fn power_sum_is_symmetric() {
        let i = Insertion::power_sum(0, 2);
        assert!(i.is_symmetric_at(&[vec![int(2), int(5)]], &params()).unwrap());
        let j = Insertion::parse("s[1][1]").unwrap();
        assert!(!j.is_symmetric_at(&[vec![int(2), int(5)]], &params()).unwrap());
    }

    #[test]
    fn parse_errors() {
        assert!(Insertion::parse("s[0][1]").is_err());
        assert!(Insertion::parse("1 +").is_err());
        assert!(Insertion::parse("x").is_err());
    }
}
