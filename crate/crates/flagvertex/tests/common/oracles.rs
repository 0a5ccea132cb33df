//! Closed-form series written directly from q-Pochhammer products, without
//! going through the library's chamber enumeration.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn pow(x: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// `(x; q)_d` for `d ≥ 0`.
pub fn poch(x: &Q, d: i64, qq: &Q) -> Q {
    let mut acc = Q::one();
    let mut y = x.clone();
    for _ in 0..d {
        acc *= Q::one() - &y;
        y *= qq;
    }
    acc
}

/// Data of `T*ℙ¹` at the fixed point `{a_p}`: `x = a_p/a_p̄`.
pub struct Tp1 {
    pub x: Q,
    pub q: Q,
    pub hbar: Q,
}

impl Tp1 {
    pub fn t(&self) -> Q {
        &self.q / &self.hbar
    }

    /// `ž`-coefficient `(ℏ;q)_d (ℏ x̄;q)_d / ((q;q)_d (q x̄;q)_d) · t^{2d}` with `x̄ = 1/x`.
    pub fn zh_coefficient(&self, d: i64) -> Q {
        let xb = self.x.recip();
        let num = poch(&self.hbar, d, &self.q) * poch(&(&self.hbar * &xb), d, &self.q);
        let den = poch(&self.q, d, &self.q) * poch(&(&self.q * &xb), d, &self.q);
        num / den * pow(&self.t(), 2 * d)
    }

    /// Coefficient `(t;q)_d (t x;q)_d / ((x;q)_d (q;q)_d)` of `₂φ₁(t, t x; x; q; ·)`.
    pub fn literal_2phi1(&self, d: i64) -> Q {
        let t = self.t();
        let num = poch(&t, d, &self.q) * poch(&(&t * &self.x), d, &self.q);
        let den = poch(&self.x, d, &self.q) * poch(&self.q, d, &self.q);
        num / den
    }

    /// `ℏ → ∞` limit of the `ž`-coefficient: `x̄^d q^{d(d+1)} / ((q;q)_d (q x̄;q)_d)`.
    pub fn toda_coefficient(&self, d: i64) -> Q {
        let xb = self.x.recip();
        pow(&xb, d) * pow(&self.q, d * (d + 1)) / (poch(&self.q, d, &self.q) * poch(&(&self.q * &xb), d, &self.q))
    }

    /// `₁φ₀`-type coefficient `1/((x;q)_d (q;q)_d)`.
    pub fn literal_1phi0(&self, d: i64) -> Q {
        (poch(&self.x, d, &self.q) * poch(&self.q, d, &self.q)).recip()
    }
}

/// Whether `v_d = c^d l_d` for one constant `c` fixed at `d = 1`, for all `d ≤ order`.
/// Returns the first failing degree.
pub fn geometric_mismatch(v: &[Q], l: &[Q]) -> Option<usize> {
    if l.len() < 2 || l[1].is_zero() {
        return Some(1);
    }
    let c = &v[1] / &l[1];
    (0..v.len()).find(|&d| v[d] != pow(&c, d as i64) * &l[d])
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}
