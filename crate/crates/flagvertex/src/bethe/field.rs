//! Complex scalars for the Bethe solver: `f64` for the search phase and exact
//! rationals rounded to a fixed binary precision for refinement.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_traits::{Num, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::scalar::to_f64;
use crate::kernel::Q;

/// Complex number with rational parts.
pub type Mp = Complex<Q>;

/// Scalars the solver is generic over.
pub trait Field: Clone + Num + std::ops::Neg<Output = Self> + Send + Sync {
    /// Embed an exact rational.
    fn from_q(x: &Q) -> Self;
    /// Approximate modulus, used for pivoting and damping.
    fn mag(&self) -> f64;
    /// Normalize after arithmetic (rounding for rationals, identity for floats).
    fn tidy(self, bits: u32) -> Self;
}

impl Field for Complex64 {
    fn from_q(x: &Q) -> Self {
        Complex64::new(to_f64(x), 0.0)
    }
    fn mag(&self) -> f64 {
        self.norm()
    }
    fn tidy(self, _bits: u32) -> Self {
        self
    }
}

impl Field for Mp {
    fn from_q(x: &Q) -> Self {
        Complex::new(x.clone(), Q::zero())
    }
    fn mag(&self) -> f64 {
        to_f64(&self.norm_sqr()).sqrt()
    }
    fn tidy(self, bits: u32) -> Self {
        Complex::new(round_bits(&self.re, bits), round_bits(&self.im, bits))
    }
}

/// Round to the nearest multiple of `2^{-bits}` relative to the magnitude of `x`.
pub fn round_bits(x: &Q, bits: u32) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    let mag = x.numer().bits() as i64 - x.denom().bits() as i64;
    let shift = bits as i64 - mag;
    if shift <= 0 {
        return x.round();
    }
    let scale = Q::from_integer(BigInt::one() << shift as usize);
    (x * &scale).round() / scale
}

/// Binary working precision for a target number of decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 96
}

/// `f64` approximation of a multiprecision complex.
pub fn to_c64(z: &Mp) -> Complex64 {
    Complex64::new(to_f64(&z.re), to_f64(&z.im))
}

/// Exact lift of an `f64` complex.
pub fn from_c64(z: Complex64) -> Mp {
    let f = |x: f64| Q::from_float(x).unwrap_or_else(Q::zero);
    Complex::new(f(z.re), f(z.im))
}

/// `|z|² < 10^{-2 digits}`, decided exactly.
pub fn below(z: &Mp, digits: u32) -> bool {
    let eps = Q::new(BigInt::one(), num_traits::pow(BigInt::from(10), 2 * digits as usize));
    z.norm_sqr() < eps
}

/// Square root of a positive rational to `bits` binary digits.
pub fn sqrt_q(x: &Q, bits: u32) -> Result<Q> {
    if !x.is_positive() {
        return Err(Error::Invalid(format!("square root of nonpositive {x}")));
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        return Ok(Q::new(n, d));
    }
    let mut y = Q::from_float(to_f64(x).sqrt()).unwrap_or_else(Q::one);
    let two = Q::from_integer(2.into());
    for _ in 0..(bits.ilog2() + 4) {
        y = round_bits(&((&y + x / &y) / &two), bits + 32);
    }
    Ok(round_bits(&y, bits))
}

/// Decimal rendering with `digits` significant figures.
pub fn format_decimal(x: &Q, digits: u32) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let neg = x.is_negative();
    let ax = x.abs();
    let mut e = to_f64(&ax).log10().floor() as i64;
    let ten = BigInt::from(10);
    let scaled = |e: i64| -> BigInt {
        let p = digits as i64 - 1 - e;
        let v = if p >= 0 {
            &ax * Q::from_integer(num_traits::pow(ten.clone(), p as usize))
        } else {
            &ax / Q::from_integer(num_traits::pow(ten.clone(), (-p) as usize))
        };
        v.round().to_integer()
    };
    let mut m = scaled(e);
    let lim = num_traits::pow(ten.clone(), digits as usize);
    if m >= lim {
        e += 1;
        m = scaled(e);
    } else if m < num_traits::pow(ten.clone(), digits as usize - 1) {
        e -= 1;
        m = scaled(e);
    }
    let s = m.to_string();
    let (head, tail) = s.split_at(1);
    format!("{}{}.{}e{}", if neg { "-" } else { "" }, head, tail, e)
}

/// Decimal rendering of a complex value. A part smaller than `10^{-digits}|z|`
/// is printed as zero.
pub fn format_complex(z: &Mp, digits: u32) -> String {
    let eps = Q::new(BigInt::one(), num_traits::pow(BigInt::from(10), 2 * digits as usize)) * z.norm_sqr();
    let negligible = |x: &Q| x * x < eps;
    let im = &z.im;
    if im.is_zero() || negligible(im) {
        return format_decimal(&z.re, digits);
    }
    if negligible(&z.re) {
        return format!("{}i", format_decimal(im, digits));
    }
    let sign = if im.is_negative() { "-" } else { "+" };
    format!("{} {} {}i", format_decimal(&z.re, digits), sign, format_decimal(&im.abs(), digits))
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting on [`Field::mag`].
pub fn solve_dense<T: Field>(mut a: Vec<Vec<T>>, mut b: Vec<T>, bits: u32) -> Result<Vec<T>> {
    let k = a.len();
    for col in 0..k {
        let (piv, best) = (col..k)
            .map(|r| (r, a[r][col].mag()))
            .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= 0.0 || !best.is_finite() {
            return Err(Error::JacobianSingular(format!("no pivot in column {col}")));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..k {
            if a[r][col].is_zero() {
                continue;
            }
            let f = (a[r][col].clone() / a[col][col].clone()).tidy(bits);
            for c in col..k {
                let v = (a[r][c].clone() - f.clone() * a[col][c].clone()).tidy(bits);
                a[r][c] = v;
            }
            b[r] = (b[r].clone() - f * b[col].clone()).tidy(bits);
        }
    }
    let mut x = vec![T::zero(); k];
    for r in (0..k).rev() {
        let mut s = b[r].clone();
        for c in r + 1..k {
            s = s - a[r][c].clone() * x[c].clone();
        }
        x[r] = (s / a[r][r].clone()).tidy(bits);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    #[test]
    fn sqrt_of_square_is_exact() {
        assert_eq!(sqrt_q(&rat(9, 4), 100).unwrap(), rat(3, 2));
        let r = sqrt_q(&int(2), 200).unwrap();
        let err = &r * &r - int(2);
        assert!(below(&Complex::new(err, Q::zero()), 55));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(format_decimal(&rat(1, 3), 5), "3.3333e-1");
        assert_eq!(format_decimal(&int(-1250), 3), "-1.25e3");
        assert_eq!(format_decimal(&rat(999999, 1000000), 3), "1.00e0");
        let z = Mp::new(int(2), rat(1, 1_000_000));
        assert_eq!(format_complex(&z, 3), "2.00e0");
        assert_eq!(format_complex(&z, 8), "2.0000000e0 + 1.0000000e-6i");
        let tiny = Mp::new(rat(1, 1_000_000_000), rat(1, 1_000_000_000));
        assert_eq!(format_complex(&tiny, 2), "1.0e-9 + 1.0e-9i");
    }

    #[test]
    fn dense_solve() {
        let a = vec![
            vec![Mp::from_q(&int(2)), Mp::from_q(&int(1))],
            vec![Mp::from_q(&int(1)), Mp::from_q(&int(3))],
        ];
        let b = vec![Mp::from_q(&int(3)), Mp::from_q(&int(4))];
        let x = solve_dense(a, b, 100).unwrap();
        assert_eq!(x, vec![Mp::from_q(&int(1)), Mp::from_q(&int(1))]);
    }
}
