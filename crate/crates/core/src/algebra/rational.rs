//! Gaussian-rational scalars: complex numbers with exact rational real and
//! imaginary parts.
//!
//! [`ExactComplexRational`] is the coefficient field used throughout the
//! exact layer. Arithmetic is exact (arbitrary-precision rationals via
//! `num-rational`); conversion to `Complex64` is the only lossy step and is
//! always explicit.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// A complex number `re + im*i` with exact rational components.
///
/// The rational components are kept normalized by `BigRational` itself
/// (reduced fraction, positive denominator), so structural equality is
/// mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactComplexRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplexRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactComplexRational { re, im }
    }

    /// Purely real value from an integer.
    pub fn from_i64(n: i64) -> Self {
        ExactComplexRational {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    /// Purely real value `p/q`. Panics if `q == 0`.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "denominator must be nonzero");
        ExactComplexRational {
            re: BigRational::new(BigInt::from(p), BigInt::from(q)),
            im: BigRational::zero(),
        }
    }

    /// Value `p/q + (r/s) i`. Panics if `q == 0` or `s == 0`.
    pub fn from_ratios(p: i64, q: i64, r: i64, s: i64) -> Self {
        assert!(q != 0 && s != 0, "denominators must be nonzero");
        ExactComplexRational {
            re: BigRational::new(BigInt::from(p), BigInt::from(q)),
            im: BigRational::new(BigInt::from(r), BigInt::from(s)),
        }
    }

    pub fn zero() -> Self {
        ExactComplexRational {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        ExactComplexRational {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        ExactComplexRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ExactComplexRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `|self|^2 = re^2 + im^2`, an exact nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Exact multiplicative inverse. Errors on zero.
    pub fn checked_inv(&self) -> Result<Self, Error> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ExactComplexRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    /// Exact integer power; negative exponents invert first. Errors on
    /// `0^n` with `n < 0`.
    pub fn checked_pow(&self, n: i64) -> Result<Self, Error> {
        let base = if n < 0 {
            self.checked_inv()?
        } else {
            self.clone()
        };
        let mut e = n.unsigned_abs();
        let mut acc = ExactComplexRational::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Lossy conversion to a double-precision complex number.
    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

/// Converts a `BigRational` to the nearest `f64`, falling back to a scaled
/// division when the integer parts individually overflow.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        return v;
    }
    // Fallback: shift both parts down by a common power of two.
    let bits = r.numer().bits().max(r.denom().bits());
    let shift = bits.saturating_sub(900);
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

impl Add for &ExactComplexRational {
    type Output = ExactComplexRational;
    fn add(self, rhs: &ExactComplexRational) -> ExactComplexRational {
        ExactComplexRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &ExactComplexRational {
    type Output = ExactComplexRational;
    fn sub(self, rhs: &ExactComplexRational) -> ExactComplexRational {
        ExactComplexRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &ExactComplexRational {
    type Output = ExactComplexRational;
    fn mul(self, rhs: &ExactComplexRational) -> ExactComplexRational {
        // (a+bi)(c+di) = (ac - bd) + (ad + bc)i
        ExactComplexRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &ExactComplexRational {
    type Output = ExactComplexRational;
    /// Panics on division by zero; use [`ExactComplexRational::checked_inv`]
    /// on fallible paths.
    fn div(self, rhs: &ExactComplexRational) -> ExactComplexRational {
        let inv = rhs
            .checked_inv()
            .expect("division by zero Gaussian rational");
        self * &inv
    }
}

impl Neg for &ExactComplexRational {
    type Output = ExactComplexRational;
    fn neg(self) -> ExactComplexRational {
        ExactComplexRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

macro_rules! forward_value_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactComplexRational {
            type Output = ExactComplexRational;
            fn $method(self, rhs: ExactComplexRational) -> ExactComplexRational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ExactComplexRational> for ExactComplexRational {
            type Output = ExactComplexRational;
            fn $method(self, rhs: &ExactComplexRational) -> ExactComplexRational {
                (&self).$method(rhs)
            }
        }
        impl $trait<ExactComplexRational> for &ExactComplexRational {
            type Output = ExactComplexRational;
            fn $method(self, rhs: ExactComplexRational) -> ExactComplexRational {
                self.$method(&rhs)
            }
        }
    };
}

forward_value_binop!(Add, add);
forward_value_binop!(Sub, sub);
forward_value_binop!(Mul, mul);
forward_value_binop!(Div, div);

impl Neg for ExactComplexRational {
    type Output = ExactComplexRational;
    fn neg(self) -> ExactComplexRational {
        -(&self)
    }
}

/// Formats a rational without a denominator when it is an integer
/// (`3`, `-5/2`, ...).
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExactComplexRational {
    /// Standalone form: `3/2`, `-1`, `i`, `-i`, `2*i`, `1/2+3*i`, `1/2-i`.
    /// The polynomial printer adds parentheses where context requires them.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", rational_string(&self.re));
        }
        let im_part = |im: &BigRational| -> String {
            let a = im.abs();
            if a.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", rational_string(&a))
            }
        };
        if self.re.is_zero() {
            if self.im.is_negative() {
                return write!(f, "-{}", im_part(&self.im));
            }
            return write!(f, "{}", im_part(&self.im));
        }
        let sign = if self.im.is_negative() { "-" } else { "+" };
        write!(f, "{}{}{}", rational_string(&self.re), sign, im_part(&self.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: i64, q: i64, r: i64, s: i64) -> ExactComplexRational {
        ExactComplexRational::from_ratios(p, q, r, s)
    }

    #[test]
    fn field_arithmetic_round_trips() {
        let a = c(3, 4, -2, 5);
        let b = c(-1, 3, 7, 2);
        let prod = &a * &b;
        let back = &prod / &b;
        assert_eq!(back, a);
        assert_eq!(&a - &a, ExactComplexRational::zero());
        assert_eq!(&a + &(-&a), ExactComplexRational::zero());
    }

    #[test]
    fn inverse_of_i_is_minus_i() {
        let i = ExactComplexRational::i();
        assert_eq!(i.checked_inv().unwrap(), -&ExactComplexRational::i());
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(
            ExactComplexRational::zero().checked_inv(),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn integer_powers_match_repeated_multiplication() {
        let a = c(2, 3, 1, 2);
        let mut acc = ExactComplexRational::one();
        for _ in 0..5 {
            acc = &acc * &a;
        }
        assert_eq!(a.checked_pow(5).unwrap(), acc);
        assert_eq!(
            a.checked_pow(-5).unwrap(),
            acc.checked_inv().unwrap()
        );
        assert_eq!(a.checked_pow(0).unwrap(), ExactComplexRational::one());
    }

    #[test]
    fn norm_sqr_is_exact() {
        let a = c(3, 5, 4, 5);
        assert_eq!(a.norm_sqr(), BigRational::one());
    }

    #[test]
    fn display_forms() {
        assert_eq!(c(1, 2, 0, 1).to_string(), "1/2");
        assert_eq!(c(-3, 1, 0, 1).to_string(), "-3");
        assert_eq!(c(0, 1, 1, 1).to_string(), "i");
        assert_eq!(c(0, 1, -1, 1).to_string(), "-i");
        assert_eq!(c(0, 1, 2, 3).to_string(), "2/3*i");
        assert_eq!(c(1, 2, 3, 4).to_string(), "1/2+3/4*i");
        assert_eq!(c(1, 2, -1, 1).to_string(), "1/2-i");
    }

    #[test]
    fn to_complex64_is_close() {
        let a = c(1, 3, -2, 7);
        let v = a.to_complex64();
        assert!((v.re - 1.0 / 3.0).abs() < 1e-15);
        assert!((v.im + 2.0 / 7.0).abs() < 1e-15);
    }
}
