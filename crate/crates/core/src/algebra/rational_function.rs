//! Rational functions in one variable over the Gaussian rationals.
//!
//! Values are kept in a canonical form: the denominator is monic and
//! coprime to the numerator, and the zero function is `0/1`. Structural
//! equality is therefore equality of functions.
//!
//! Besides field arithmetic the type provides the two operators the rest of
//! the crate is built on: the dilation `f(z) -> f(qz)` and the divided
//! difference
//!
//! ```text
//! Δ_q f(z) = (f(qz) − f(z)) / ((q−1)z),
//! ```
//!
//! both computed exactly.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::polynomial::{horner, Polynomial};
use super::rational::ExactComplexRational;
use crate::error::Error;
use crate::value::EvalValue;

/// A quotient of polynomials in canonical form (monic denominator, reduced).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Builds `num/den` in canonical form. Errors when `den` is the zero
    /// polynomial.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction {
                num: Polynomial::zero(),
                den: Polynomial::one(),
            });
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            let (nq, nr) = num.divmod(&g).expect("gcd divides numerator");
            let (dq, dr) = den.divmod(&g).expect("gcd divides denominator");
            debug_assert!(nr.is_zero() && dr.is_zero());
            (nq, dq)
        };
        let lc = den.leading_coeff().expect("denominator nonzero").clone();
        let inv = lc.checked_inv().expect("leading coefficient nonzero");
        Ok(RationalFunction {
            num: num.mul_scalar(&inv),
            den: den.mul_scalar(&inv),
        })
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn zero() -> Self {
        RationalFunction::from_polynomial(Polynomial::zero())
    }

    pub fn one() -> Self {
        RationalFunction::from_polynomial(Polynomial::one())
    }

    pub fn constant(c: ExactComplexRational) -> Self {
        RationalFunction::from_polynomial(Polynomial::constant(c))
    }

    /// The rational function `z`.
    pub fn variable() -> Self {
        RationalFunction::from_polynomial(Polynomial::variable())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is 1.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        if self.is_polynomial() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// True when both numerator and denominator are constants.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn checked_inv(&self) -> Result<Self, Error> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, Error> {
        RationalFunction::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    /// Integer powers; negative exponents invert first (error on 0^n, n<0).
    pub fn checked_pow(&self, n: i64) -> Result<Self, Error> {
        let base = if n < 0 { self.checked_inv()? } else { self.clone() };
        let mut acc = RationalFunction::one();
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn mul_scalar(&self, s: &ExactComplexRational) -> Self {
        RationalFunction {
            num: self.num.mul_scalar(s),
            den: if s.is_zero() { Polynomial::one() } else { self.den.clone() },
        }
    }

    /// The substitution `z -> qz`. Errors on the degenerate dilation `q = 0`
    /// (which can collapse the denominator).
    pub fn q_dilate(&self, q: &ExactComplexRational) -> Result<Self, Error> {
        if q.is_zero() {
            return Err(Error::InvalidArgument(
                "degenerate dilation: q = 0".to_string(),
            ));
        }
        RationalFunction::new(self.num.q_dilate(q), self.den.q_dilate(q))
    }

    /// The divided difference `(f(qz) − f(z)) / ((q−1)z)`, exact. Requires
    /// `q` outside `{0, 1}`.
    pub fn delta_q(&self, q: &ExactComplexRational) -> Result<Self, Error> {
        if q.is_zero() || q.is_one() {
            return Err(Error::InvalidArgument(
                "divided difference undefined for q in {0, 1}".to_string(),
            ));
        }
        let shifted = self.q_dilate(q)?;
        let diff = &shifted - self;
        let scale = &(q - &ExactComplexRational::one());
        let den = Polynomial::monomial(scale.clone(), 1);
        RationalFunction::new(diff.num.clone(), &diff.den * &den)
    }

    /// `n`-fold composition of [`Self::delta_q`]; `n` must be positive.
    pub fn delta_q_iter(&self, q: &ExactComplexRational, n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "iteration count must be positive".to_string(),
            ));
        }
        let mut acc = self.delta_q(q)?;
        for _ in 1..n {
            acc = acc.delta_q(q)?;
        }
        Ok(acc)
    }

    /// Double-precision evaluation; a vanishing denominator yields a pole
    /// marker (common factors were already cancelled exactly).
    pub fn eval(&self, z: Complex64) -> EvalValue {
        let dv = self.den.eval_complex(z);
        if dv.re == 0.0 && dv.im == 0.0 {
            return EvalValue::Pole;
        }
        EvalValue::from_complex(self.num.eval_complex(z) / dv)
    }

    /// Exact evaluation; `None` marks a pole of the reduced form.
    pub fn eval_exact(&self, z: &ExactComplexRational) -> Option<ExactComplexRational> {
        let dv = self.den.eval_exact(z);
        if dv.is_zero() {
            return None;
        }
        let inv = dv.checked_inv().expect("nonzero denominator value");
        Some(&self.num.eval_exact(z) * &inv)
    }

    /// Snapshot of the coefficients in double precision for tight numeric
    /// loops.
    pub fn compiled(&self) -> CompiledRationalFunction {
        CompiledRationalFunction {
            num: self.num.to_complex_coeffs(),
            den: self.den.to_complex_coeffs(),
        }
    }

    /// Renders with the denominator rescaled so its lowest-order nonzero
    /// coefficient is 1 (instead of the canonical monic leading
    /// coefficient); reads naturally for functions finite at the origin,
    /// e.g. `(1+3/2*z)/(1-2*z)`.
    pub fn display_origin_normalized(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let t = self
            .den
            .trailing_coeff()
            .expect("denominator nonzero")
            .clone();
        let inv = t.checked_inv().expect("trailing coefficient nonzero");
        let num = self.num.mul_scalar(&inv);
        let den = self.den.mul_scalar(&inv);
        if den.is_one() {
            format!("{num}")
        } else {
            format!("({num})/({den})")
        }
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction::from_polynomial(p)
    }
}

/// Double-precision coefficient snapshot of a [`RationalFunction`].
#[derive(Debug, Clone)]
pub struct CompiledRationalFunction {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
}

impl CompiledRationalFunction {
    pub fn eval(&self, z: Complex64) -> EvalValue {
        let dv = horner(&self.den, z);
        if dv.re == 0.0 && dv.im == 0.0 {
            return EvalValue::Pole;
        }
        EvalValue::from_complex(horner(&self.num, z) / dv)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        RationalFunction::new(num, den).expect("denominator product nonzero")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        RationalFunction::new(num, den).expect("denominator product nonzero")
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("denominator product nonzero")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_rf_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$method(rhs)
            }
        }
        impl $trait<RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                self.$method(&rhs)
            }
        }
    };
}

forward_rf_binop!(Add, add);
forward_rf_binop!(Sub, sub);
forward_rf_binop!(Mul, mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -(&self)
    }
}

impl fmt::Display for RationalFunction {
    /// `(num)/(den)` in canonical (monic-denominator) form, or the bare
    /// numerator when the denominator is 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(
            Polynomial::from_i64_coeffs(num),
            Polynomial::from_i64_coeffs(den),
        )
        .unwrap()
    }

    #[test]
    fn normalization_cancels_and_makes_monic() {
        // (z^2 - 1)/(z - 1) -> z + 1
        let a = rf(&[-1, 0, 1], &[-1, 1]);
        assert_eq!(a, rf(&[1, 1], &[1]));
        assert!(a.is_polynomial());
        // 0/z^3 -> 0/1
        let b = rf(&[0], &[0, 0, 0, 1]);
        assert!(b.is_zero());
        assert!(b.den().is_one());
        // (2z+4)/2 -> z + 2
        let c = rf(&[4, 2], &[2]);
        assert_eq!(c, rf(&[2, 1], &[1]));
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert_eq!(
            RationalFunction::new(Polynomial::one(), Polynomial::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn field_laws_on_samples() {
        let a = rf(&[1, 2], &[1, 0, 1]);
        let b = rf(&[-3, 1], &[2, 1]);
        let c = rf(&[0, 0, 5], &[1, 1]);
        assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        assert_eq!(&a - &a, RationalFunction::zero());
        let inv = a.checked_inv().unwrap();
        assert_eq!(&a * &inv, RationalFunction::one());
    }

    #[test]
    fn dilation_examples() {
        let q = ExactComplexRational::from_ratio(-1, 2);
        // 1/(z+1) at q = -1/2 -> 1/(1 - z/2) = (-2)/(z - 2) in monic form
        let f = rf(&[1], &[1, 1]);
        let d = f.q_dilate(&q).unwrap();
        assert_eq!(d, rf(&[-2], &[-2, 1]));
        assert_eq!(
            RationalFunction::one().q_dilate(&ExactComplexRational::zero()),
            Err(Error::InvalidArgument("degenerate dilation: q = 0".to_string()))
        );
    }

    #[test]
    fn dilation_composes_multiplicatively() {
        let f = rf(&[1, 3, 1], &[2, 0, 1]);
        let q1 = ExactComplexRational::from_ratio(2, 3);
        let q2 = ExactComplexRational::from_ratio(-5, 7);
        let lhs = f.q_dilate(&q1).unwrap().q_dilate(&q2).unwrap();
        let rhs = f.q_dilate(&(&q1 * &q2)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn divided_difference_examples() {
        let q = ExactComplexRational::from_ratio(1, 2);
        // constants -> 0
        assert!(rf(&[7], &[1]).delta_q(&q).unwrap().is_zero());
        // z -> 1
        assert_eq!(rf(&[0, 1], &[1]).delta_q(&q).unwrap(), RationalFunction::one());
        // z^2 -> (q+1) z
        let d = rf(&[0, 0, 1], &[1]).delta_q(&q).unwrap();
        let expected = RationalFunction::from_polynomial(Polynomial::new(vec![
            ExactComplexRational::zero(),
            ExactComplexRational::from_ratio(3, 2),
        ]));
        assert_eq!(d, expected);
        // z^3, once -> (q^2+q+1) z^2
        let d3 = rf(&[0, 0, 0, 1], &[1]).delta_q(&q).unwrap();
        let expected3 = RationalFunction::from_polynomial(Polynomial::new(vec![
            ExactComplexRational::zero(),
            ExactComplexRational::zero(),
            ExactComplexRational::from_ratio(7, 4),
        ]));
        assert_eq!(d3, expected3);
    }

    #[test]
    fn iterated_difference() {
        let q = ExactComplexRational::from_ratio(1, 2);
        // z^2 twice -> q + 1
        let d = rf(&[0, 0, 1], &[1]).delta_q_iter(&q, 2).unwrap();
        assert_eq!(
            d,
            RationalFunction::constant(ExactComplexRational::from_ratio(3, 2))
        );
        // z twice -> 0
        assert!(rf(&[0, 1], &[1]).delta_q_iter(&q, 2).unwrap().is_zero());
        assert!(rf(&[0, 1], &[1]).delta_q_iter(&q, 0).is_err());
    }

    #[test]
    fn eval_reports_poles_and_values() {
        let f = rf(&[1, 1], &[-1, 1]); // (z+1)/(z-1)
        assert!(f.eval(Complex64::new(1.0, 0.0)).is_pole());
        let v = f.eval(Complex64::new(3.0, 0.0)).finite().unwrap();
        assert!((v.re - 2.0).abs() < 1e-15 && v.im.abs() < 1e-15);
        let g = rf(&[-1, 1], &[1, 1]); // (z-1)/(z+1) at 3 -> 0.5
        let w = g.eval(Complex64::new(3.0, 0.0)).finite().unwrap();
        assert!((w.re - 0.5).abs() < 1e-15);
        assert_eq!(
            f.eval_exact(&ExactComplexRational::from_i64(1)),
            None
        );
        assert_eq!(
            f.eval_exact(&ExactComplexRational::from_i64(3)),
            Some(ExactComplexRational::from_i64(2))
        );
    }

    #[test]
    fn display_and_origin_normalized() {
        assert_eq!(RationalFunction::zero().to_string(), "0");
        assert_eq!(rf(&[4, 2], &[1]).to_string(), "4+2*z");
        let a = rf(&[2, 3], &[2, -4]); // (2+3z)/(2-4z)
        assert_eq!(a.display_origin_normalized(), "(1+3/2*z)/(1-2*z)");
        assert_eq!(a.to_string(), "(-1/2-3/4*z)/(-1/2+z)");
    }
}
