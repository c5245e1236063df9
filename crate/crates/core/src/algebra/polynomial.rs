//! Dense univariate polynomials over the Gaussian rationals.
//!
//! Coefficients are stored by ascending power of `z`; the highest-index
//! coefficient is nonzero unless the polynomial is zero (empty coefficient
//! vector). All arithmetic is exact. The degree of the zero polynomial is
//! `None`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::rational::{rational_string, ExactComplexRational};
use crate::error::Error;

/// A polynomial `c0 + c1 z + c2 z^2 + ...` with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<ExactComplexRational>,
}

impl Polynomial {
    /// Builds a polynomial from ascending-power coefficients, trimming
    /// trailing zeros so the representation invariant holds.
    pub fn new(mut coeffs: Vec<ExactComplexRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(ExactComplexRational::one())
    }

    pub fn constant(c: ExactComplexRational) -> Self {
        Polynomial::new(vec![c])
    }

    /// The polynomial `z`.
    pub fn variable() -> Self {
        Polynomial::new(vec![ExactComplexRational::zero(), ExactComplexRational::one()])
    }

    /// The monomial `c·z^k`.
    pub fn monomial(c: ExactComplexRational, k: usize) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![ExactComplexRational::zero(); k + 1];
        coeffs[k] = c;
        Polynomial { coeffs }
    }

    /// Convenience constructor from integer coefficients (ascending).
    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&n| ExactComplexRational::from_i64(n)).collect())
    }

    /// The monic polynomial with the given roots.
    pub fn from_roots(roots: &[ExactComplexRational]) -> Self {
        let mut p = Polynomial::one();
        for r in roots {
            let factor = Polynomial::new(vec![-r, ExactComplexRational::one()]);
            p = &p * &factor;
        }
        p
    }

    pub fn coeffs(&self) -> &[ExactComplexRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `z^k` (zero beyond the stored length).
    pub fn coeff(&self, k: usize) -> ExactComplexRational {
        self.coeffs.get(k).cloned().unwrap_or_else(ExactComplexRational::zero)
    }

    pub fn leading_coeff(&self) -> Option<&ExactComplexRational> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient (order of vanishing at 0);
    /// `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Lowest nonzero coefficient; `None` for the zero polynomial.
    pub fn trailing_coeff(&self) -> Option<&ExactComplexRational> {
        self.valuation().map(|k| &self.coeffs[k])
    }

    /// Exact evaluation by the Horner recurrence.
    pub fn eval_exact(&self, z: &ExactComplexRational) -> ExactComplexRational {
        let mut acc = ExactComplexRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    /// Coefficients rounded to double precision (ascending).
    pub fn to_complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.to_complex64()).collect()
    }

    /// Double-precision evaluation by the Horner recurrence.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        horner(&self.to_complex_coeffs(), z)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| &ExactComplexRational::from_i64(k as i64) * c)
            .collect();
        Polynomial::new(coeffs)
    }

    /// The substitution `z -> qz`: multiplies the `z^k` coefficient by `q^k`.
    pub fn q_dilate(&self, q: &ExactComplexRational) -> Polynomial {
        let mut qk = ExactComplexRational::one();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    qk = &qk * q;
                }
                c * &qk
            })
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn mul_scalar(&self, s: &ExactComplexRational) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero();
        }
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiplies by `z^k`.
    pub fn mul_xk(&self, k: usize) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![ExactComplexRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    /// Euclidean division: `self = q·div + r` with `deg r < deg div`.
    pub fn divmod(&self, div: &Polynomial) -> Result<(Polynomial, Polynomial), Error> {
        let dd = div.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = div.leading_coeff().unwrap().checked_inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let mut quot = vec![ExactComplexRational::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let factor = &rem[k] * &lead_inv;
            if factor.is_zero() {
                continue;
            }
            for (j, dc) in div.coeffs.iter().enumerate() {
                let delta = &factor * dc;
                rem[k - dd + j] = &rem[k - dd + j] - &delta;
            }
            quot[k - dd] = factor;
        }
        Ok((Polynomial::new(quot), Polynomial::new(rem)))
    }

    /// Scales so the leading coefficient is 1. The zero polynomial is
    /// returned unchanged.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            None => Polynomial::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => {
                let inv = lc.checked_inv().expect("nonzero leading coefficient");
                self.mul_scalar(&inv)
            }
        }
    }

    /// Monic greatest common divisor by the Euclidean remainder sequence,
    /// with each remainder made monic to keep coefficients small.
    /// `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).expect("divisor is nonzero in gcd loop");
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

/// Double-precision Horner evaluation of ascending-order coefficients.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff(k) + &rhs.coeff(k));
        }
        Polynomial::new(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff(k) - &rhs.coeff(k));
        }
        Polynomial::new(coeffs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs =
            vec![ExactComplexRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let prod = a * b;
                coeffs[i + j] = &coeffs[i + j] + &prod;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_poly_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl $trait<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    };
}

forward_poly_binop!(Add, add);
forward_poly_binop!(Sub, sub);
forward_poly_binop!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -(&self)
    }
}

/// Renders one term `c·z^k`, returning the separator sign and the unsigned
/// body. Mixed complex coefficients keep their sign inside parentheses and
/// always join with `+`.
fn term_string(c: &ExactComplexRational, k: usize) -> (char, String) {
    let var = match k {
        0 => String::new(),
        1 => "z".to_string(),
        _ => format!("z^{k}"),
    };
    if k == 0 {
        // Standalone coefficient; pull a single leading sign out when the
        // value is real or purely imaginary.
        if c.im.is_zero() {
            let sign = if c.re.is_negative() { '-' } else { '+' };
            return (sign, rational_string(&c.re.abs()));
        }
        if c.re.is_zero() {
            let sign = if c.im.is_negative() { '-' } else { '+' };
            let a = c.im.abs();
            let body = if a.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", rational_string(&a))
            };
            return (sign, body);
        }
        return ('+', format!("({c})"));
    }
    if c.im.is_zero() {
        let sign = if c.re.is_negative() { '-' } else { '+' };
        let a = c.re.abs();
        let body = if a.is_one() {
            var
        } else {
            format!("{}*{}", rational_string(&a), var)
        };
        (sign, body)
    } else if c.re.is_zero() {
        let sign = if c.im.is_negative() { '-' } else { '+' };
        let a = c.im.abs();
        let body = if a.is_one() {
            format!("i*{var}")
        } else {
            format!("{}*i*{}", rational_string(&a), var)
        };
        (sign, body)
    } else {
        ('+', format!("({c})*{var}"))
    }
}

impl fmt::Display for Polynomial {
    /// Canonical form: ascending powers, no spaces, unit coefficients
    /// elided, e.g. `1-2*z+z^2`, `-3/2*i*z`, `(1/2+3/4*i)*z^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, body) = term_string(c, k);
            if out.is_empty() {
                if sign == '-' {
                    out.push('-');
                }
            } else {
                out.push(sign);
            }
            out.push_str(&body);
        }
        write!(f, "{out}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> Polynomial {
        Polynomial::from_i64_coeffs(coeffs)
    }

    #[test]
    fn construction_trims_trailing_zeros() {
        let a = Polynomial::new(vec![
            ExactComplexRational::from_i64(1),
            ExactComplexRational::zero(),
            ExactComplexRational::zero(),
        ]);
        assert_eq!(a.degree(), Some(0));
        assert!(Polynomial::new(vec![ExactComplexRational::zero()]).is_zero());
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn arithmetic_matches_hand_expansion() {
        let a = p(&[1, 2]); // 1 + 2z
        let b = p(&[-1, 1]); // -1 + z
        assert_eq!(&a * &b, p(&[-1, -1, 2])); // -1 - z + 2z^2
        assert_eq!(&a + &b, p(&[0, 3]));
        assert_eq!(&a - &a, Polynomial::zero());
    }

    #[test]
    fn divmod_recombines() {
        let a = p(&[4, 0, -3, 1, 2]); // 4 - 3z^2 + z^3 + 2z^4
        let b = p(&[1, 1, 1]); // 1 + z + z^2
        let (q, r) = a.divmod(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
        assert_eq!(p(&[1]).divmod(&Polynomial::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_finds_common_factor() {
        let common = p(&[1, 1]); // z + 1
        let a = &common * &p(&[-2, 1]); // (z+1)(z-2)
        let b = &common * &p(&[3, 1]); // (z+1)(z+3)
        assert_eq!(a.gcd(&b), common);
        assert_eq!(p(&[2]).gcd(&p(&[0])), Polynomial::one());
        assert_eq!(Polynomial::zero().gcd(&Polynomial::zero()), Polynomial::zero());
    }

    #[test]
    fn q_dilate_scales_coefficients() {
        // (z+2) at q = 1/2 -> z/2 + 2
        let a = p(&[2, 1]);
        let q = ExactComplexRational::from_ratio(1, 2);
        let d = a.q_dilate(&q);
        assert_eq!(d.coeff(0), ExactComplexRational::from_i64(2));
        assert_eq!(d.coeff(1), ExactComplexRational::from_ratio(1, 2));
        // z^2 -> q^2 z^2
        let sq = p(&[0, 0, 1]).q_dilate(&q);
        assert_eq!(sq.coeff(2), ExactComplexRational::from_ratio(1, 4));
    }

    #[test]
    fn eval_exact_and_complex_agree() {
        let a = p(&[4, 7, 6, 1]); // matches a hand-checkable cubic
        let z = ExactComplexRational::from_ratio(-1, 2);
        let exact = a.eval_exact(&z);
        let approx = a.eval_complex(z.to_complex64());
        assert!((approx - exact.to_complex64()).norm() < 1e-14);
    }

    #[test]
    fn from_roots_expands() {
        let r = [
            ExactComplexRational::from_i64(1),
            ExactComplexRational::from_i64(-1),
        ];
        assert_eq!(Polynomial::from_roots(&r), p(&[-1, 0, 1]));
    }

    #[test]
    fn derivative_and_valuation() {
        let a = p(&[0, 0, 3, 1]); // 3z^2 + z^3
        assert_eq!(a.derivative(), p(&[0, 6, 3]));
        assert_eq!(a.valuation(), Some(2));
        assert_eq!(a.trailing_coeff(), Some(&ExactComplexRational::from_i64(3)));
    }

    #[test]
    fn display_canonical_forms() {
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(p(&[1, -2]).to_string(), "1-2*z");
        assert_eq!(p(&[0, 0, 1]).to_string(), "z^2");
        assert_eq!(p(&[0, -1]).to_string(), "-z");
        assert_eq!(
            Polynomial::new(vec![
                ExactComplexRational::from_i64(1),
                ExactComplexRational::from_ratio(3, 2)
            ])
            .to_string(),
            "1+3/2*z"
        );
        assert_eq!(
            Polynomial::new(vec![
                ExactComplexRational::zero(),
                ExactComplexRational::from_ratios(0, 1, -3, 2)
            ])
            .to_string(),
            "-3/2*i*z"
        );
        assert_eq!(
            Polynomial::new(vec![
                ExactComplexRational::zero(),
                ExactComplexRational::zero(),
                ExactComplexRational::from_ratios(1, 2, 3, 4)
            ])
            .to_string(),
            "(1/2+3/4*i)*z^2"
        );
        assert_eq!(
            Polynomial::constant(ExactComplexRational::from_ratios(0, 1, 1, 1)).to_string(),
            "i"
        );
    }
}
