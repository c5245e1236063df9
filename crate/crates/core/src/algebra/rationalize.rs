//! Recovery of exact rationals from floating-point values by continued
//! fractions.
//!
//! Used to lift numerically fitted parameters back into the exact layer:
//! the best convergent under a denominator cap is proposed, and the caller
//! is expected to verify the lifted value exactly (these helpers make no
//! closeness promise on their own).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use super::rational::{rational_to_f64, ExactComplexRational};

/// Best continued-fraction convergent of `x` with denominator at most
/// `max_den`. `None` for non-finite input or magnitudes beyond integer
/// range.
pub fn rationalize_f64(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() || max_den == 0 {
        return None;
    }
    if x == 0.0 {
        return Some(BigRational::from_integer(BigInt::from(0)));
    }
    if x.abs() >= 9.0e15 {
        return None;
    }
    let sign = if x < 0.0 { -1i64 } else { 1i64 };
    let mut t = x.abs();

    // Convergent recurrence p_i = a_i p_{i-1} + p_{i-2} (same for q).
    let (mut p0, mut q0): (i128, i128) = (0, 1);
    let (mut p1, mut q1): (i128, i128) = (1, 0);
    for _ in 0..64 {
        let a = t.floor();
        if a >= 9.0e15 {
            break;
        }
        let a = a as i128;
        let p = a.checked_mul(p1).and_then(|v| v.checked_add(p0));
        let q = a.checked_mul(q1).and_then(|v| v.checked_add(q0));
        let (Some(p), Some(q)) = (p, q) else { break };
        if q > max_den as i128 {
            break;
        }
        (p0, q0) = (p1, q1);
        (p1, q1) = (p, q);
        let frac = t - a as f64;
        // Once the approximation error is at double noise, stop.
        if frac.abs() < 1e-15 * t.max(1.0) {
            break;
        }
        t = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    Some(BigRational::new(
        BigInt::from(sign as i128 * p1),
        BigInt::from(q1),
    ))
}

/// Component-wise rationalization of a complex value.
pub fn rationalize_complex(z: Complex64, max_den: u64) -> Option<ExactComplexRational> {
    Some(ExactComplexRational::new(
        rationalize_f64(z.re, max_den)?,
        rationalize_f64(z.im, max_den)?,
    ))
}

/// Relative distance between `x` and a rational candidate, for acceptance
/// screens before exact verification.
pub fn relative_error(x: f64, r: &BigRational) -> f64 {
    let v = rational_to_f64(r);
    (x - v).abs() / x.abs().max(1.0)
}
