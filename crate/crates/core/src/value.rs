//! Pole-aware numeric values.
//!
//! Evaluating a rational function or a quotient of infinite products at a
//! point can legitimately land on a pole. Rather than returning an infinity
//! or NaN, evaluators in this crate return [`EvalValue`], which makes the
//! pole case explicit.

use num_complex::Complex64;

/// Result of a pointwise numeric evaluation: either a finite complex value or
/// an explicit pole marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalValue {
    /// A finite complex value.
    Finite(Complex64),
    /// The point is (within the active guard distance of) a pole.
    Pole,
}

impl EvalValue {
    /// True if this value is the pole marker.
    pub fn is_pole(&self) -> bool {
        matches!(self, EvalValue::Pole)
    }

    /// The finite value, if any.
    pub fn finite(&self) -> Option<Complex64> {
        match self {
            EvalValue::Finite(v) => Some(*v),
            EvalValue::Pole => None,
        }
    }

    /// Wraps a raw complex number, mapping non-finite floats to the pole
    /// marker.
    pub fn from_complex(v: Complex64) -> Self {
        if v.re.is_finite() && v.im.is_finite() {
            EvalValue::Finite(v)
        } else {
            EvalValue::Pole
        }
    }
}

impl From<Complex64> for EvalValue {
    fn from(v: Complex64) -> Self {
        EvalValue::from_complex(v)
    }
}
