//! Exact identity checks via formal coordinates.
//!
//! Identities that would need bivariate algebra (an unknown function `y` or
//! `h` inside rational expressions) are checked by treating the shifted
//! values `y(z), y(qz), y(q²z)` — or powers of `h` — as independent formal
//! coordinates with rational-function coefficients. Equality of such forms
//! is decidable exactly in the existing scalar algebra.

use crate::algebra::RationalFunction;
use crate::error::Error;
use crate::qspecial::QBase;

/// A linear form `Σ_k coeffs[k]·y(q^k z)` in the shifted values of one
/// unknown function.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftLinearForm {
    coeffs: Vec<RationalFunction>,
}

impl ShiftLinearForm {
    pub fn new(coeffs: Vec<RationalFunction>) -> Self {
        let mut f = ShiftLinearForm { coeffs };
        f.trim();
        f
    }

    pub fn zero() -> Self {
        ShiftLinearForm { coeffs: Vec::new() }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Coefficient of `y(q^k z)` (zero beyond the stored span).
    pub fn coeff(&self, k: usize) -> RationalFunction {
        self.coeffs.get(k).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The substitution `z -> qz`: coefficients are dilated and every shift
    /// index moves up by one (`y(q^k z) -> y(q^{k+1} z)`).
    pub fn dilate(&self, q: &QBase) -> Result<Self, Error> {
        let qe = q.require_exact()?;
        let mut coeffs = vec![RationalFunction::zero()];
        for c in &self.coeffs {
            coeffs.push(c.q_dilate(qe)?);
        }
        Ok(ShiftLinearForm::new(coeffs))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        ShiftLinearForm::new((0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        ShiftLinearForm::new((0..n).map(|k| &self.coeff(k) - &other.coeff(k)).collect())
    }

    pub fn scale(&self, s: &RationalFunction) -> Self {
        ShiftLinearForm::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// True when the two forms are proportional over the rational-function
    /// field (all cross products of coefficients agree); the zero form is
    /// proportional only to itself.
    pub fn proportional_to(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        for i in 0..n {
            for j in (i + 1)..n {
                let lhs = &self.coeff(i) * &other.coeff(j);
                let rhs = &self.coeff(j) * &other.coeff(i);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// A polynomial `Σ_k coeffs[k]·h^k` in one formal coordinate `h`, with
/// rational-function coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordPoly {
    coeffs: Vec<RationalFunction>,
}

impl CoordPoly {
    pub fn new(coeffs: Vec<RationalFunction>) -> Self {
        let mut p = CoordPoly { coeffs };
        while p.coeffs.last().is_some_and(|c| c.is_zero()) {
            p.coeffs.pop();
        }
        p
    }

    pub fn constant(c: RationalFunction) -> Self {
        CoordPoly::new(vec![c])
    }

    /// `a + b·h`.
    pub fn linear(a: RationalFunction, b: RationalFunction) -> Self {
        CoordPoly::new(vec![a, b])
    }

    pub fn coeff(&self, k: usize) -> RationalFunction {
        self.coeffs.get(k).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        CoordPoly::new((0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        CoordPoly::new((0..n).map(|k| &self.coeff(k) - &other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return CoordPoly::new(Vec::new());
        }
        let mut coeffs =
            vec![RationalFunction::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        CoordPoly::new(coeffs)
    }

    pub fn scale(&self, s: &RationalFunction) -> Self {
        CoordPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }
}
