//! First-order q-difference Riccati equations.
//!
//! The equation acts on a meromorphic unknown `f` by
//!
//! ```text
//! f(qz) = (A(z) + f(z)) / (1 - (q-1)z·f(z)),
//! ```
//!
//! with rational coefficient `A` and base `q ∉ {0, 1}`. All structural
//! operations work on the cleared residual
//!
//! ```text
//! (q-1)z·f(qz)·f(z) - f(qz) + f(z) + A(z),
//! ```
//!
//! which vanishes identically exactly when `f` solves the equation.
//!
//! Provided here:
//! - exact residual verification and degeneracy reporting for rational
//!   candidates;
//! - the substitution `u = 1/(f - f0)` at a known rational solution `f0`,
//!   which collapses the equation to a first-order *linear* q-difference
//!   equation with polynomial coefficients;
//! - the three-solution family that parameterizes all solutions through a
//!   q-periodic parameter;
//! - Möbius linearization from a pair of distinct rational solutions,
//!   `h(qz) = a(z)·h(z)` with `a = (1-(q-1)z·f1)/(1-(q-1)z·f2)`, plus the
//!   back substitution `f = (f1·h + f2)/(h + 1)`;
//! - the equivalent second-order linear form
//!   `y(q²z) - (q+1)·y(qz) + q(1+(q-1)z·A)·y(z) = 0` and the companion
//!   multiplicative `y`-orbit;
//! - the divided-difference identity
//!   `Δ_q f = (A + (q-1)z·f²) / ((q-1)z·(1-(q-1)z·f))` as a residual form;
//! - a two-stage rational-solution search (numeric seed fitting followed by
//!   exact reduction), every reported solution re-verified exactly.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{ExactComplexRational, Polynomial, RationalFunction};
use crate::error::Error;
use crate::linear::{
    eval_closed_form, solve_homogeneous, LinearFirstOrderEq, LinearHomogeneousEq,
};
use crate::qspecial::{EvalRequest, QBase};
use crate::value::EvalValue;

pub mod formal;
mod search;

pub use formal::{CoordPoly, ShiftLinearForm};
pub use search::{rational_solution_search, RationalSolutionSearch, SearchConfig};

/// The polynomial `(q-1)z`.
fn qm1_z(qe: &ExactComplexRational) -> Polynomial {
    Polynomial::monomial(qe - &ExactComplexRational::one(), 1)
}

/// A first-order q-difference Riccati equation
/// `f(qz) = (A(z) + f(z)) / (1 - (q-1)z·f(z))`.
#[derive(Debug, Clone)]
pub struct RiccatiEquation {
    q: QBase,
    a: RationalFunction,
    degenerate_coefficient: bool,
}

impl RiccatiEquation {
    /// Builds the equation. When the base is exact, the constructor detects
    /// the degenerate coefficient `A = -1/((q-1)z)` — for that choice the
    /// right-hand side collapses and the usual solvability structure
    /// (two-solution linearization, three-solution family) is unavailable.
    pub fn new(q: QBase, a: RationalFunction) -> Self {
        let degenerate_coefficient = match q.exact() {
            Some(qe) => {
                let target = RationalFunction::new(
                    Polynomial::constant(ExactComplexRational::from_i64(-1)),
                    qm1_z(qe),
                )
                .expect("(q-1)z is nonzero for an admissible base");
                a == target
            }
            None => false,
        };
        RiccatiEquation {
            q,
            a,
            degenerate_coefficient,
        }
    }

    pub fn q(&self) -> &QBase {
        &self.q
    }

    /// The rational coefficient `A`.
    pub fn coefficient(&self) -> &RationalFunction {
        &self.a
    }

    /// True when `A = -1/((q-1)z)` exactly (only detectable for an exact
    /// base).
    pub fn has_degenerate_coefficient(&self) -> bool {
        self.degenerate_coefficient
    }

    /// The exact cleared residual
    /// `(q-1)z·f(qz)·f(z) - f(qz) + f(z) + A(z)` of a rational candidate.
    /// The candidate solves the equation iff the result is identically zero.
    /// Requires an exact base.
    pub fn verify_solution_exact(
        &self,
        f: &RationalFunction,
    ) -> Result<RationalFunction, Error> {
        let qe = self.q.require_exact()?;
        let fq = f.q_dilate(qe)?;
        let w = RationalFunction::from_polynomial(qm1_z(qe));
        let prod = &(&w * &fq) * f;
        Ok(&(&(&prod - &fq) + f) + &self.a)
    }

    /// True when `f` is an exact solution.
    pub fn is_solution(&self, f: &RationalFunction) -> Result<bool, Error> {
        Ok(self.verify_solution_exact(f)?.is_zero())
    }

    /// Reports whether either Möbius factor of the equation degenerates at
    /// `f`: the map is undefined as a bona fide Möbius transformation when
    /// `1 - (q-1)z·f(z)` or `1 + (q-1)z·f(qz)` vanishes identically.
    pub fn check_nondegeneracy(
        &self,
        f: &RationalFunction,
    ) -> Result<NondegeneracyReport, Error> {
        let qe = self.q.require_exact()?;
        let w = RationalFunction::from_polynomial(qm1_z(qe));
        let fq = f.q_dilate(qe)?;
        let forward_factor = &RationalFunction::one() - &(&w * f);
        let backward_factor = &RationalFunction::one() + &(&w * &fq);
        let forward_vanishes = forward_factor.is_zero();
        let backward_vanishes = backward_factor.is_zero();
        Ok(NondegeneracyReport {
            forward_factor,
            backward_factor,
            forward_vanishes,
            backward_vanishes,
        })
    }

    fn reduction_raw(&self, f0: &RationalFunction) -> Result<LinearFirstOrderEq, Error> {
        let qe = self.q.require_exact()?;
        let w = RationalFunction::from_polynomial(qm1_z(qe));
        let f0q = f0.q_dilate(qe)?;
        let alpha1 = &RationalFunction::one() + &(&w * &f0q);
        let alpha0 = &(&w * f0) - &RationalFunction::one();
        // Clear denominators against the least common multiple of the two
        // (monic) denominators, so the equation reads
        //   a1(z)·u(qz) + a0(z)·u(z) + c(z) = 0
        // with polynomial coefficients.
        let d1 = alpha1.den().clone();
        let d0 = alpha0.den().clone();
        let g = d1.gcd(&d0);
        let (cof1, r1) = d0.divmod(&g)?;
        debug_assert!(r1.is_zero());
        let (cof0, r0) = d1.divmod(&g)?;
        debug_assert!(r0.is_zero());
        let mut a1 = alpha1.num() * &cof1;
        let mut a0 = alpha0.num() * &cof0;
        let m = &d1 * &cof1;
        let mut c = &qm1_z(qe) * &m;
        // Remove any common polynomial factor, then fix the remaining
        // constant freedom by making the leading coefficient of a1 (or a0
        // when a1 vanishes) equal to one.
        let mut common = a1.gcd(&a0);
        common = common.gcd(&c);
        if common.degree().is_some_and(|d| d > 0) {
            a1 = a1.divmod(&common)?.0;
            a0 = a0.divmod(&common)?.0;
            c = c.divmod(&common)?.0;
        }
        let lead = if a1.is_zero() {
            a0.leading_coeff().cloned()
        } else {
            a1.leading_coeff().cloned()
        };
        if let Some(l) = lead {
            let inv = l.checked_inv()?;
            a1 = a1.mul_scalar(&inv);
            a0 = a0.mul_scalar(&inv);
            c = c.mul_scalar(&inv);
        }
        LinearFirstOrderEq::new(self.q.clone(), a1, a0, c)
    }

    /// Substitutes `u = 1/(f - f0)` at an exact rational solution `f0` and
    /// returns the resulting linear equation
    /// `a1(z)·u(qz) + a0(z)·u(z) + c(z) = 0` in cleared polynomial form
    /// (common polynomial factors removed, `a1` monic). Every rational
    /// solution `f ≠ f0` of the Riccati equation corresponds to the
    /// rational solution `u = 1/(f - f0)` of the linear equation and
    /// conversely.
    pub fn reduce_to_linear(
        &self,
        f0: &RationalFunction,
    ) -> Result<LinearFirstOrderEq, Error> {
        let residual = self.verify_solution_exact(f0)?;
        if !residual.is_zero() {
            return Err(Error::NotASolution(format!(
                "reduction seed has nonzero residual {residual}"
            )));
        }
        self.reduction_raw(f0)
    }

    /// The same substitution formulas as [`reduce_to_linear`], applied
    /// formally without checking that the seed solves the equation. Useful
    /// for auditing the reduction coefficients of a candidate seed; when
    /// the seed is not a solution the resulting linear equation does not
    /// characterize `1/(f - f0)`.
    ///
    /// [`reduce_to_linear`]: RiccatiEquation::reduce_to_linear
    pub fn reduction_coefficients(
        &self,
        f0: &RationalFunction,
    ) -> Result<LinearFirstOrderEq, Error> {
        self.reduction_raw(f0)
    }

    /// From two distinct exact solutions `f1, f2`, builds the homogeneous
    /// linearization `h(qz) = a(z)·h(z)` with
    /// `a = (1-(q-1)z·f1)/(1-(q-1)z·f2)`, together with the back
    /// substitution `f = (f1·h + f2)/(h + 1)` that turns any q-periodic
    /// multiple of a solution `h` into a solution `f`.
    pub fn moebius_linearize(
        &self,
        f1: &RationalFunction,
        f2: &RationalFunction,
    ) -> Result<MoebiusLinearization, Error> {
        if f1 == f2 {
            return Err(Error::InvalidArgument(
                "linearization needs two distinct particular solutions".into(),
            ));
        }
        for f in [f1, f2] {
            let residual = self.verify_solution_exact(f)?;
            if !residual.is_zero() {
                return Err(Error::NotASolution(format!(
                    "linearization seed has nonzero residual {residual}"
                )));
            }
        }
        let qe = self.q.require_exact()?;
        let w = RationalFunction::from_polynomial(qm1_z(qe));
        let num = &RationalFunction::one() - &(&w * f1);
        let den = &RationalFunction::one() - &(&w * f2);
        if num.is_zero() || den.is_zero() {
            return Err(Error::DomainError(
                "a factor 1-(q-1)z·f vanishes identically at a seed; \
                 the Möbius structure degenerates"
                    .into(),
            ));
        }
        let a = num.checked_div(&den)?;
        let equation = LinearHomogeneousEq::new(self.q.clone(), a.clone())?;
        Ok(MoebiusLinearization {
            equation,
            multiplier: a,
            back: BackMap {
                f1: f1.clone(),
                f2: f2.clone(),
            },
        })
    }

    /// Exact consistency check of a linearization: substitutes the back map
    /// with a *formal* coordinate `h` subject to `h(qz) = a(z)·h(z)` into
    /// the cleared residual and reduces; the result must be the zero
    /// polynomial in `h` (coefficient-wise zero rational functions).
    pub fn moebius_formal_check(
        &self,
        lin: &MoebiusLinearization,
    ) -> Result<bool, Error> {
        let qe = self.q.require_exact()?;
        let (f1, f2) = lin.back.seeds();
        let a = &lin.multiplier;
        let f1q = f1.q_dilate(qe)?;
        let f2q = f2.q_dilate(qe)?;
        // f(z)  = (f1·h + f2)/(h + 1)            -> n0/d0
        // f(qz) = (f1(qz)·a·h + f2(qz))/(a·h + 1) -> n1/d1
        let n0 = CoordPoly::linear(f2.clone(), f1.clone());
        let d0 = CoordPoly::linear(RationalFunction::one(), RationalFunction::one());
        let n1 = CoordPoly::linear(f2q, &f1q * a);
        let d1 = CoordPoly::linear(RationalFunction::one(), a.clone());
        let w = RationalFunction::from_polynomial(qm1_z(qe));
        let residual = n1
            .mul(&n0)
            .scale(&w)
            .sub(&n1.mul(&d0))
            .add(&n0.mul(&d1))
            .add(&d1.mul(&d0).scale(&self.a));
        Ok(residual.is_zero())
    }

    /// The general solution through a pair of distinct rational solutions:
    /// linearizes, solves `h(qz) = a(z)·h(z)` in closed form, and returns
    /// the evaluator `z ↦ back((scale·h)(z))`. `scale = 0` returns `f2`
    /// exactly as a rational evaluator. Points where the closed-form
    /// evaluation refuses to commit (pole-lattice guard) are reported as
    /// pole markers.
    pub fn general_solution(
        &self,
        f1: &RationalFunction,
        f2: &RationalFunction,
        scale: Complex64,
        root_tol: f64,
        req: &EvalRequest,
    ) -> Result<SolutionEvaluator, Error> {
        let lin = self.moebius_linearize(f1, f2)?;
        if scale == Complex64::new(0.0, 0.0) {
            return Ok(SolutionEvaluator::Rational(f2.clone()));
        }
        if !scale.is_finite() {
            return Err(Error::InvalidArgument(
                "solution scale must be a finite complex number".into(),
            ));
        }
        if !self.q.inside_unit_disk() {
            return Err(Error::InvalidBase(
                "closed-form evaluation needs |q| < 1".into(),
            ));
        }
        let cf = solve_homogeneous(&lin.equation, root_tol)?;
        let back = lin.back.clone();
        let req = *req;
        let label = format!("general solution, scale {scale}");
        Ok(SolutionEvaluator::composite(label, move |z| {
            match eval_closed_form(&cf, z, &req) {
                Ok(EvalValue::Finite(h)) => back.apply(EvalValue::Finite(scale * h), z),
                Ok(EvalValue::Pole) => back.apply(EvalValue::Pole, z),
                Err(_) => EvalValue::Pole,
            }
        }))
    }

    /// The equivalent second-order linear q-difference equation
    /// `y(q²z) - (q+1)·y(qz) + q(1+(q-1)z·A(z))·y(z) = 0`, normalized with
    /// leading coefficient one. A solution `f` of the Riccati equation
    /// corresponds to the multiplicative orbit
    /// `y(qz) = (1-(q-1)z·f(z))·y(z)`.
    pub fn to_second_order(&self) -> Result<SecondOrderEq, Error> {
        let qe = self.q.require_exact()?;
        let c2 = RationalFunction::one();
        let c1 = RationalFunction::constant(-(qe + &ExactComplexRational::one()));
        let qrf = RationalFunction::constant(qe.clone());
        let w = RationalFunction::from_polynomial(qm1_z(qe));
        let c0 = &qrf * &(&RationalFunction::one() + &(&w * &self.a));
        SecondOrderEq::new(self.q.clone(), c2, c1, c0)
    }

    /// Exact equivalence of a second-order form with the divided-difference
    /// form `Δ_q²y + A/((q-1)z)·y = 0`: both are expanded as linear forms in
    /// the formal coordinates `y(z), y(qz), y(q²z)` and compared up to a
    /// rational-function multiplier.
    pub fn second_order_matches_delta_form(
        &self,
        so: &SecondOrderEq,
    ) -> Result<bool, Error> {
        let qe = self.q.require_exact()?;
        let s = RationalFunction::new(Polynomial::one(), qm1_z(qe))?;
        let d1 = ShiftLinearForm::new(vec![-&s, s.clone()]);
        let d2 = d1.dilate(&self.q)?.sub(&d1).scale(&s);
        let lhs = d2.add(&ShiftLinearForm::new(vec![&self.a * &s]));
        let rhs = ShiftLinearForm::new(vec![so.c0.clone(), so.c1.clone(), so.c2.clone()]);
        Ok(lhs.proportional_to(&rhs))
    }

    /// Residual of the divided-difference identity
    /// `Δ_q f = (A + (q-1)z·f²) / ((q-1)z·(1-(q-1)z·f))`,
    /// returned as an exact rational function. The residual vanishes
    /// identically when `f` solves the Riccati equation; for any other `f`
    /// it measures the failure of the identity. Errors when
    /// `1-(q-1)z·f ≡ 0` (the right-hand side is undefined).
    pub fn delta_q_riccati_identity(
        &self,
        f: &RationalFunction,
    ) -> Result<RationalFunction, Error> {
        let qe = self.q.require_exact()?;
        let w = RationalFunction::from_polynomial(qm1_z(qe));
        let denom = &RationalFunction::one() - &(&w * f);
        if denom.is_zero() {
            return Err(Error::DomainError(
                "1-(q-1)z·f vanishes identically; the divided-difference \
                 identity is undefined"
                    .into(),
            ));
        }
        let num = &self.a + &(&w * &(f * f));
        let rhs = num.checked_div(&denom)?.checked_div(&w)?;
        let lhs = f.delta_q(qe)?;
        Ok(&lhs - &rhs)
    }
}

/// The two Möbius factors of the Riccati map at a candidate solution.
#[derive(Debug, Clone)]
pub struct NondegeneracyReport {
    /// `1 - (q-1)z·f(z)` (denominator of the forward map).
    pub forward_factor: RationalFunction,
    /// `1 + (q-1)z·f(qz)` (denominator of the inverse map).
    pub backward_factor: RationalFunction,
    pub forward_vanishes: bool,
    pub backward_vanishes: bool,
}

impl NondegeneracyReport {
    pub fn degenerate(&self) -> bool {
        self.forward_vanishes || self.backward_vanishes
    }
}

/// A solution presented as a point evaluator. Rational solutions carry
/// their exact form (numeric evaluation then agrees with exact evaluation);
/// composites are built by this crate from closed-form pieces; opaque
/// evaluators are caller-supplied black boxes.
#[derive(Clone)]
pub enum SolutionEvaluator {
    Rational(RationalFunction),
    Composite {
        label: String,
        f: Arc<dyn Fn(Complex64) -> EvalValue + Send + Sync>,
    },
    Opaque {
        label: String,
        f: Arc<dyn Fn(Complex64) -> EvalValue + Send + Sync>,
    },
}

impl SolutionEvaluator {
    pub fn rational(f: RationalFunction) -> Self {
        SolutionEvaluator::Rational(f)
    }

    pub fn composite(
        label: impl Into<String>,
        f: impl Fn(Complex64) -> EvalValue + Send + Sync + 'static,
    ) -> Self {
        SolutionEvaluator::Composite {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn opaque(
        label: impl Into<String>,
        f: impl Fn(Complex64) -> EvalValue + Send + Sync + 'static,
    ) -> Self {
        SolutionEvaluator::Opaque {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, z: Complex64) -> EvalValue {
        match self {
            SolutionEvaluator::Rational(rf) => rf.eval(z),
            SolutionEvaluator::Composite { f, .. } => f(z),
            SolutionEvaluator::Opaque { f, .. } => f(z),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            SolutionEvaluator::Rational(_) => "rational",
            SolutionEvaluator::Composite { .. } => "closed-form composite",
            SolutionEvaluator::Opaque { .. } => "opaque",
        }
    }

    pub fn as_rational(&self) -> Option<&RationalFunction> {
        match self {
            SolutionEvaluator::Rational(rf) => Some(rf),
            _ => None,
        }
    }
}

impl fmt::Debug for SolutionEvaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionEvaluator::Rational(rf) => write!(f, "Rational({rf})"),
            SolutionEvaluator::Composite { label, .. } => {
                write!(f, "Composite({label})")
            }
            SolutionEvaluator::Opaque { label, .. } => write!(f, "Opaque({label})"),
        }
    }
}

/// The free parameter of the three-solution family: either an exact
/// constant or a q-periodic function given as an evaluator. Q-periodicity
/// of an evaluator is validated on a sample ring before use (a sample
/// check, not a proof).
#[derive(Clone)]
pub enum FamilyParameter {
    Constant(ExactComplexRational),
    QPeriodic {
        label: String,
        f: Arc<dyn Fn(Complex64) -> EvalValue + Send + Sync>,
    },
}

impl FamilyParameter {
    pub fn constant(c: ExactComplexRational) -> Self {
        FamilyParameter::Constant(c)
    }

    pub fn q_periodic(
        label: impl Into<String>,
        f: impl Fn(Complex64) -> EvalValue + Send + Sync + 'static,
    ) -> Self {
        FamilyParameter::QPeriodic {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, z: Complex64) -> EvalValue {
        match self {
            FamilyParameter::Constant(c) => EvalValue::from_complex(c.to_complex64()),
            FamilyParameter::QPeriodic { f, .. } => f(z),
        }
    }

    /// Checks `φ(qz) = φ(z)` on 32 sample points (relative tolerance 1e-9);
    /// constants pass trivially.
    fn check_q_periodic(&self, q: &QBase) -> Result<(), Error> {
        let f = match self {
            FamilyParameter::Constant(_) => return Ok(()),
            FamilyParameter::QPeriodic { f, .. } => f,
        };
        let qn = q.numeric();
        for j in 0..32 {
            let theta = 2.0 * std::f64::consts::PI * (j as f64) / 32.0;
            let r = 0.8 + 0.013 * (j as f64);
            let z = Complex64::from_polar(r, theta);
            match (f(z), f(qn * z)) {
                (EvalValue::Pole, EvalValue::Pole) => {}
                (EvalValue::Finite(v), EvalValue::Finite(w)) => {
                    if (w - v).norm() > 1e-9 * (1.0 + v.norm()) {
                        return Err(Error::InvalidArgument(
                            "family parameter fails the q-periodicity \
                             sample check"
                                .into(),
                        ));
                    }
                }
                _ => {
                    return Err(Error::InvalidArgument(
                        "family parameter fails the q-periodicity sample \
                         check (pole mismatch)"
                            .into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FamilyParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyParameter::Constant(c) => write!(f, "Constant({c})"),
            FamilyParameter::QPeriodic { label, .. } => write!(f, "QPeriodic({label})"),
        }
    }
}

/// Maximum relative residual of the cleared Riccati form along the orbit
/// `z0, qz0, …, q^(depth-1)·z0`, evaluated numerically. Samples where any
/// ingredient is a pole marker are skipped; `None` when no sample is
/// usable.
pub fn numeric_residual_on_orbit(
    eq: &RiccatiEquation,
    f: &SolutionEvaluator,
    z0: Complex64,
    depth: usize,
) -> Option<f64> {
    let qn = eq.q.numeric();
    let mut z = z0;
    let mut worst: Option<f64> = None;
    for _ in 0..depth {
        let fz = f.eval(z);
        let fqz = f.eval(qn * z);
        let az = eq.a.eval(z);
        if let (EvalValue::Finite(fz), EvalValue::Finite(fqz), EvalValue::Finite(az)) =
            (fz, fqz, az)
        {
            let t = (qn - 1.0) * z * fqz * fz;
            let r = t - fqz + fz + az;
            let scale = t
                .norm()
                .max(fqz.norm())
                .max(fz.norm())
                .max(az.norm())
                .max(1.0);
            let dev = r.norm() / scale;
            worst = Some(worst.map_or(dev, |w: f64| w.max(dev)));
        }
        z *= qn;
    }
    worst
}

/// The solution family through three pairwise distinct solutions
/// `f0, f1, f2`:
///
/// ```text
/// f = (f1-f0)(f2-f0) / (φ·(f2-f1) + (f2-f0)) + f0,
/// ```
///
/// with q-periodic parameter `φ`; `φ = 0` recovers `f1` and `φ = -1`
/// recovers `f2`. With rational seeds and a constant parameter the member
/// is computed exactly; otherwise a composite evaluator is returned whose
/// pole markers are conservative (a pole of any ingredient is reported as
/// a pole of the member).
pub fn family_member(
    eq: &RiccatiEquation,
    f0: &SolutionEvaluator,
    f1: &SolutionEvaluator,
    f2: &SolutionEvaluator,
    phi: &FamilyParameter,
) -> Result<SolutionEvaluator, Error> {
    phi.check_q_periodic(&eq.q)?;
    let rationals = match (f0.as_rational(), f1.as_rational(), f2.as_rational()) {
        (Some(r0), Some(r1), Some(r2)) => Some((r0, r1, r2)),
        _ => None,
    };
    if let Some((r0, r1, r2)) = rationals {
        if r0 == r1 || r0 == r2 || r1 == r2 {
            return Err(Error::InvalidArgument(
                "family seeds must be pairwise distinct".into(),
            ));
        }
        for r in [r0, r1, r2] {
            let residual = eq.verify_solution_exact(r)?;
            if !residual.is_zero() {
                return Err(Error::NotASolution(format!(
                    "family seed has nonzero residual {residual}"
                )));
            }
        }
        if let FamilyParameter::Constant(c) = phi {
            let phirf = RationalFunction::constant(c.clone());
            let d1 = r1 - r0;
            let d2 = r2 - r0;
            let d21 = r2 - r1;
            let den = &(&phirf * &d21) + &d2;
            if den.is_zero() {
                return Err(Error::DomainError(
                    "the parameter value collapses the family denominator \
                     identically"
                        .into(),
                ));
            }
            let member = &(&d1 * &d2).checked_div(&den)? + r0;
            return Ok(SolutionEvaluator::Rational(member));
        }
    } else {
        // Numeric distinctness: some pair must separate on a sample ring.
        let evaluators = [f0, f1, f2];
        for i in 0..3 {
            for j in (i + 1)..3 {
                let mut separated = false;
                for k in 0..8 {
                    let theta = 2.0 * std::f64::consts::PI * (k as f64) / 8.0;
                    let z = Complex64::from_polar(1.1 + 0.017 * (k as f64), theta);
                    match (evaluators[i].eval(z), evaluators[j].eval(z)) {
                        (EvalValue::Finite(a), EvalValue::Finite(b)) => {
                            if (a - b).norm() > 1e-9 * (1.0 + a.norm().max(b.norm())) {
                                separated = true;
                                break;
                            }
                        }
                        (EvalValue::Pole, EvalValue::Finite(_))
                        | (EvalValue::Finite(_), EvalValue::Pole) => {
                            separated = true;
                            break;
                        }
                        (EvalValue::Pole, EvalValue::Pole) => {}
                    }
                }
                if !separated {
                    return Err(Error::InvalidArgument(
                        "family seeds must be pairwise distinct".into(),
                    ));
                }
            }
        }
        for f in evaluators {
            match numeric_residual_on_orbit(eq, f, Complex64::new(0.73, 0.21), 12) {
                Some(dev) if dev <= 1e-6 => {}
                Some(_) => {
                    return Err(Error::NotASolution(
                        "family seed fails the numeric residual check".into(),
                    ));
                }
                None => {
                    return Err(Error::InsufficientData(
                        "family seed could not be sampled on the test orbit"
                            .into(),
                    ));
                }
            }
        }
    }
    let (g0, g1, g2, p) = (f0.clone(), f1.clone(), f2.clone(), phi.clone());
    Ok(SolutionEvaluator::composite("family member", move |z| {
        let (v0, v1, v2) = match (g0.eval(z), g1.eval(z), g2.eval(z)) {
            (EvalValue::Finite(a), EvalValue::Finite(b), EvalValue::Finite(c)) => {
                (a, b, c)
            }
            _ => return EvalValue::Pole,
        };
        let pv = match p.eval(z) {
            EvalValue::Finite(v) => v,
            EvalValue::Pole => return EvalValue::Pole,
        };
        let den = pv * (v2 - v1) + (v2 - v0);
        if den == Complex64::new(0.0, 0.0) {
            return EvalValue::Pole;
        }
        EvalValue::from_complex((v1 - v0) * (v2 - v0) / den + v0)
    }))
}

/// A cross ratio evaluated projectively (pole markers are points at
/// infinity); `Indeterminate` flags the 0/0 degeneracies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossRatioValue {
    Finite(Complex64),
    Pole,
    Indeterminate,
}

/// The cross ratio `R = ((f-f1)(f3-f2)) / ((f-f2)(f3-f1))`, computed on
/// projective pairs so pole markers participate as the point at infinity:
/// `f = f1 ↦ 0`, `f = f3 ↦ 1`, `f = f2 ↦` pole.
pub fn cross_ratio(
    f: EvalValue,
    f1: EvalValue,
    f2: EvalValue,
    f3: EvalValue,
) -> CrossRatioValue {
    fn pair(v: EvalValue) -> (Complex64, Complex64) {
        match v {
            EvalValue::Finite(v) => (v, Complex64::new(1.0, 0.0)),
            EvalValue::Pole => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        }
    }
    fn det(x: (Complex64, Complex64), y: (Complex64, Complex64)) -> Complex64 {
        x.0 * y.1 - x.1 * y.0
    }
    let (p, p1, p2, p3) = (pair(f), pair(f1), pair(f2), pair(f3));
    let num = det(p, p1) * det(p3, p2);
    let den = det(p, p2) * det(p3, p1);
    let zero = Complex64::new(0.0, 0.0);
    if num == zero && den == zero {
        CrossRatioValue::Indeterminate
    } else if den == zero {
        CrossRatioValue::Pole
    } else {
        let r = num / den;
        if r.is_finite() {
            CrossRatioValue::Finite(r)
        } else {
            CrossRatioValue::Pole
        }
    }
}

/// Outcome of sampling the cross ratio of four solutions along q-orbits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossRatioInvariance {
    /// Max over consecutive orbit points of `|R(qz)-R(z)| / max(1, |R(z)|)`.
    pub max_deviation: f64,
    /// Number of consecutive finite pairs that contributed.
    pub pairs_used: usize,
    /// Number of distinct sample points visited.
    pub distinct_points: usize,
    /// Set when no pair contributed or all samples sit at one point; the
    /// deviation is then meaningless.
    pub insufficient: bool,
}

/// Samples `R(z) = cross_ratio(f(z), f1(z), f2(z), f3(z))` along the
/// q-orbits of the given base points and reports the worst relative jump
/// between consecutive orbit points. For four solutions of one equation
/// the cross ratio is q-periodic, so the deviation stays at rounding
/// level.
pub fn cross_ratio_invariance_check(
    q: &QBase,
    fs: &[SolutionEvaluator; 4],
    base_points: &[Complex64],
    depth: usize,
) -> CrossRatioInvariance {
    let qn = q.numeric();
    let mut max_deviation: f64 = 0.0;
    let mut pairs_used = 0usize;
    let mut seen: Vec<Complex64> = Vec::new();
    for &z0 in base_points {
        if z0 == Complex64::new(0.0, 0.0) || !z0.is_finite() {
            continue;
        }
        let mut z = z0;
        let mut prev: Option<Complex64> = None;
        for _ in 0..=depth {
            if !seen.contains(&z) {
                seen.push(z);
            }
            let r = cross_ratio(
                fs[0].eval(z),
                fs[1].eval(z),
                fs[2].eval(z),
                fs[3].eval(z),
            );
            prev = match r {
                CrossRatioValue::Finite(v) => {
                    if let Some(p) = prev {
                        let dev = (v - p).norm() / p.norm().max(1.0);
                        max_deviation = max_deviation.max(dev);
                        pairs_used += 1;
                    }
                    Some(v)
                }
                _ => None,
            };
            z *= qn;
        }
    }
    let distinct_points = seen.len();
    CrossRatioInvariance {
        max_deviation,
        pairs_used,
        distinct_points,
        insufficient: pairs_used == 0 || distinct_points < 2,
    }
}

/// A homogeneous linearization `h(qz) = a(z)·h(z)` with its back map.
#[derive(Debug, Clone)]
pub struct MoebiusLinearization {
    pub equation: LinearHomogeneousEq,
    /// The multiplier `a = (1-(q-1)z·f1)/(1-(q-1)z·f2)`.
    pub multiplier: RationalFunction,
    pub back: BackMap,
}

/// The substitution `f = (f1·h + f2)/(h + 1)` sending solutions `h` of the
/// linearization back to solutions `f`; `h = 0 ↦ f2` and `h = ∞ ↦ f1`.
#[derive(Debug, Clone)]
pub struct BackMap {
    f1: RationalFunction,
    f2: RationalFunction,
}

impl BackMap {
    pub fn seeds(&self) -> (&RationalFunction, &RationalFunction) {
        (&self.f1, &self.f2)
    }

    /// Applies the map at a point. A pole marker for `h` lands on `f1`;
    /// `h = -1` produces a pole; a pole of a seed value is reported
    /// conservatively as a pole.
    pub fn apply(&self, h: EvalValue, z: Complex64) -> EvalValue {
        match h {
            EvalValue::Pole => self.f1.eval(z),
            EvalValue::Finite(hv) => {
                let d = hv + Complex64::new(1.0, 0.0);
                if d == Complex64::new(0.0, 0.0) {
                    return EvalValue::Pole;
                }
                match (self.f1.eval(z), self.f2.eval(z)) {
                    (EvalValue::Finite(v1), EvalValue::Finite(v2)) => {
                        EvalValue::from_complex((v1 * hv + v2) / d)
                    }
                    _ => EvalValue::Pole,
                }
            }
        }
    }

    /// Applies the map exactly to a rational `h`; errors when `h ≡ -1`.
    pub fn apply_rational(
        &self,
        h: &RationalFunction,
    ) -> Result<RationalFunction, Error> {
        let num = &(&self.f1 * h) + &self.f2;
        let den = h + &RationalFunction::one();
        num.checked_div(&den)
    }
}

/// A second-order linear q-difference equation
/// `c2(z)·y(q²z) + c1(z)·y(qz) + c0(z)·y(z) = 0` with `c2 ≢ 0`.
#[derive(Debug, Clone)]
pub struct SecondOrderEq {
    pub q: QBase,
    pub c2: RationalFunction,
    pub c1: RationalFunction,
    pub c0: RationalFunction,
}

impl SecondOrderEq {
    pub fn new(
        q: QBase,
        c2: RationalFunction,
        c1: RationalFunction,
        c0: RationalFunction,
    ) -> Result<Self, Error> {
        if c2.is_zero() {
            return Err(Error::InvalidArgument(
                "leading coefficient of a second-order equation must not \
                 vanish identically"
                    .into(),
            ));
        }
        Ok(SecondOrderEq { q, c2, c1, c0 })
    }
}

/// The multiplicative companion orbit of a solution: starting from
/// `y = 1` at `z0`, each step multiplies by `1 - (q-1)z·f(z)`:
/// `points[k] = q^k·z0` and `values[k] = y(q^k·z0)`. When `f` reports a
/// pole at `points[k]` the recursion stops there and `truncated_at`
/// records `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct YOrbit {
    pub points: Vec<Complex64>,
    pub values: Vec<Complex64>,
    pub truncated_at: Option<usize>,
}

/// Runs the companion recursion `y(qz) = (1-(q-1)z·f(z))·y(z)` along the
/// orbit of `z0` for `depth` steps.
pub fn riccati_to_y_orbit(
    q: &QBase,
    f: &SolutionEvaluator,
    z0: Complex64,
    depth: usize,
) -> Result<YOrbit, Error> {
    if z0 == Complex64::new(0.0, 0.0) || !z0.is_finite() {
        return Err(Error::InvalidArgument(
            "orbit base point must be finite and nonzero".into(),
        ));
    }
    if depth == 0 {
        return Err(Error::InvalidArgument(
            "orbit depth must be positive".into(),
        ));
    }
    let qn = q.numeric();
    let mut points = vec![z0];
    let mut values = vec![Complex64::new(1.0, 0.0)];
    let mut z = z0;
    let mut truncated_at = None;
    for k in 0..depth {
        match f.eval(z) {
            EvalValue::Pole => {
                truncated_at = Some(k);
                break;
            }
            EvalValue::Finite(fv) => {
                let next = (Complex64::new(1.0, 0.0) - (qn - 1.0) * z * fv) * values[k];
                z *= qn;
                points.push(z);
                values.push(next);
            }
        }
    }
    Ok(YOrbit {
        points,
        values,
        truncated_at,
    })
}

/// Relative residuals `|c2(z_k)·y_{k+2} + c1(z_k)·y_{k+1} + c0(z_k)·y_k|`
/// (scaled by the largest term) along a companion orbit. Entries where a
/// coefficient cannot be evaluated are reported as NaN.
pub fn second_order_orbit_residuals(so: &SecondOrderEq, orbit: &YOrbit) -> Vec<f64> {
    let n = orbit.values.len();
    let mut out = Vec::new();
    for k in 0..n.saturating_sub(2) {
        let z = orbit.points[k];
        let coeffs = (
            so.c2.eval(z).finite(),
            so.c1.eval(z).finite(),
            so.c0.eval(z).finite(),
        );
        let (Some(c2), Some(c1), Some(c0)) = coeffs else {
            out.push(f64::NAN);
            continue;
        };
        let t2 = c2 * orbit.values[k + 2];
        let t1 = c1 * orbit.values[k + 1];
        let t0 = c0 * orbit.values[k];
        let scale = t2.norm().max(t1.norm()).max(t0.norm());
        if scale == 0.0 {
            out.push(0.0);
        } else {
            out.push((t2 + t1 + t0).norm() / scale);
        }
    }
    out
}
