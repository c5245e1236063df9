//! Error-controlled evaluation of the infinite q-Pochhammer product, the
//! q-gamma function Γ_q, and the scaled function γ_q.
//!
//! For `|q| < 1` the basic object is
//!
//! ```text
//! (a; q)_∞ = ∏_{k=0}^{∞} (1 − a q^k),
//! ```
//!
//! from which
//!
//! ```text
//! Γ_q(x) = (q; q)_∞ / (q^x; q)_∞ · (1 − q)^{1−x},
//! γ_q(z) = (q; q)_∞ / (z; q)_∞,
//! ```
//!
//! so that `γ_q(0) = (q; q)_∞` and `γ_q` satisfies the functional equation
//! `γ_q(qz) = (1 − z) γ_q(z)`. All complex powers (`q^x`, `(1−q)^{1−x}`)
//! use the principal branch, which is recorded here rather than left
//! implicit: outputs are reproducible but other branch choices exist.
//!
//! # Note on the pole set of γ_q
//!
//! The factor `1 − z q^k` of `(z; q)_∞` vanishes exactly when `z = q^{−k}`,
//! so γ_q(z) = (q;q)_∞/(z;q)_∞ has its poles at the *negative* integer
//! powers `{q^{−k}}_{k=0}^{∞}` — the lattice growing away from the origin.
//! A description placing the poles at the nonnegative powers `{q^k}` is
//! sometimes seen, but it is inconsistent with the defining product: this
//! module follows the product identity throughout and
//! [`gamma_q_pole_set`] reports the `q^{−k}` lattice.

use num_complex::Complex64;
use num_traits::One;

use crate::algebra::ExactComplexRational;
use crate::error::Error;
use crate::value::EvalValue;

/// Hard cap on the number of product factors before reporting failure.
const MAX_FACTORS: usize = 20_000_000;

/// The deformation base `q`, carried in exact form whenever one is known.
///
/// Validation enforces `q ≠ 0` and `|q| ≠ 1`; the exact form, when present,
/// is checked exactly (`|q|² ≠ 1` as a rational identity).
#[derive(Debug, Clone, PartialEq)]
pub struct QBase {
    q_exact: Option<ExactComplexRational>,
    q_num: Complex64,
}

impl QBase {
    /// Base with an exact value; symbolic operations require this form.
    pub fn from_exact(q: ExactComplexRational) -> Result<Self, Error> {
        if q.is_zero() {
            return Err(Error::InvalidBase("q must be nonzero".to_string()));
        }
        if q.norm_sqr().is_one() {
            return Err(Error::InvalidBase("|q| must not equal 1".to_string()));
        }
        let q_num = q.to_complex64();
        Ok(QBase {
            q_exact: Some(q),
            q_num,
        })
    }

    /// Purely numeric base (no exact form attached).
    pub fn from_complex(q: Complex64) -> Result<Self, Error> {
        if !q.re.is_finite() || !q.im.is_finite() {
            return Err(Error::InvalidBase("q must be finite".to_string()));
        }
        if q.re == 0.0 && q.im == 0.0 {
            return Err(Error::InvalidBase("q must be nonzero".to_string()));
        }
        if (q.norm() - 1.0).abs() < f64::EPSILON {
            return Err(Error::InvalidBase(
                "|q| must not equal 1 (within double precision)".to_string(),
            ));
        }
        Ok(QBase {
            q_exact: None,
            q_num: q,
        })
    }

    pub fn from_f64(q: f64) -> Result<Self, Error> {
        QBase::from_complex(Complex64::new(q, 0.0))
    }

    pub fn exact(&self) -> Option<&ExactComplexRational> {
        self.q_exact.as_ref()
    }

    /// The exact value, or [`Error::ExactBaseRequired`] when the base was
    /// constructed numerically.
    pub fn require_exact(&self) -> Result<&ExactComplexRational, Error> {
        self.q_exact.as_ref().ok_or(Error::ExactBaseRequired)
    }

    pub fn numeric(&self) -> Complex64 {
        self.q_num
    }

    pub fn modulus(&self) -> f64 {
        self.q_num.norm()
    }

    /// True when `|q| < 1`, the convergence region of the infinite product.
    pub fn inside_unit_disk(&self) -> bool {
        self.modulus() < 1.0
    }
}

/// Accuracy request for numeric evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalRequest {
    /// Target relative accuracy, in (0, 1).
    pub eps: f64,
    /// A point closer than `pole_guard·max(1,|z|)` to a known pole is
    /// reported as a pole marker instead of a huge finite value.
    pub pole_guard: f64,
}

impl EvalRequest {
    pub fn new(eps: f64, pole_guard: f64) -> Result<Self, Error> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidArgument(
                "eps must lie in (0, 1)".to_string(),
            ));
        }
        if !(pole_guard > 0.0) {
            return Err(Error::InvalidArgument(
                "pole_guard must be positive".to_string(),
            ));
        }
        Ok(EvalRequest { eps, pole_guard })
    }
}

impl Default for EvalRequest {
    /// `eps = 1e−12`, `pole_guard = 1e−9`.
    fn default() -> Self {
        EvalRequest {
            eps: 1e-12,
            pole_guard: 1e-9,
        }
    }
}

fn require_convergent(q: &QBase) -> Result<(), Error> {
    if q.inside_unit_disk() {
        Ok(())
    } else {
        Err(Error::InvalidBase(
            "base outside convergence region (need |q| < 1)".to_string(),
        ))
    }
}

/// The infinite product `(a; q)_∞ = ∏_{k≥0} (1 − a q^k)` for `|q| < 1`.
///
/// The product is truncated at the smallest `N` with
/// `|a||q|^N/(1−|q|) ≤ eps/4` and `|a q^N| < 1/2`, then one multiplicative
/// tail correction `exp(−a q^N/(1−q))` (the first-order log-product tail)
/// is applied.
pub fn qpochhammer_inf(a: Complex64, q: &QBase, req: &EvalRequest) -> Result<Complex64, Error> {
    require_convergent(q)?;
    let qn = q.numeric();
    let qm = q.modulus();
    let am = a.norm();

    let n = if am == 0.0 {
        0usize
    } else {
        let bound = (req.eps / 4.0) * (1.0 - qm) / am;
        let window = 0.5 / am;
        let target = bound.min(window);
        if target >= 1.0 {
            0
        } else {
            let n = (target.ln() / qm.ln()).ceil();
            if !(n.is_finite() && n < MAX_FACTORS as f64) {
                return Err(Error::ConvergenceFailure(format!(
                    "product needs more than {MAX_FACTORS} factors at |q| = {qm}"
                )));
            }
            n.max(0.0) as usize
        }
    };

    let mut prod = Complex64::new(1.0, 0.0);
    let mut aqk = a;
    for k in 0..n {
        prod *= Complex64::new(1.0, 0.0) - aqk;
        // Resynchronize the running power periodically to stop drift over
        // long products.
        if (k + 1) % 256 == 0 && k + 1 <= i32::MAX as usize {
            aqk = a * qn.powi((k + 1) as i32);
        } else {
            aqk *= qn;
        }
    }
    let tail = (-aqk / (Complex64::new(1.0, 0.0) - qn)).exp();
    Ok(prod * tail)
}

/// `(q; q)_∞`, the value `γ_q(0)`.
pub fn qq_inf(q: &QBase, req: &EvalRequest) -> Result<Complex64, Error> {
    qpochhammer_inf(q.numeric(), q, req)
}

/// True when `z` lies within the guard distance of the pole lattice
/// `{q^{−k}}` (see module docs).
fn near_pole_lattice(z: Complex64, q: &QBase, guard: f64) -> bool {
    let dist = guard * 1.0_f64.max(z.norm());
    let mut p = Complex64::new(1.0, 0.0);
    let inv_q = 1.0 / q.numeric();
    let reach = z.norm() + dist + 1.0;
    for _ in 0..1_000_000 {
        if (z - p).norm() <= dist {
            return true;
        }
        p *= inv_q;
        if p.norm() > reach {
            break;
        }
    }
    false
}

/// `γ_q(z) = (q; q)_∞ / (z; q)_∞` for `|q| < 1`; pole marker within
/// `pole_guard·max(1,|z|)` of the pole lattice `{q^{−k}}`.
pub fn gamma_q_z(z: Complex64, q: &QBase, req: &EvalRequest) -> Result<EvalValue, Error> {
    require_convergent(q)?;
    if near_pole_lattice(z, q, req.pole_guard) {
        return Ok(EvalValue::Pole);
    }
    let num = qq_inf(q, req)?;
    let den = qpochhammer_inf(z, q, req)?;
    if den.re == 0.0 && den.im == 0.0 {
        return Ok(EvalValue::Pole);
    }
    Ok(EvalValue::from_complex(num / den))
}

/// `Γ_q(x) = (q; q)_∞ / (q^x; q)_∞ · (1−q)^{1−x}` for `|q| < 1`, with
/// `q^x` and `(1−q)^{1−x}` on principal branches; pole marker when `q^x`
/// falls on the pole lattice (e.g. at nonpositive integer `x` for real
/// positive `q`).
pub fn qgamma(x: Complex64, q: &QBase, req: &EvalRequest) -> Result<EvalValue, Error> {
    require_convergent(q)?;
    let qn = q.numeric();
    let w = (x * qn.ln()).exp();
    let core = gamma_q_z(w, q, req)?;
    let EvalValue::Finite(core) = core else {
        return Ok(EvalValue::Pole);
    };
    let one_minus_q = Complex64::new(1.0, 0.0) - qn;
    let scale = ((Complex64::new(1.0, 0.0) - x) * one_minus_q.ln()).exp();
    Ok(EvalValue::from_complex(core * scale))
}

/// All poles `q^{−k}` of γ_q with modulus at most `radius`, in increasing
/// `k` (hence increasing modulus).
pub fn gamma_q_pole_set(q: &QBase, radius: f64) -> Result<Vec<Complex64>, Error> {
    require_convergent(q)?;
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument("radius must be positive".to_string()));
    }
    let inv_q = 1.0 / q.numeric();
    let mut out = Vec::new();
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..1_000_000 {
        if p.norm() > radius {
            break;
        }
        out.push(p);
        p *= inv_q;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qb(re: f64, im: f64) -> QBase {
        QBase::from_complex(Complex64::new(re, im)).unwrap()
    }

    fn req() -> EvalRequest {
        EvalRequest::default()
    }

    #[test]
    fn base_validation() {
        assert!(QBase::from_f64(0.0).is_err());
        assert!(QBase::from_f64(1.0).is_err());
        assert!(QBase::from_f64(-1.0).is_err());
        assert!(QBase::from_f64(2.0).is_ok());
        assert!(QBase::from_exact(ExactComplexRational::from_ratios(3, 5, 4, 5)).is_err());
        assert!(QBase::from_exact(ExactComplexRational::from_ratio(1, 2)).is_ok());
        let b = QBase::from_exact(ExactComplexRational::from_ratio(-1, 2)).unwrap();
        assert_eq!(b.require_exact().unwrap(), &ExactComplexRational::from_ratio(-1, 2));
        assert_eq!(qb(0.5, 0.0).require_exact(), Err(Error::ExactBaseRequired));
    }

    #[test]
    fn eval_request_validation() {
        assert!(EvalRequest::new(1e-12, 1e-9).is_ok());
        assert!(EvalRequest::new(0.0, 1e-9).is_err());
        assert!(EvalRequest::new(1.5, 1e-9).is_err());
        assert!(EvalRequest::new(1e-12, 0.0).is_err());
    }

    #[test]
    fn pochhammer_reference_values() {
        let q = qb(0.5, 0.0);
        // (1/2; 1/2)_inf, 30-digit reference 0.288788095086602421278899721929
        let v = qpochhammer_inf(Complex64::new(0.5, 0.0), &q, &req()).unwrap();
        assert!((v.re - 0.288788095086602421278899721929).abs() < 1e-13, "{v}");
        assert!(v.im.abs() < 1e-15);
        // a = 0 -> 1 exactly
        let one = qpochhammer_inf(Complex64::new(0.0, 0.0), &q, &req()).unwrap();
        assert_eq!(one, Complex64::new(1.0, 0.0));
        // a = 1 -> first factor vanishes
        let zero = qpochhammer_inf(Complex64::new(1.0, 0.0), &q, &req()).unwrap();
        assert_eq!(zero.norm(), 0.0);
        // a = 2, q = 1/2 -> second factor 1 - 2/2 = 0
        let zero2 = qpochhammer_inf(Complex64::new(2.0, 0.0), &q, &req()).unwrap();
        assert_eq!(zero2.norm(), 0.0);
    }

    #[test]
    fn pochhammer_complex_reference() {
        // (a; q)_inf at a = q = 0.2+0.3i:
        // 0.85187207282450362004 - 0.42552191609293939916i
        let q = qb(0.2, 0.3);
        let v = qpochhammer_inf(Complex64::new(0.2, 0.3), &q, &req()).unwrap();
        assert!((v.re - 0.85187207282450362004).abs() < 1e-13);
        assert!((v.im + 0.42552191609293939916).abs() < 1e-13);
    }

    #[test]
    fn pochhammer_rejects_divergent_base() {
        let q = QBase::from_f64(2.0).unwrap();
        assert!(matches!(
            qpochhammer_inf(Complex64::new(0.5, 0.0), &q, &req()),
            Err(Error::InvalidBase(_))
        ));
    }

    #[test]
    fn pochhammer_recursion_property() {
        // (a; q)_inf = (1 - a)(aq; q)_inf
        for &(qr, qi) in &[(0.5, 0.0), (-0.5, 0.0), (0.3, 0.0), (0.2, 0.3)] {
            let q = qb(qr, qi);
            let a = Complex64::new(0.7, -0.4);
            let lhs = qpochhammer_inf(a, &q, &req()).unwrap();
            let rhs = (Complex64::new(1.0, 0.0) - a)
                * qpochhammer_inf(a * q.numeric(), &q, &req()).unwrap();
            assert!((lhs - rhs).norm() <= 1e-11 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn truncation_monotone_accuracy() {
        let q = qb(0.5, 0.0);
        let a = Complex64::new(0.7, 0.2);
        let coarse = qpochhammer_inf(a, &q, &EvalRequest::new(1e-12, 1e-9).unwrap()).unwrap();
        let fine = qpochhammer_inf(a, &q, &EvalRequest::new(1e-15, 1e-9).unwrap()).unwrap();
        assert!((coarse - fine).norm() <= 1e-11 * fine.norm());
    }

    #[test]
    fn gamma_q_z_reference_and_functional_equation() {
        let q = qb(0.5, 0.0);
        // gamma_{1/2}(0.3) reference 0.56612037456555994083
        let v = gamma_q_z(Complex64::new(0.3, 0.0), &q, &req())
            .unwrap()
            .finite()
            .unwrap();
        assert!((v.re - 0.56612037456555994083).abs() < 1e-13);
        // gamma_q(0) = (q; q)_inf
        let at0 = gamma_q_z(Complex64::new(0.0, 0.0), &q, &req())
            .unwrap()
            .finite()
            .unwrap();
        assert!((at0.re - 0.288788095086602421278899721929).abs() < 1e-13);
        // gamma_q(qz) = (1 - z) gamma_q(z) at z = 0.3
        let z = Complex64::new(0.3, 0.0);
        let lhs = gamma_q_z(z * q.numeric(), &q, &req())
            .unwrap()
            .finite()
            .unwrap();
        let rhs = (Complex64::new(1.0, 0.0) - z) * v;
        assert!((lhs - rhs).norm() <= 1e-11 * v.norm());
        let _ = at0;
    }

    #[test]
    fn gamma_q_z_pole_detection() {
        let q = qb(0.5, 0.0);
        // z = 2 = q^{-1} is a pole.
        assert!(gamma_q_z(Complex64::new(2.0, 0.0), &q, &req()).unwrap().is_pole());
        // Slightly inside the guard.
        let close = Complex64::new(2.0 + 1e-10, 0.0);
        assert!(gamma_q_z(close, &q, &req()).unwrap().is_pole());
        // Far from any pole: finite.
        assert!(!gamma_q_z(Complex64::new(-0.7, 0.1), &q, &req()).unwrap().is_pole());
    }

    #[test]
    fn qgamma_reference_points() {
        let q = qb(0.5, 0.0);
        // Gamma_q(1) = 1.
        let one = qgamma(Complex64::new(1.0, 0.0), &q, &req()).unwrap().finite().unwrap();
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        // Gamma_{1/2}(3) = (1 + q)|_{q=1/2} = 3/2.
        let three = qgamma(Complex64::new(3.0, 0.0), &q, &req()).unwrap().finite().unwrap();
        assert!((three - Complex64::new(1.5, 0.0)).norm() < 1e-12);
        // Recurrence Gamma_q(x+1) = (1-q^x)/(1-q) Gamma_q(x) at x = 2.5.
        let x = Complex64::new(2.5, 0.0);
        let gx = qgamma(x, &q, &req()).unwrap().finite().unwrap();
        let gx1 = qgamma(x + Complex64::new(1.0, 0.0), &q, &req()).unwrap().finite().unwrap();
        let factor = (Complex64::new(1.0, 0.0) - (x * q.numeric().ln()).exp())
            / (Complex64::new(1.0, 0.0) - q.numeric());
        assert!((gx1 - factor * gx).norm() <= 1e-11 * gx1.norm());
        // x = -1 lies on the pole set (q^{-1} = 2 is a lattice point).
        assert!(qgamma(Complex64::new(-1.0, 0.0), &q, &req()).unwrap().is_pole());
    }

    #[test]
    fn pole_set_examples() {
        let q = qb(0.5, 0.0);
        let p5 = gamma_q_pole_set(&q, 5.0).unwrap();
        let expect = [1.0, 2.0, 4.0];
        assert_eq!(p5.len(), 3);
        for (got, want) in p5.iter().zip(expect) {
            assert!((got - Complex64::new(want, 0.0)).norm() < 1e-12);
        }
        assert!(gamma_q_pole_set(&q, 0.5).unwrap().is_empty());
        let qm = qb(-0.5, 0.0);
        let p2 = gamma_q_pole_set(&qm, 2.0).unwrap();
        assert_eq!(p2.len(), 2);
        assert!((p2[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((p2[1] - Complex64::new(-2.0, 0.0)).norm() < 1e-12);
    }
}
