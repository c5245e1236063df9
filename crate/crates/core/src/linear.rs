//! First-order linear q-difference equations.
//!
//! Two shapes are handled:
//!
//! * the homogeneous multiplicative form `h(qz) = a(z) h(z)`, solved in
//!   closed form by factoring `a(z) = c ∏(1 − z/αᵢ) / ∏(1 − z/βⱼ)` and
//!   assembling
//!
//!   ```text
//!   h(z) = z^{log_q c} · ∏ γ_q(z/αᵢ) / ∏ γ_q(z/βⱼ),
//!   ```
//!
//!   which is meromorphic exactly when `log_q c` is an integer;
//!
//! * the additive form `A1(z) u(qz) + A0(z) u(z) + C(z) = 0`, for which an
//!   exact rational-solution search is provided (candidate denominator from
//!   q-orbit chains between the zeros of `A0(z)` and of `A1(z/q)`, numerator
//!   degree from leading/trailing coefficient balance, exact linear solve,
//!   and mandatory exact re-verification of every result).

use num_complex::Complex64;

use crate::algebra::{
    roots, solve_exact, ExactComplexRational, Polynomial, RationalFunction,
};
use crate::error::Error;
use crate::qspecial::{qpochhammer_inf, qq_inf, EvalRequest, QBase};
use crate::value::EvalValue;

/// The homogeneous equation `h(qz) = a(z) h(z)`.
#[derive(Debug, Clone)]
pub struct LinearHomogeneousEq {
    pub q: QBase,
    pub a: RationalFunction,
}

impl LinearHomogeneousEq {
    /// Errors when `a` is identically zero.
    pub fn new(q: QBase, a: RationalFunction) -> Result<Self, Error> {
        if a.is_zero() {
            return Err(Error::InvalidArgument(
                "multiplier a(z) must not be identically zero".to_string(),
            ));
        }
        Ok(LinearHomogeneousEq { q, a })
    }
}

/// The additive equation `A1(z) u(qz) + A0(z) u(z) + C(z) = 0`.
#[derive(Debug, Clone)]
pub struct LinearFirstOrderEq {
    pub q: QBase,
    pub a1: Polynomial,
    pub a0: Polynomial,
    pub c: Polynomial,
}

impl LinearFirstOrderEq {
    /// Errors when `A1` and `A0` are both zero.
    pub fn new(q: QBase, a1: Polynomial, a0: Polynomial, c: Polynomial) -> Result<Self, Error> {
        if a1.is_zero() && a0.is_zero() {
            return Err(Error::InvalidArgument(
                "shift and identity coefficients must not both vanish".to_string(),
            ));
        }
        Ok(LinearFirstOrderEq { q, a1, a0, c })
    }

    /// Exact residual `A1(z) u(qz) + A0(z) u(z) + C(z)` for a candidate
    /// solution (zero exactly when `u` solves the equation).
    pub fn residual(&self, u: &RationalFunction) -> Result<RationalFunction, Error> {
        let qe = self.q.require_exact()?;
        let shifted = u.q_dilate(qe)?;
        let t1 = &RationalFunction::from_polynomial(self.a1.clone()) * &shifted;
        let t0 = &RationalFunction::from_polynomial(self.a0.clone()) * u;
        Ok(&(&t1 + &t0) + &RationalFunction::from_polynomial(self.c.clone()))
    }
}

/// Closed-form data for the multiplicative equation: the constant `c`, the
/// zeros `αᵢ` and poles `βⱼ` of `a` (with multiplicity, as flat multisets),
/// and `log_q c` with its integrality verdict.
#[derive(Debug, Clone)]
pub struct ClosedFormSolution {
    /// Principal-branch `Log c / Log q`.
    pub logq_c: Complex64,
    /// True when `c = q^{n0}` holds for an integer `n0` (within tolerance);
    /// equivalent to the closed form being meromorphic.
    pub logq_c_is_integer: bool,
    /// The integer exponent; meaningful only when the flag is set.
    pub n0: i64,
    pub c: Complex64,
    pub alphas: Vec<Complex64>,
    pub betas: Vec<Complex64>,
    pub q: QBase,
}

impl ClosedFormSolution {
    /// The closed form is single-valued (meromorphic) exactly when the
    /// leading exponent is an integer.
    pub fn is_meromorphic(&self) -> bool {
        self.logq_c_is_integer
    }
}

/// Verdict of the constant-multiplier case `h(qz) = a·h(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantCaseResult {
    pub solvable_in_rationals: bool,
    /// The integer `m` with `q^m = a`, when one exists.
    pub exponent: Option<i64>,
    /// The rational witness `z^m`, when solvable.
    pub witness: Option<RationalFunction>,
    /// Principal-branch `Log a / Log q` (reported even when the modulus
    /// test finds an integer exponent on another branch).
    pub log_ratio: Complex64,
}

fn sorted_multiset(mut v: Vec<Complex64>) -> Vec<Complex64> {
    v.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    v
}

/// Factors a nonconstant `a(z)` with `a(0)` finite and nonzero as
/// `c ∏(1 − z/αᵢ) / ∏(1 − z/βⱼ)`: returns `(c, alphas, betas)` with roots
/// repeated by multiplicity.
///
/// A zero or pole at the origin admits no such product form and is
/// rejected.
pub fn factor_coefficient(
    a: &RationalFunction,
    tol: f64,
) -> Result<(Complex64, Vec<Complex64>, Vec<Complex64>), Error> {
    if a.is_constant() {
        return Err(Error::InvalidArgument(
            "constant multiplier: use the constant-case solver".to_string(),
        ));
    }
    if a.num().valuation() != Some(0) || a.den().valuation() != Some(0) {
        return Err(Error::DomainError(
            "origin zero/pole: product-form factorization undefined".to_string(),
        ));
    }
    let c = a
        .eval(Complex64::new(0.0, 0.0))
        .finite()
        .expect("origin value finite by the valuation check");
    let expand = |p: &Polynomial| -> Result<Vec<Complex64>, Error> {
        if p.is_constant() {
            return Ok(Vec::new());
        }
        let clusters = roots(p, tol)?;
        let mut out = Vec::new();
        for cl in clusters {
            for _ in 0..cl.multiplicity {
                out.push(cl.value);
            }
        }
        Ok(sorted_multiset(out))
    };
    Ok((c, expand(a.num())?, expand(a.den())?))
}

/// Finds the integer `m` with `q^m = w` (within `tol·|w|`), if any.
///
/// Since `|q| ≠ 1`, the modulus `|q|^m = |w|` pins the only possible `m`;
/// that candidate (and its neighbours, for rounding safety) is then checked
/// directly against `w`. This sidesteps the branch ambiguity of
/// `Log w / Log q`, which for non-real bases need not be an integer even
/// when `w` is an exact integer power of `q`.
fn integer_power_exponent(w: Complex64, q: &QBase, tol: f64) -> Option<i64> {
    let wm = w.norm();
    if !(wm > 0.0) || !wm.is_finite() {
        return None;
    }
    let qm = q.modulus();
    let guess = wm.ln() / qm.ln();
    if !guess.is_finite() || guess.abs() > 1e6 {
        return None;
    }
    let base = guess.round() as i64;
    for m in [base, base - 1, base + 1] {
        let qm_pow = q.numeric().powi(m as i32);
        if (qm_pow - w).norm() <= tol * wm {
            return Some(m);
        }
    }
    None
}

/// Decides solvability of `h(qz) = a·h(z)` (constant `a ≠ 0`) in rational
/// functions: solvable exactly when `a = q^m` for an integer `m`, with
/// witness `h = z^m`.
pub fn solve_constant_case(
    a: Complex64,
    q: &QBase,
    tol: f64,
) -> Result<ConstantCaseResult, Error> {
    if a.re == 0.0 && a.im == 0.0 {
        return Err(Error::InvalidArgument(
            "constant multiplier must be nonzero".to_string(),
        ));
    }
    let log_ratio = a.ln() / q.numeric().ln();
    let exponent = integer_power_exponent(a, q, tol);
    let witness = exponent.map(monomial_power);
    Ok(ConstantCaseResult {
        solvable_in_rationals: exponent.is_some(),
        exponent,
        witness,
        log_ratio,
    })
}

/// The rational function `z^m` (negative exponents allowed).
fn monomial_power(m: i64) -> RationalFunction {
    let z = RationalFunction::variable();
    z.checked_pow(m).expect("z is invertible")
}

/// Solves `h(qz) = a(z) h(z)` in closed form via [`factor_coefficient`];
/// a constant `a` is rejected (use [`solve_constant_case`]).
pub fn solve_homogeneous(eq: &LinearHomogeneousEq, tol: f64) -> Result<ClosedFormSolution, Error> {
    let (c, alphas, betas) = factor_coefficient(&eq.a, tol)?;
    let logq_c = c.ln() / eq.q.numeric().ln();
    let exponent = integer_power_exponent(c, &eq.q, tol);
    Ok(ClosedFormSolution {
        logq_c,
        logq_c_is_integer: exponent.is_some(),
        n0: exponent.unwrap_or(0),
        c,
        alphas,
        betas,
        q: eq.q.clone(),
    })
}

/// One Pochhammer-type factor of the closed form, tagged with whether it
/// sits in the numerator or denominator of the value.
struct FactorState {
    /// Argument `w = z/α` (or `z/β`).
    w: Complex64,
    /// Lattice index `k` with `w ≈ q^{−k}`, when within the pole guard.
    near_zero_index: Option<usize>,
}

/// `(w; q)_∞` with the single factor `1 − w q^k0` removed.
fn pochhammer_without_factor(
    w: Complex64,
    k0: usize,
    q: &QBase,
    req: &EvalRequest,
) -> Result<Complex64, Error> {
    let full = qpochhammer_inf(w, q, req)?;
    let removed = Complex64::new(1.0, 0.0) - w * q.numeric().powi(k0 as i32);
    if removed.norm() > 1e-3 {
        // Far from the zero: safe to divide out.
        return Ok(full / removed);
    }
    // Recompute the product skipping index k0 (the direct quotient would be
    // 0/0-contaminated). Mirror the truncation of `qpochhammer_inf` by
    // multiplying the missing factors back in around a shifted argument.
    let mut prod = Complex64::new(1.0, 0.0);
    let qn = q.numeric();
    let mut aqk = w;
    // Factor count matching the accuracy target of the full product.
    let qm = q.modulus();
    let am = w.norm();
    let n = if am == 0.0 {
        0
    } else {
        let target = ((req.eps / 4.0) * (1.0 - qm) / am).min(0.5 / am);
        if target >= 1.0 {
            0
        } else {
            ((target.ln() / qm.ln()).ceil()).max(0.0) as usize
        }
    };
    let n = n.max(k0 + 1);
    for k in 0..n {
        if k != k0 {
            prod *= Complex64::new(1.0, 0.0) - aqk;
        }
        aqk *= qn;
    }
    let tail = (-aqk / (Complex64::new(1.0, 0.0) - qn)).exp();
    Ok(prod * tail)
}

/// Nearest pole-lattice index for `w`, within the guard distance.
fn lattice_index(w: Complex64, q: &QBase, guard: f64) -> Option<usize> {
    let dist = guard * 1.0_f64.max(w.norm());
    let mut p = Complex64::new(1.0, 0.0);
    let inv_q = 1.0 / q.numeric();
    let reach = w.norm() + dist + 1.0;
    for k in 0..1_000_000usize {
        if (w - p).norm() <= dist {
            return Some(k);
        }
        p *= inv_q;
        if p.norm() > reach {
            break;
        }
    }
    None
}

/// Evaluates the closed form `z^{n0 or log_q c} ∏γ_q(z/αᵢ)/∏γ_q(z/βⱼ)`.
///
/// γ_q itself is zero-free, so zeros of the value come only from
/// denominator factors' poles. When numerator-factor poles at `z` are
/// matched by at least as many denominator-factor poles, the vanishing
/// linear factors are paired and divided out analytically and a finite
/// value is returned; unmatched poles yield the pole marker.
pub fn eval_closed_form(
    cf: &ClosedFormSolution,
    z: Complex64,
    req: &EvalRequest,
) -> Result<EvalValue, Error> {
    let q = &cf.q;
    if !q.inside_unit_disk() {
        return Err(Error::InvalidBase(
            "base outside convergence region (need |q| < 1)".to_string(),
        ));
    }

    // Leading power factor.
    let power = if cf.logq_c_is_integer {
        if z.re == 0.0 && z.im == 0.0 {
            match cf.n0 {
                0 => Complex64::new(1.0, 0.0),
                n if n > 0 => Complex64::new(0.0, 0.0),
                _ => return Ok(EvalValue::Pole),
            }
        } else {
            let p = z.powi(cf.n0.clamp(i32::MIN as i64, i32::MAX as i64) as i32);
            if !p.re.is_finite() || !p.im.is_finite() {
                return Ok(EvalValue::Pole);
            }
            p
        }
    } else if z.re == 0.0 && z.im == 0.0 {
        // Branch-dependent power at the origin.
        if cf.logq_c.re > 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            return Ok(EvalValue::Pole);
        }
    } else {
        (cf.logq_c * z.ln()).exp()
    };

    // Classify every factor argument against the pole lattice.
    let classify = |centers: &[Complex64]| -> Vec<FactorState> {
        centers
            .iter()
            .map(|&alpha| {
                let w = z / alpha;
                FactorState {
                    w,
                    near_zero_index: lattice_index(w, q, req.pole_guard),
                }
            })
            .collect()
    };
    let num_factors = classify(&cf.alphas); // γ_q(z/α): poles of the value
    let den_factors = classify(&cf.betas); // 1/γ_q(z/β): zeros of the value

    let poles: Vec<&FactorState> = num_factors
        .iter()
        .filter(|f| f.near_zero_index.is_some())
        .collect();
    let zeros: Vec<&FactorState> = den_factors
        .iter()
        .filter(|f| f.near_zero_index.is_some())
        .collect();
    if poles.len() > zeros.len() {
        return Ok(EvalValue::Pole);
    }

    let qq = qq_inf(q, req)?;
    let mut value = power * qq.powi(cf.alphas.len() as i32 - cf.betas.len() as i32);

    // Regular factors contribute their full products.
    for f in &num_factors {
        if f.near_zero_index.is_none() {
            value /= qpochhammer_inf(f.w, q, req)?;
        }
    }
    for f in &den_factors {
        if f.near_zero_index.is_none() {
            value *= qpochhammer_inf(f.w, q, req)?;
        }
    }

    // Pair each numerator-factor pole with a denominator-factor pole: the
    // ratio of the two vanishing linear factors is finite.
    for (p, zf) in poles.iter().zip(&zeros) {
        let kp = p.near_zero_index.unwrap();
        let kz = zf.near_zero_index.unwrap();
        let lin_p = Complex64::new(1.0, 0.0) - p.w * q.numeric().powi(kp as i32);
        let lin_z = Complex64::new(1.0, 0.0) - zf.w * q.numeric().powi(kz as i32);
        let red_p = pochhammer_without_factor(p.w, kp, q, req)?;
        let red_z = pochhammer_without_factor(zf.w, kz, q, req)?;
        if lin_p.norm() == 0.0 {
            // Exact pole paired against a zero: the pair limit depends on
            // direction; report the pole-free convention value 0 when the
            // zero is also exact, else a pole.
            if lin_z.norm() == 0.0 {
                value *= red_z / red_p;
                continue;
            }
            return Ok(EvalValue::Pole);
        }
        value *= (lin_z * red_z) / (lin_p * red_p);
    }
    // Unpaired denominator-factor poles are plain zeros of the value.
    for zf in zeros.iter().skip(poles.len()) {
        value *= qpochhammer_inf(zf.w, q, req)?;
    }

    Ok(EvalValue::from_complex(value))
}

/// Result of the rational-solution search for the additive equation.
#[derive(Debug, Clone)]
pub struct RationalSolutions {
    /// One exact solution of the full equation (`None` when the equation is
    /// homogeneous or no solution was found within bounds).
    pub particular: Option<RationalFunction>,
    /// Basis of exact solutions of the homogeneous part, each normalized to
    /// a monic numerator.
    pub basis: Vec<RationalFunction>,
    /// Scope of the search: solutions are complete only relative to the
    /// orbit-chain denominator candidate described here.
    pub completeness_note: String,
}

/// Exact rational solutions of `A1(z) u(qz) + A0(z) u(z) + C(z) = 0`.
///
/// The candidate denominator is assembled from q-orbit chains running from
/// zeros of `A1(z/q)` down to zeros of `A0(z)` with ratio a power of `q`
/// (depth at most `max_extra_degree`), together with a power of `z` fixed
/// by an exact trailing-coefficient resonance test. The numerator degree
/// comes from the leading-coefficient balance at infinity (including its
/// exact resonance case). The resulting linear system is solved exactly and
/// every candidate is re-verified by exact substitution, so returned
/// solutions are sound; completeness is relative to the denominator
/// heuristic and is stated in the output metadata.
pub fn find_rational_solutions(
    eq: &LinearFirstOrderEq,
    max_extra_degree: usize,
) -> Result<RationalSolutions, Error> {
    let q = eq.q.require_exact()?.clone();
    let a1 = &eq.a1;
    let a0 = &eq.a0;
    let c = &eq.c;
    let homogeneous = c.is_zero();

    let note = format!(
        "complete relative to the orbit-chain denominator candidate \
         (chain depth <= {max_extra_degree}) and coefficient-balance degree bounds"
    );
    let empty = |particular| RationalSolutions {
        particular,
        basis: Vec::new(),
        completeness_note: note.clone(),
    };

    // Degenerate one-sided equations: A1 = 0 gives u = -C/A0 directly (and
    // no homogeneous freedom); likewise for A0 = 0 after an inverse shift.
    if a1.is_zero() || a0.is_zero() {
        let sol = if a1.is_zero() {
            RationalFunction::new(-c.clone(), a0.clone())?
        } else {
            // A1(z) u(qz) + C(z) = 0  =>  u(z) = -C(z/q)/A1(z/q).
            let qinv = q.checked_inv()?;
            RationalFunction::new(-c.q_dilate(&qinv), a1.q_dilate(&qinv))?
        };
        let verified = eq.residual(&sol)?.is_zero();
        debug_assert!(verified);
        return Ok(RationalSolutions {
            particular: if homogeneous { None } else { Some(sol).filter(|_| verified) },
            basis: Vec::new(),
            completeness_note: note,
        });
    }

    // --- Candidate denominator -------------------------------------------
    // Orbit chains: bottom points are common roots of A0(z) and the
    // dilation A1(q^{-(h+1)} z); a chain of depth h contributes the factors
    // g_h(q^j z), j = 0..h.
    let mut den = Polynomial::one();
    let q_inv = q.checked_inv()?;
    for h in 0..=max_extra_degree {
        let shift = q_inv.checked_pow((h + 1) as i64)?;
        let dilated = a1.q_dilate(&shift);
        let g = a0.gcd(&dilated);
        if g.is_constant() {
            continue;
        }
        // Drop any factor of z (the origin is handled separately).
        let g = match g.valuation() {
            Some(v) if v > 0 => {
                let (quot, _) = g
                    .divmod(&Polynomial::monomial(ExactComplexRational::one(), v))
                    .expect("z^v divides g");
                quot
            }
            _ => g,
        };
        if g.is_constant() {
            continue;
        }
        let mut qj = ExactComplexRational::one();
        for j in 0..=h {
            if j > 0 {
                qj = &qj * &q;
            }
            den = &den * &g.q_dilate(&qj);
        }
    }

    // Power of z in the denominator: beyond the valuation bound, a pole of
    // order e at the origin needs the exact resonance q^{-e} = -t0/t1
    // between the trailing coefficients.
    let v0 = a0.valuation().unwrap_or(0);
    let v1 = a1.valuation().unwrap_or(0);
    let mut e_origin = v0.max(v1);
    if let (Some(t1), Some(t0)) = (a1.trailing_coeff(), a0.trailing_coeff()) {
        let ratio = -&(t0 / t1);
        if let Some(s) = exact_integer_power(&ratio, &q) {
            if s < 0 {
                e_origin = e_origin.max((-s) as usize);
            }
        }
    }
    if e_origin > 0 {
        den = den.mul_xk(e_origin);
    }

    // --- Cleared-form coefficients ---------------------------------------
    // With u = p/den:  a1*(z) p(qz) + a0*(z) p(z) + c*(z) = 0 where
    // a1* = A1·den, a0* = A0·den(qz), c* = C·den·den(qz).
    let den_q = den.q_dilate(&q);
    let a1s = a1 * &den;
    let a0s = a0 * &den_q;
    let cs = &(c * &den) * &den_q;

    let d1 = a1s.degree().expect("A1 nonzero");
    let d0 = a0s.degree().expect("A0 nonzero");
    let m = d1.max(d0);

    // Numerator degree bound.
    let mut candidates: Vec<i64> = Vec::new();
    if !homogeneous {
        let dc = cs.degree().expect("nonzero inhomogeneity") as i64;
        candidates.push(dc - m as i64);
    }
    if d1 == d0 {
        let lc1 = a1s.leading_coeff().expect("nonzero");
        let lc0 = a0s.leading_coeff().expect("nonzero");
        let ratio = -&(lc0 / lc1);
        if let Some(b) = exact_integer_power(&ratio, &q) {
            if b >= 0 {
                candidates.push(b);
            }
        }
    } else if homogeneous {
        // Unequal degrees leave the top coefficient uncancellable: no
        // nonzero solution over this denominator.
        return Ok(empty(None));
    }
    candidates.push(den.degree().unwrap_or(0) as i64);
    let bound = candidates.iter().copied().max().unwrap_or(0);
    if bound < 0 {
        return Ok(empty(None));
    }
    let bound = bound as usize + 2;

    // --- Exact linear system over the numerator coefficients -------------
    let ncols = bound + 1;
    let nrows = m + bound + 1;
    let mut rows = vec![vec![ExactComplexRational::zero(); ncols]; nrows];
    let mut rhs = vec![ExactComplexRational::zero(); nrows];
    // Column j (coefficient p_j) contributes a1s·q^j z^j + a0s·z^j.
    let mut qj = ExactComplexRational::one();
    for j in 0..ncols {
        if j > 0 {
            qj = &qj * &q;
        }
        let col_poly = &a1s.mul_scalar(&qj) + &a0s;
        for (k, coeff) in col_poly.coeffs().iter().enumerate() {
            rows[k + j][j] = &rows[k + j][j] + coeff;
        }
    }
    for (k, coeff) in cs.coeffs().iter().enumerate() {
        rhs[k] = -coeff;
    }

    let Some(solution) = solve_exact(&rows, &rhs, ncols) else {
        return Ok(empty(None));
    };

    let to_rational = |coeffs: &[ExactComplexRational]| -> Result<RationalFunction, Error> {
        RationalFunction::new(Polynomial::new(coeffs.to_vec()), den.clone())
    };

    // Basis vectors solve the homogeneous part.
    let eq_h = LinearFirstOrderEq {
        q: eq.q.clone(),
        a1: eq.a1.clone(),
        a0: eq.a0.clone(),
        c: Polynomial::zero(),
    };
    let mut basis = Vec::new();
    for v in &solution.kernel {
        let u = to_rational(v)?;
        if u.is_zero() {
            continue;
        }
        // Canonical scale: monic numerator.
        let lc = u.num().leading_coeff().expect("nonzero").clone();
        let u = u.mul_scalar(&lc.checked_inv()?);
        if eq_h.residual(&u)?.is_zero() {
            basis.push(u);
        }
    }

    let particular = if homogeneous {
        None
    } else {
        let u = to_rational(&solution.particular)?;
        if eq.residual(&u)?.is_zero() {
            Some(u)
        } else {
            None
        }
    };

    Ok(RationalSolutions {
        particular,
        basis,
        completeness_note: note,
    })
}

/// The integer `s` with `q^s = w` exactly, if one exists. The modulus of
/// `q` pins the unique candidate, which is then confirmed by exact
/// arithmetic.
fn exact_integer_power(w: &ExactComplexRational, q: &ExactComplexRational) -> Option<i64> {
    if w.is_zero() {
        return None;
    }
    let wn = w.to_complex64().norm();
    let qn = q.to_complex64().norm();
    if qn == 1.0 || !(wn.ln() / qn.ln()).is_finite() {
        return None;
    }
    let guess = (wn.ln() / qn.ln()).round();
    if guess.abs() > 512.0 {
        return None;
    }
    let base = guess as i64;
    for s in [base, base - 1, base + 1] {
        if let Ok(p) = q.checked_pow(s) {
            if &p == w {
                return Some(s);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DEFAULT_ROOT_TOL;

    fn qb(p: i64, d: i64) -> QBase {
        QBase::from_exact(ExactComplexRational::from_ratio(p, d)).unwrap()
    }

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(
            Polynomial::from_i64_coeffs(num),
            Polynomial::from_i64_coeffs(den),
        )
        .unwrap()
    }

    #[test]
    fn factor_coefficient_linear_over_linear() {
        // (1 + 3z/2)/(1 - 2z): c = 1, alpha = -2/3, beta = 1/2.
        let a = RationalFunction::new(
            Polynomial::new(vec![
                ExactComplexRational::from_i64(1),
                ExactComplexRational::from_ratio(3, 2),
            ]),
            Polynomial::from_i64_coeffs(&[1, -2]),
        )
        .unwrap();
        let (c, alphas, betas) = factor_coefficient(&a, DEFAULT_ROOT_TOL).unwrap();
        assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(alphas.len(), 1);
        assert!((alphas[0] - Complex64::new(-2.0 / 3.0, 0.0)).norm() < 1e-8);
        assert_eq!(betas.len(), 1);
        assert!((betas[0] - Complex64::new(0.5, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn factor_coefficient_polynomial_case() {
        // 1 - z: c = 1, alphas = {1}, betas = {}.
        let a = rf(&[1, -1], &[1]);
        let (c, alphas, betas) = factor_coefficient(&a, DEFAULT_ROOT_TOL).unwrap();
        assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(alphas.len(), 1);
        assert!((alphas[0] - Complex64::new(1.0, 0.0)).norm() < 1e-8);
        assert!(betas.is_empty());
    }

    #[test]
    fn factor_coefficient_rejections() {
        assert!(matches!(
            factor_coefficient(&rf(&[3], &[1]), DEFAULT_ROOT_TOL),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            factor_coefficient(&rf(&[0, 1], &[1]), DEFAULT_ROOT_TOL),
            Err(Error::DomainError(_))
        ));
        assert!(matches!(
            factor_coefficient(&rf(&[1], &[0, 1]), DEFAULT_ROOT_TOL),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn constant_case_examples() {
        let q = qb(1, 2);
        let r = solve_constant_case(Complex64::new(0.25, 0.0), &q, 1e-8).unwrap();
        assert!(r.solvable_in_rationals);
        assert_eq!(r.exponent, Some(2));
        assert_eq!(r.witness.unwrap(), rf(&[0, 0, 1], &[1]));

        let r3 = solve_constant_case(Complex64::new(3.0, 0.0), &q, 1e-8).unwrap();
        assert!(!r3.solvable_in_rationals);
        assert!(r3.exponent.is_none());
        assert!((r3.log_ratio.re + 1.5849625007211562).abs() < 1e-12);

        let r1 = solve_constant_case(Complex64::new(1.0, 0.0), &q, 1e-8).unwrap();
        assert_eq!(r1.exponent, Some(0));
        assert_eq!(r1.witness.unwrap(), RationalFunction::one());

        assert!(solve_constant_case(Complex64::new(0.0, 0.0), &q, 1e-8).is_err());
    }

    #[test]
    fn constant_case_negative_base_off_principal_branch() {
        // q = -1/2: 1/4 = q^2, but the principal Log(1/4)/Log(-1/2) is not
        // an integer; the modulus route must still find m = 2.
        let q = qb(-1, 2);
        let r = solve_constant_case(Complex64::new(0.25, 0.0), &q, 1e-8).unwrap();
        assert!(r.solvable_in_rationals);
        assert_eq!(r.exponent, Some(2));
        assert!((r.log_ratio.im).abs() > 1e-3, "principal branch is complex here");
        // And a negative exponent: 4 = q^{-2}.
        let rneg = solve_constant_case(Complex64::new(4.0, 0.0), &q, 1e-8).unwrap();
        assert_eq!(rneg.exponent, Some(-2));
        assert_eq!(rneg.witness.unwrap(), rf(&[1], &[0, 0, 1]));
    }

    #[test]
    fn solve_homogeneous_and_eval_simple_gamma() {
        // h(qz) = (1-z) h(z) at q = 1/2 is solved by gamma_q.
        let q = qb(1, 2);
        let eq = LinearHomogeneousEq::new(q.clone(), rf(&[1, -1], &[1])).unwrap();
        let cf = solve_homogeneous(&eq, DEFAULT_ROOT_TOL).unwrap();
        assert!(cf.logq_c_is_integer);
        assert_eq!(cf.n0, 0);
        assert!(cf.is_meromorphic());
        let req = EvalRequest::default();
        // Functional equation at random-ish sample points.
        for &zr in &[0.3, -0.8, 0.11, 1.47, -2.2] {
            let z = Complex64::new(zr, 0.07);
            let h_z = eval_closed_form(&cf, z, &req).unwrap().finite().unwrap();
            let h_qz = eval_closed_form(&cf, z * q.numeric(), &req)
                .unwrap()
                .finite()
                .unwrap();
            let rhs = (Complex64::new(1.0, 0.0) - z) * h_z;
            assert!(
                (h_qz - rhs).norm() <= 1e-10 * h_z.norm().max(1.0),
                "functional equation residual too large at z = {z}"
            );
        }
        // Pole of gamma_q at z = 2.
        assert!(eval_closed_form(&cf, Complex64::new(2.0, 0.0), &req)
            .unwrap()
            .is_pole());
        // Value at 0 is (q;q)_inf / ... with n0 = 0 -> gamma_q(0) choice:
        // here h(0) = gamma_q(0) = (q;q)_inf.
        let at0 = eval_closed_form(&cf, Complex64::new(0.0, 0.0), &req)
            .unwrap()
            .finite()
            .unwrap();
        assert!((at0.re - 0.288788095086602421278899721929).abs() < 1e-12);
    }

    #[test]
    fn squared_factor_multiplicity() {
        // h(qz) = (1-z)^2 h(z) -> h = gamma_q(z)^2 (alpha = 1 twice).
        let q = qb(1, 2);
        let eq = LinearHomogeneousEq::new(q.clone(), rf(&[1, -2, 1], &[1])).unwrap();
        let cf = solve_homogeneous(&eq, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(cf.alphas.len(), 2);
        let req = EvalRequest::default();
        let z = Complex64::new(0.27, -0.1);
        let h_z = eval_closed_form(&cf, z, &req).unwrap().finite().unwrap();
        let h_qz = eval_closed_form(&cf, z * q.numeric(), &req)
            .unwrap()
            .finite()
            .unwrap();
        let factor = (Complex64::new(1.0, 0.0) - z) * (Complex64::new(1.0, 0.0) - z);
        assert!((h_qz - factor * h_z).norm() <= 1e-10 * h_z.norm());
    }

    #[test]
    fn find_rational_constructed_basis() {
        // u(qz) - q u(z) = 0 has basis {z}.
        let q = qb(1, 2);
        let eq = LinearFirstOrderEq::new(
            q,
            Polynomial::one(),
            Polynomial::constant(ExactComplexRational::from_ratio(-1, 2)),
            Polynomial::zero(),
        )
        .unwrap();
        let sols = find_rational_solutions(&eq, 8).unwrap();
        assert!(sols.particular.is_none());
        assert_eq!(sols.basis.len(), 1);
        assert_eq!(sols.basis[0], rf(&[0, 1], &[1]));
    }

    #[test]
    fn find_rational_pole_basis() {
        // (qz-1) u(qz) + (1-z) u(z) = 0 has basis {1/(z-1)}.
        let q = qb(1, 2);
        let eq = LinearFirstOrderEq::new(
            q,
            Polynomial::new(vec![
                ExactComplexRational::from_i64(-1),
                ExactComplexRational::from_ratio(1, 2),
            ]),
            Polynomial::from_i64_coeffs(&[1, -1]),
            Polynomial::zero(),
        )
        .unwrap();
        let sols = find_rational_solutions(&eq, 8).unwrap();
        assert_eq!(sols.basis.len(), 1);
        assert_eq!(sols.basis[0], rf(&[1], &[-1, 1]));
    }

    #[test]
    fn find_rational_inhomogeneous_with_kernel() {
        // u(qz) - u(z) + (q-1)z = 0 at q = 1/2: particular -z, basis {1}.
        let q = qb(1, 2);
        let eq = LinearFirstOrderEq::new(
            q,
            Polynomial::one(),
            Polynomial::from_i64_coeffs(&[-1]),
            Polynomial::new(vec![
                ExactComplexRational::zero(),
                ExactComplexRational::from_ratio(-1, 2),
            ]),
        )
        .unwrap();
        let sols = find_rational_solutions(&eq, 8).unwrap();
        assert_eq!(sols.basis.len(), 1);
        assert_eq!(sols.basis[0], RationalFunction::one());
        let p = sols.particular.unwrap();
        // p must equal -z plus a constant.
        let shifted = &p + &rf(&[0, 1], &[1]);
        assert!(shifted.is_constant(), "particular {p} should be -z + const");
    }

    #[test]
    fn find_rational_empty_cases() {
        // (z^2+4z-2) u(z/2) + 2(z+1)^2 u(z) = 0: no nonzero rational
        // solution (leading-coefficient resonance fails exactly).
        let q = qb(1, 2);
        let a1 = Polynomial::from_i64_coeffs(&[-2, 4, 1]);
        let a0 = Polynomial::from_i64_coeffs(&[2, 4, 2]);
        let eq = LinearFirstOrderEq::new(q.clone(), a1.clone(), a0.clone(), Polynomial::zero())
            .unwrap();
        let sols = find_rational_solutions(&eq, 8).unwrap();
        assert!(sols.basis.is_empty());
        assert!(sols.completeness_note.contains("chain depth <= 8"));

        // Same left side with inhomogeneity z: still empty.
        let eq_inhom = LinearFirstOrderEq::new(
            q.clone(),
            a1,
            a0,
            Polynomial::from_i64_coeffs(&[0, 1]),
        )
        .unwrap();
        let sols2 = find_rational_solutions(&eq_inhom, 8).unwrap();
        assert!(sols2.particular.is_none() && sols2.basis.is_empty());

        // (z^3-3z^2-8z-4) u(z/2) + (z^3+3z^2+4z+4) u(z) = 0: empty.
        let eq3 = LinearFirstOrderEq::new(
            q,
            Polynomial::from_i64_coeffs(&[-4, -8, -3, 1]),
            Polynomial::from_i64_coeffs(&[4, 4, 3, 1]),
            Polynomial::zero(),
        )
        .unwrap();
        assert!(find_rational_solutions(&eq3, 8).unwrap().basis.is_empty());
    }

    #[test]
    fn find_rational_requires_exact_base() {
        let q = QBase::from_f64(0.5).unwrap();
        let eq = LinearFirstOrderEq::new(
            q,
            Polynomial::one(),
            Polynomial::one(),
            Polynomial::zero(),
        )
        .unwrap();
        assert_eq!(
            find_rational_solutions(&eq, 4).unwrap_err(),
            Error::ExactBaseRequired
        );
    }

    #[test]
    fn residual_detects_non_solutions() {
        let q = qb(1, 2);
        let eq = LinearFirstOrderEq::new(
            q,
            Polynomial::one(),
            Polynomial::from_i64_coeffs(&[-1]),
            Polynomial::zero(),
        )
        .unwrap();
        assert!(eq.residual(&RationalFunction::one()).unwrap().is_zero());
        assert!(!eq.residual(&rf(&[0, 1], &[1])).unwrap().is_zero());
    }
}
