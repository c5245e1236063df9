//! One function per subcommand.
//!
//! Each function parses its expression arguments, runs the corresponding
//! library routine, and writes one result structure to the output stream.
//! Errors are classified on the way out: malformed expressions are parse
//! errors, unusable flag values are usage errors, and everything the
//! library rejects (|q| = 1, degenerate coefficients, seeds that fail
//! verification, ...) is a mathematical domain error.

use std::io::Write;

use num_complex::Complex64;

use qriccati::algebra::{
    rationalize_complex, ExactComplexRational, Polynomial, RationalFunction, DEFAULT_ROOT_TOL,
};
use qriccati::linear::{
    eval_closed_form, find_rational_solutions, solve_homogeneous, ClosedFormSolution,
    LinearFirstOrderEq, LinearHomogeneousEq,
};
use qriccati::qspecial::{gamma_q_z, EvalRequest, QBase};
use qriccati::riccati::{
    family_member, rational_solution_search, FamilyParameter, RiccatiEquation, SearchConfig,
    SolutionEvaluator,
};
use qriccati::valuedist::{closed_form_pole_zero_census, growth_curve, GrowthModelKind};
use qriccati::EvalValue;

use crate::config::Settings;
use crate::error::CliError;
use crate::expr::{self, ExprError};
use crate::output::{
    write_result, CensusFitsOut, CensusOut, ClosedFormEvalOut, ExactOrFloat, FamilyOut,
    FitOut, GammaOut, LinearSolutionsOut, LinearizeOut, OrbitOut, OrbitRow, ReduceOut,
    SearchOut, SecondOrderOut, VerifyOut,
};

/// Denominator cap when snapping numeric roots back to exact rationals.
const SNAP_DENOMINATOR_CAP: u64 = 1_000_000;

fn classify(flag: &str, err: ExprError) -> CliError {
    match err {
        ExprError::Syntax(error) => CliError::Parse {
            flag: flag.to_owned(),
            error,
        },
        ExprError::NotConstant => {
            CliError::Usage(format!("{flag} must be a constant expression (no z)"))
        }
        ExprError::Domain(msg) => CliError::Math(format!("in {flag}: {msg}")),
    }
}

fn rational_arg(flag: &str, text: &str) -> Result<RationalFunction, CliError> {
    expr::parse_rational(text).map_err(|err| classify(flag, err))
}

fn polynomial_arg(flag: &str, text: &str) -> Result<Polynomial, CliError> {
    let value = rational_arg(flag, text)?;
    match value.as_polynomial() {
        Some(p) => Ok(p.clone()),
        None => Err(CliError::Usage(format!(
            "{flag} must be a polynomial, but {value} has a nonconstant denominator"
        ))),
    }
}

fn scalar_arg(flag: &str, text: &str) -> Result<ExactComplexRational, CliError> {
    expr::parse_scalar(text).map_err(|err| classify(flag, err))
}

fn complex_arg(flag: &str, text: &str) -> Result<Complex64, CliError> {
    Ok(scalar_arg(flag, text)?.to_complex64())
}

fn base_arg(text: &str) -> Result<QBase, CliError> {
    let q = scalar_arg("--q", text)?;
    Ok(QBase::from_exact(q)?)
}

fn request(settings: &Settings) -> Result<EvalRequest, CliError> {
    EvalRequest::new(settings.eps, settings.pole_guard)
        .map_err(|err| CliError::Usage(err.to_string()))
}

fn positive_depth(settings: &Settings) -> Result<usize, CliError> {
    if settings.depth == 0 {
        return Err(CliError::Usage("depth must be at least 1".to_owned()));
    }
    Ok(settings.depth)
}

/// Exact verification of a candidate solution: prints the cleared residual
/// and whether it vanishes identically.
pub fn verify_riccati<W: Write>(
    out: &mut W,
    settings: &Settings,
    q: &str,
    a: &str,
    f: &str,
) -> Result<(), CliError> {
    let eq = RiccatiEquation::new(base_arg(q)?, rational_arg("--A", a)?);
    let f = rational_arg("--f", f)?;
    let residual = eq.verify_solution_exact(&f)?;
    let result = VerifyOut {
        is_solution: residual.is_zero(),
        residual: residual.to_string(),
    };
    write_result(out, settings, &result)
}

fn reduce_out(lin: &LinearFirstOrderEq) -> ReduceOut {
    ReduceOut {
        a1: lin.a1.to_string(),
        a0: lin.a0.to_string(),
        c: lin.c.to_string(),
    }
}

/// Reduction at a known solution: prints the linear equation satisfied by
/// `u = 1/(f - f0)`.
pub fn reduce<W: Write>(
    out: &mut W,
    settings: &Settings,
    q: &str,
    a: &str,
    f0: &str,
) -> Result<(), CliError> {
    let eq = RiccatiEquation::new(base_arg(q)?, rational_arg("--A", a)?);
    let f0 = rational_arg("--f0", f0)?;
    let lin = eq.reduce_to_linear(&f0)?;
    write_result(out, settings, &reduce_out(&lin))
}

/// Rational solutions of `A1(z)·u(qz) + A0(z)·u(z) + C(z) = 0`.
pub fn find_rational_linear<W: Write>(
    out: &mut W,
    settings: &Settings,
    q: &str,
    a1: &str,
    a0: &str,
    c: &str,
    bound: Option<usize>,
) -> Result<(), CliError> {
    let eq = LinearFirstOrderEq::new(
        base_arg(q)?,
        polynomial_arg("--a1", a1)?,
        polynomial_arg("--a0", a0)?,
        polynomial_arg("--c", c)?,
    )?;
    let margin = bound.unwrap_or(settings.degree_bound);
    let solutions = find_rational_solutions(&eq, margin)?;
    let result = LinearSolutionsOut {
        particular: solutions.particular.as_ref().map(|u| u.to_string()),
        basis: solutions.basis.iter().map(|b| b.to_string()).collect(),
        completeness_note: solutions.completeness_note,
    };
    write_result(out, settings, &result)
}

/// Two-stage search for rational solutions of the Riccati equation.
pub fn search_riccati<W: Write>(
    out: &mut W,
    settings: &Settings,
    q: &str,
    a: &str,
    bound: Option<usize>,
) -> Result<(), CliError> {
    let eq = RiccatiEquation::new(base_arg(q)?, rational_arg("--A", a)?);
    let config = SearchConfig::with_max_degree(bound.unwrap_or(settings.degree_bound));
    let outcome = rational_solution_search(&eq, &config)?;
    let result = SearchOut {
        solutions: outcome.solutions.iter().map(|f| f.to_string()).collect(),
        infinite_family: outcome.infinite_family,
        reduction: outcome.reduction.as_ref().map(reduce_out),
        reduction_particular: outcome
            .reduction_particular
            .as_ref()
            .map(|u| u.to_string()),
        reduction_basis: outcome
            .reduction_basis
            .iter()
            .map(|b| b.to_string())
            .collect(),
        notes: outcome.notes,
    };
    write_result(out, settings, &result)
}

/// One member of the solution family through three known solutions.
pub fn family<W: Write>(
    out: &mut W,
    settings: &Settings,
    q: &str,
    a: &str,
    f0: &str,
    f1: &str,
    f2: &str,
    phi: &str,
) -> Result<(), CliError> {
    let eq = RiccatiEquation::new(base_arg(q)?, rational_arg("--A", a)?);
    let f0 = SolutionEvaluator::rational(rational_arg("--f0", f0)?);
    let f1 = SolutionEvaluator::rational(rational_arg("--f1", f1)?);
    let f2 = SolutionEvaluator::rational(rational_arg("--f2", f2)?);
    let phi = FamilyParameter::constant(scalar_arg("--phi", phi)?);
    let member = family_member(&eq, &f0, &f1, &f2, &phi)?;
    let member = member.as_rational().ok_or_else(|| {
        CliError::Internal(
            "family member of rational seeds with constant parameter must be rational"
                .to_owned(),
        )
    })?;
    let residual = eq.verify_solution_exact(member)?;
    let result = FamilyOut {
        member: member.to_string(),
        is_solution: residual.is_zero(),
        residual: residual.to_string(),
    };
    write_result(out, settings, &result)
}

/// Snaps a numeric root to an exact rational and certifies it against the
/// polynomial; uncertified roots stay numeric.
fn snap_root(poly: &Polynomial, root: Complex64) -> (ExactOrFloat, Option<ExactComplexRational>) {
    if let Some(exact) = rationalize_complex(root, SNAP_DENOMINATOR_CAP) {
        if poly.eval_exact(&exact).is_zero() {
            return (ExactOrFloat::Exact(exact.to_string()), Some(exact));
        }
    }
    (ExactOrFloat::Numeric(root.into()), None)
}

/// One `gamma_q` factor of the closed-form descriptor, written with its
/// exact coefficient when the root was certified.
fn gamma_factor(exact: &Option<ExactComplexRational>, root: Complex64) -> String {
    match exact {
        Some(root) => {
            let inverse = root
                .checked_inv()
                .expect("a certified root of the numerator or denominator is nonzero");
            let argument = RationalFunction::from_polynomial(Polynomial::new(vec![
                ExactComplexRational::zero(),
                inverse,
            ]));
            format!("gamma_q({argument})")
        }
        None => format!("gamma_q(z/({}{:+}*i))", root.re, root.im),
    }
}

fn closed_form_descriptor(
    cf: &ClosedFormSolution,
    alpha_factors: &[String],
    beta_factors: &[String],
) -> String {
    let prefix = if cf.logq_c_is_integer {
        match cf.n0 {
            0 => String::new(),
            n => format!("z^{n}"),
        }
    } else {
        format!("z^({}{:+}*i)", cf.logq_c.re, cf.logq_c.im)
    };
    let mut numerator_parts: Vec<String> = Vec::new();
    if !prefix.is_empty() {
        numerator_parts.push(prefix);
    }
    numerator_parts.extend(alpha_factors.iter().cloned());
    let numerator = if numerator_parts.is_empty() {
        "1".to_owned()
    } else {
        numerator_parts.join("*")
    };
    match beta_factors.len() {
        0 => numerator,
        1 => format!("{numerator}/{}", beta_factors[0]),
        _ => format!("{numerator}/({})", beta_factors.join("*")),
    }
}

/// From two known solutions, the multiplicative linearization
/// `h(qz) = a(z)·h(z)` and the product form of its solution.
pub fn linearize<W: Write>(
    out: &mut W,
    settings: &Settings,
    q: &str,
    a: &str,
    f1: &str,
    f2: &str,
) -> Result<(), CliError> {
    let eq = RiccatiEquation::new(base_arg(q)?, rational_arg("--A", a)?);
    let f1 = rational_arg("--f1", f1)?;
    let f2 = rational_arg("--f2", f2)?;
    let lin = eq.moebius_linearize(&f1, &f2)?;
    let cf = solve_homogeneous(&lin.equation, DEFAULT_ROOT_TOL)?;

    let multiplier = &lin.multiplier;
    // factor_coefficient (inside solve_homogeneous) has already checked
    // that the origin value is finite and nonzero, so this division exists.
    let c_exact = &multiplier.num().coeff(0)
        * &multiplier
            .den()
            .coeff(0)
            .checked_inv()
            .expect("multiplier denominator is nonzero at the origin");

    let mut alphas = Vec::new();
    let mut alpha_factors = Vec::new();
    for &root in &cf.alphas {
        let (shown, exact) = snap_root(multiplier.num(), root);
        alpha_factors.push(gamma_factor(&exact, root));
        alphas.push(shown);
    }
    let mut betas = Vec::new();
    let mut beta_factors = Vec::new();
    for &root in &cf.betas {
        let (shown, exact) = snap_root(multiplier.den(), root);
        beta_factors.push(gamma_factor(&exact, root));
        betas.push(shown);
    }

    let result = LinearizeOut {
        a: multiplier.display_origin_normalized(),
        c: c_exact.to_string(),
        alphas,
        betas,
        n0: cf.logq_c_is_integer.then_some(cf.n0),
        logq_c: cf.logq_c.into(),
        meromorphic: cf.logq_c_is_integer,
        closed_form: closed_form_descriptor(&cf, &alpha_factors, &beta_factors),
    };
    write_result(out, settings, &result)
}

/// Numeric evaluation of `gamma_q` at a point.
pub fn eval_gamma_q<W: Write>(
    out: &mut W,
    settings: &Settings,
    q: &str,
    z: &str,
) -> Result<(), CliError> {
    let base = base_arg(q)?;
    let z = complex_arg("--z", z)?;
    let req = request(settings)?;
    let value = gamma_q_z(z, &base, &req)?;
    let result = GammaOut {
        z: z.into(),
        value: value.into(),
        eps: settings.eps,
    };
    write_result(out, settings, &result)
}

/// Numeric evaluation of the product closed form of `h(qz) = a(z)·h(z)`.
pub fn eval_closed_form_cmd<W: Write>(
    out: &mut W,
    settings: &Settings,
    q: &str,
    multiplier: &str,
    z: &str,
) -> Result<(), CliError> {
    let equation = LinearHomogeneousEq::new(base_arg(q)?, rational_arg("--a", multiplier)?)?;
    let z = complex_arg("--z", z)?;
    let req = request(settings)?;
    let cf = solve_homogeneous(&equation, DEFAULT_ROOT_TOL)?;
    let value = eval_closed_form(&cf, z, &req)?;
    let result = ClosedFormEvalOut {
        z: z.into(),
        value: value.into(),
        eps: settings.eps,
        meromorphic: cf.logq_c_is_integer,
        n0: cf.logq_c_is_integer.then_some(cf.n0),
    };
    write_result(out, settings, &result)
}

/// The equivalent second-order linear equation.
pub fn second_order<W: Write>(
    out: &mut W,
    settings: &Settings,
    q: &str,
    a: &str,
) -> Result<(), CliError> {
    let eq = RiccatiEquation::new(base_arg(q)?, rational_arg("--A", a)?);
    let so = eq.to_second_order()?;
    let result = SecondOrderOut {
        c2: so.c2.to_string(),
        c1: so.c1.to_string(),
        c0: so.c0.to_string(),
    };
    write_result(out, settings, &result)
}

/// Relative cleared residual of a candidate along the orbit `z0·q^k`.
pub fn orbit_verify<W: Write>(
    out: &mut W,
    settings: &Settings,
    q: &str,
    a: &str,
    f: &str,
    z0: &str,
) -> Result<(), CliError> {
    let base = base_arg(q)?;
    let a = rational_arg("--A", a)?;
    let f = rational_arg("--f", f)?;
    let z0 = complex_arg("--z0", z0)?;
    if z0 == Complex64::new(0.0, 0.0) || !z0.is_finite() {
        return Err(CliError::Usage(
            "--z0 must be finite and nonzero (the orbit of 0 is a fixed point)".to_owned(),
        ));
    }
    let depth = positive_depth(settings)?;
    let qn = base.numeric();
    let mut rows = Vec::with_capacity(depth);
    let mut max_residual: Option<f64> = None;
    let mut z = z0;
    for _ in 0..depth {
        let residual = match (f.eval(z), f.eval(qn * z), a.eval(z)) {
            (EvalValue::Finite(fz), EvalValue::Finite(fqz), EvalValue::Finite(az)) => {
                let t = (qn - 1.0) * z * fqz * fz;
                let r = t - fqz + fz + az;
                let scale = t.norm().max(fqz.norm()).max(fz.norm()).max(az.norm()).max(1.0);
                Some(r.norm() / scale)
            }
            _ => None,
        };
        if let Some(dev) = residual {
            max_residual = Some(max_residual.map_or(dev, |w: f64| w.max(dev)));
        }
        rows.push(OrbitRow {
            z: z.into(),
            residual,
        });
        z *= qn;
    }
    let result = OrbitOut {
        rows,
        max_residual,
        eps: settings.eps,
    };
    write_result(out, settings, &result)
}

/// Parses a radii specification `R1..R2xN` into `N` geometrically spaced
/// sample radii from `R1` to `R2` inclusive.
fn parse_radii(spec: &str) -> Result<Vec<f64>, CliError> {
    let usage = || {
        CliError::Usage(format!(
            "--radii must look like R1..R2xN (for example 1..1e6x61), got '{spec}'"
        ))
    };
    let (range, count) = spec.rsplit_once('x').ok_or_else(usage)?;
    let (lo, hi) = range.split_once("..").ok_or_else(usage)?;
    let lo: f64 = lo.trim().parse().map_err(|_| usage())?;
    let hi: f64 = hi.trim().parse().map_err(|_| usage())?;
    let count: usize = count.trim().parse().map_err(|_| usage())?;
    if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi <= lo {
        return Err(CliError::Usage(format!(
            "--radii needs 0 < R1 < R2, got R1 = {lo}, R2 = {hi}"
        )));
    }
    if !(2..=100_000).contains(&count) {
        return Err(CliError::Usage(format!(
            "--radii sample count must lie in 2..=100000, got {count}"
        )));
    }
    let ratio = hi / lo;
    Ok((0..count)
        .map(|j| lo * ratio.powf(j as f64 / (count - 1) as f64))
        .collect())
}

/// Pole/zero counting of the product closed form inside growing disks,
/// with growth fits against `log r` and `(log r)²`.
pub fn census<W: Write>(
    out: &mut W,
    settings: &Settings,
    q: &str,
    multiplier: &str,
    radii_spec: &str,
) -> Result<(), CliError> {
    let equation = LinearHomogeneousEq::new(base_arg(q)?, rational_arg("--a", multiplier)?)?;
    let radii = parse_radii(radii_spec)?;
    let cf = solve_homogeneous(&equation, DEFAULT_ROOT_TOL)?;
    let largest = radii.last().copied().expect("radii list is nonempty");
    let census = closed_form_pole_zero_census(&cf, largest, 1e-9)?;
    let fit = growth_curve(|r| census.pole_count_within(r), &radii)?;
    let zero_counts: Vec<usize> = radii.iter().map(|&r| census.zero_count_within(r)).collect();
    let to_fit_out = |m: &qriccati::valuedist::FitModel| FitOut {
        intercept: m.intercept,
        slope: m.slope,
        r_squared: m.r_squared,
    };
    let result = CensusOut {
        radii: fit.record.radii.clone(),
        pole_counts: fit.record.counts.clone(),
        zero_counts,
        integrated: fit.record.integrated.clone(),
        fit: CensusFitsOut {
            log_linear: to_fit_out(&fit.log_linear),
            log_squared: to_fit_out(&fit.log_squared),
            best: match fit.best {
                GrowthModelKind::LogLinear => "log_linear",
                GrowthModelKind::LogSquared => "log_squared",
            },
            integrated_log_squared: to_fit_out(&fit.integrated_log_squared),
        },
    };
    write_result(out, settings, &result)
}
