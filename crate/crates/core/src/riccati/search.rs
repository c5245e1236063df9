//! Two-stage search for rational solutions of a Riccati equation.
//!
//! Stage one fits a rational candidate `f = P/Q` (denominator monic, so
//! the parameterization is a bijection on shapes) to the cleared residual
//!
//! ```text
//! R(z) = (q-1)z·P(qz)P(z) - P(qz)Q(z) + P(z)Q(qz) + A(z)·Q(qz)Q(z)
//! ```
//!
//! on random off-orbit sample points, by Levenberg–Marquardt over the real
//! and imaginary parts of the coefficients. Shapes `(deg P, deg Q)` are
//! swept in ascending total degree with a seeded generator, so runs are
//! reproducible. A converged fit is only a *candidate*: its coefficients
//! are snapped to rationals through a continued-fraction ladder and the
//! result is accepted only when the exact residual vanishes identically.
//!
//! Stage two substitutes `u = 1/(f - f0)` at the verified seed `f0`,
//! which lowers the problem to a first-order *linear* equation with
//! polynomial coefficients, and enumerates its rational solutions by the
//! orbit-chain denominator construction. Every `u` maps back to
//! `f = f0 + 1/u`; a nonzero homogeneous basis together with a particular
//! solution certifies an infinite family. Each reported solution is
//! re-verified exactly before it is returned.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{rationalize_complex, Polynomial, RationalFunction};
use crate::error::Error;
use crate::linear::{find_rational_solutions, LinearFirstOrderEq};
use crate::value::EvalValue;

use super::RiccatiEquation;

/// Tuning knobs for the numeric seed stage. All randomness flows from
/// `seed`, so equal configurations reproduce equal results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest numerator and denominator degree tried in stage one.
    pub max_degree: usize,
    /// Seed for the deterministic sample/restart generator.
    pub seed: u64,
    /// Random restarts per shape.
    pub restarts: usize,
    /// Levenberg–Marquardt iterations per restart.
    pub iterations: usize,
    /// Extra degree margin handed to the linear stage-two enumeration.
    pub linear_extra_degree: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_degree: 4,
            seed: 0x51ca7,
            restarts: 10,
            iterations: 140,
            linear_extra_degree: 8,
        }
    }
}

impl SearchConfig {
    pub fn with_max_degree(max_degree: usize) -> Self {
        SearchConfig {
            max_degree,
            ..SearchConfig::default()
        }
    }
}

/// Result of the two-stage search.
#[derive(Debug, Clone)]
pub struct RationalSolutionSearch {
    /// Exactly verified rational solutions, seed first. When
    /// `infinite_family` is set these are representatives, not the whole
    /// solution set.
    pub solutions: Vec<RationalFunction>,
    /// Set when the reduced linear equation has both a particular rational
    /// solution and a nonzero homogeneous basis: the map `f = f0 + 1/u`
    /// then produces a solution for every member of an affine family.
    pub infinite_family: bool,
    /// The linear equation obtained from the seed, when a seed was found.
    pub reduction: Option<LinearFirstOrderEq>,
    /// Particular rational solution of the reduction.
    pub reduction_particular: Option<RationalFunction>,
    /// Rational basis of the homogeneous part of the reduction.
    pub reduction_basis: Vec<RationalFunction>,
    /// Human-readable completeness statement.
    pub notes: String,
}

/// Runs both stages. Requires an exact base (verification is exact
/// throughout). An empty `solutions` list means the numeric stage found no
/// seed, not a proof of nonexistence; the note says so.
pub fn rational_solution_search(
    eq: &RiccatiEquation,
    config: &SearchConfig,
) -> Result<RationalSolutionSearch, Error> {
    eq.q().require_exact()?;
    let Some(f0) = stage_one(eq, config)? else {
        return Ok(RationalSolutionSearch {
            solutions: Vec::new(),
            infinite_family: false,
            reduction: None,
            reduction_particular: None,
            reduction_basis: Vec::new(),
            notes: "numeric seed stage found no rational solution up to the \
                    configured degree; this is a failed search, not a proof \
                    of nonexistence"
                .into(),
        });
    };
    let lin = eq.reduce_to_linear(&f0)?;
    let rs = find_rational_solutions(&lin, config.linear_extra_degree)?;
    let mut solutions = vec![f0.clone()];
    let mut candidates: Vec<RationalFunction> = Vec::new();
    if let Some(up) = &rs.particular {
        candidates.push(up.clone());
        for b in &rs.basis {
            candidates.push(up + b);
            candidates.push(up - b);
        }
    }
    for u in candidates {
        if u.is_zero() {
            continue;
        }
        let f = &f0 + &u.checked_inv()?;
        if eq.verify_solution_exact(&f)?.is_zero() {
            if !solutions.contains(&f) {
                solutions.push(f);
            }
        } else {
            debug_assert!(false, "mapped stage-two candidate failed verification");
        }
    }
    let infinite_family = rs.particular.is_some() && !rs.basis.is_empty();
    let notes = format!(
        "solutions besides the seed correspond to rational solutions u of \
         the reduction via f = f0 + 1/u; {}",
        rs.completeness_note
    );
    Ok(RationalSolutionSearch {
        solutions,
        infinite_family,
        reduction: Some(lin),
        reduction_particular: rs.particular,
        reduction_basis: rs.basis,
        notes,
    })
}

/// Numeric seed stage: returns the first exactly verified rational
/// solution, sweeping shapes in ascending total degree.
fn stage_one(
    eq: &RiccatiEquation,
    config: &SearchConfig,
) -> Result<Option<RationalFunction>, Error> {
    // The zero function is checked directly: it solves iff A ≡ 0.
    if eq.verify_solution_exact(&RationalFunction::zero())?.is_zero() {
        return Ok(Some(RationalFunction::zero()));
    }
    for total in 0..=(2 * config.max_degree) {
        for dn in 0..=total {
            let dd = total - dn;
            if dn > config.max_degree || dd > config.max_degree {
                continue;
            }
            if let Some(f) = fit_shape(eq, dn, dd, config)? {
                return Ok(Some(f));
            }
        }
    }
    Ok(None)
}

/// Attempts one `(deg P, deg Q)` shape with several random restarts.
fn fit_shape(
    eq: &RiccatiEquation,
    dn: usize,
    dd: usize,
    config: &SearchConfig,
) -> Result<Option<RationalFunction>, Error> {
    let stream = config
        .seed
        .wrapping_add(((dn * 64 + dd) as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut rng = ChaCha8Rng::seed_from_u64(stream);
    let nparams = 2 * (dn + 1 + dd);
    let qn = eq.q().numeric();
    let a = eq.coefficient().compiled();
    // Sample points where A is comfortably finite; each contributes two
    // real residuals.
    let nsamples = nparams + nparams / 2 + 6;
    let mut samples: Vec<(Complex64, Complex64, f64)> = Vec::new();
    let mut guard = 0;
    while samples.len() < nsamples && guard < 10_000 {
        guard += 1;
        let r = 0.5 + 1.1 * rng.gen::<f64>();
        let theta = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
        let z = Complex64::from_polar(r, theta);
        let (EvalValue::Finite(az), EvalValue::Finite(aqz)) =
            (a.eval(z), a.eval(qn * z))
        else {
            continue;
        };
        if az.norm() > 1e8 || aqz.norm() > 1e8 {
            continue;
        }
        let weight = 1.0 / (1.0 + az.norm() + r.powi((dn + dd + 1) as i32));
        samples.push((z, az, weight));
    }
    if samples.len() < nsamples {
        return Ok(None);
    }
    for _ in 0..config.restarts {
        let mut p: Vec<f64> = (0..nparams).map(|_| rng.gen_range(-2.5..2.5)).collect();
        let mut cost = cost_of(&p, dn, dd, qn, &samples);
        let mut lambda = 1e-3;
        for _ in 0..config.iterations {
            let Some((delta, _)) = lm_step(&p, dn, dd, qn, &samples, lambda) else {
                break;
            };
            let trial: Vec<f64> = p.iter().zip(&delta).map(|(a, d)| a + d).collect();
            let trial_cost = cost_of(&trial, dn, dd, qn, &samples);
            if trial_cost < cost {
                p = trial;
                cost = trial_cost;
                lambda = (lambda * 0.35).max(1e-14);
                if cost < 1e-26 {
                    break;
                }
            } else {
                lambda *= 7.0;
                if lambda > 1e10 {
                    break;
                }
            }
        }
        if cost < 1e-14 {
            if let Some(f) = snap_and_verify(eq, &p, dn, dd)? {
                return Ok(Some(f));
            }
        }
    }
    Ok(None)
}

fn unpack(p: &[f64], dn: usize, dd: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let num: Vec<Complex64> = (0..=dn)
        .map(|j| Complex64::new(p[2 * j], p[2 * j + 1]))
        .collect();
    let mut den: Vec<Complex64> = (0..dd)
        .map(|j| {
            let base = 2 * (dn + 1 + j);
            Complex64::new(p[base], p[base + 1])
        })
        .collect();
    den.push(Complex64::new(1.0, 0.0));
    (num, den)
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn residuals(
    p: &[f64],
    dn: usize,
    dd: usize,
    qn: Complex64,
    samples: &[(Complex64, Complex64, f64)],
) -> Vec<f64> {
    let (num, den) = unpack(p, dn, dd);
    let mut out = Vec::with_capacity(2 * samples.len());
    for &(z, az, w) in samples {
        let pz = horner(&num, z);
        let pqz = horner(&num, qn * z);
        let qz = horner(&den, z);
        let qqz = horner(&den, qn * z);
        let r = (qn - 1.0) * z * pqz * pz - pqz * qz + pz * qqz + az * qqz * qz;
        out.push(w * r.re);
        out.push(w * r.im);
    }
    out
}

fn cost_of(
    p: &[f64],
    dn: usize,
    dd: usize,
    qn: Complex64,
    samples: &[(Complex64, Complex64, f64)],
) -> f64 {
    residuals(p, dn, dd, qn, samples)
        .iter()
        .map(|r| r * r)
        .sum()
}

/// One Levenberg–Marquardt step with a forward-difference Jacobian;
/// returns the proposed parameter update and the current residual norm.
fn lm_step(
    p: &[f64],
    dn: usize,
    dd: usize,
    qn: Complex64,
    samples: &[(Complex64, Complex64, f64)],
    lambda: f64,
) -> Option<(Vec<f64>, f64)> {
    let n = p.len();
    let r0 = residuals(p, dn, dd, qn, samples);
    let m = r0.len();
    let mut jac = vec![vec![0.0f64; n]; m];
    for t in 0..n {
        let h = 1e-7 * (1.0 + p[t].abs());
        let mut pt = p.to_vec();
        pt[t] += h;
        let rt = residuals(&pt, dn, dd, qn, samples);
        for s in 0..m {
            jac[s][t] = (rt[s] - r0[s]) / h;
        }
    }
    // Normal equations (JᵗJ + λ·diag(JᵗJ) + εI)·δ = -Jᵗr.
    let mut ata = vec![vec![0.0f64; n]; n];
    let mut atb = vec![0.0f64; n];
    for s in 0..m {
        for i in 0..n {
            let jsi = jac[s][i];
            atb[i] -= jsi * r0[s];
            for j in i..n {
                ata[i][j] += jsi * jac[s][j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            ata[i][j] = ata[j][i];
        }
    }
    for (i, row) in ata.iter_mut().enumerate() {
        row[i] += lambda * row[i] + 1e-12;
    }
    let delta = solve_dense(ata, atb)?;
    let norm = r0.iter().map(|r| r * r).sum::<f64>().sqrt();
    Some((delta, norm))
}

/// Dense Gaussian elimination with partial pivoting on a small system.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let mut piv = col;
        for row in (col + 1)..n {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0f64; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in (col + 1)..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Some(x)
}

/// Continued-fraction snapping ladder: tries increasingly permissive
/// denominator caps and accepts the first exactly verified candidate.
fn snap_and_verify(
    eq: &RiccatiEquation,
    p: &[f64],
    dn: usize,
    dd: usize,
) -> Result<Option<RationalFunction>, Error> {
    let (num, den) = unpack(p, dn, dd);
    for cap in [1u64, 8, 64, 1024, 32_768, 1_000_000] {
        let mut ok = true;
        let mut num_exact = Vec::with_capacity(num.len());
        for c in &num {
            match rationalize_complex(*c, cap) {
                Some(e) => num_exact.push(e),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let mut den_exact = Vec::with_capacity(den.len());
        for c in &den {
            match rationalize_complex(*c, cap) {
                Some(e) => den_exact.push(e),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let num_poly = Polynomial::new(num_exact);
        let den_poly = Polynomial::new(den_exact);
        if den_poly.is_zero() {
            continue;
        }
        let Ok(candidate) = RationalFunction::new(num_poly, den_poly) else {
            continue;
        };
        if eq.verify_solution_exact(&candidate)?.is_zero() {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}
