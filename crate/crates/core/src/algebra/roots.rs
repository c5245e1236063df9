//! Numeric root finding by Aberth–Ehrlich simultaneous iteration.
//!
//! All roots of a polynomial are approximated at once; nearby approximations
//! are then merged into clusters whose size is reported as a multiplicity.
//! Clustering only ever merges (never splits), so multiplicities are
//! conservative: a borderline pair collapses to one root of multiplicity 2
//! rather than fabricating two distinct roots.

use num_complex::Complex64;

use super::polynomial::{horner, Polynomial};
use crate::error::Error;

/// Default relative clustering tolerance.
pub const DEFAULT_ROOT_TOL: f64 = 1e-8;

/// One root (cluster centroid) together with its inferred multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Finds all complex roots of `p` with multiplicities; `tol` is the
/// relative clustering distance (see [`DEFAULT_ROOT_TOL`]).
///
/// Errors on the zero polynomial, and on failure to reach the backward-error
/// stopping criterion within the iteration cap (carrying the worst residual).
pub fn roots(p: &Polynomial, tol: f64) -> Result<Vec<RootCluster>, Error> {
    let deg = p.degree().ok_or_else(|| {
        Error::InvalidArgument("root finding requires a nonzero polynomial".to_string())
    })?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(
            "clustering tolerance must be positive".to_string(),
        ));
    }

    let mut clusters = Vec::new();

    // Exact deflation of the root at the origin.
    let val = p.valuation().unwrap_or(0);
    if val > 0 {
        clusters.push(RootCluster {
            value: Complex64::new(0.0, 0.0),
            multiplicity: val,
        });
    }
    let coeffs_full = p.to_complex_coeffs();
    let mut coeffs: Vec<Complex64> = coeffs_full[val..].to_vec();
    let n = deg - val;
    if n == 0 {
        clusters.sort_by(compare_clusters);
        return Ok(clusters);
    }

    // Scale so the largest coefficient has unit magnitude (same roots,
    // better-conditioned residuals).
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    for c in coeffs.iter_mut() {
        *c /= scale;
    }

    if n == 1 {
        clusters.push(RootCluster {
            value: -coeffs[0] / coeffs[1],
            multiplicity: 1,
        });
        clusters.sort_by(compare_clusters);
        return Ok(clusters);
    }

    let approx = aberth(&coeffs, n)?;
    let deriv: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect();
    let mut found = cluster(&approx, &coeffs, &deriv, tol);
    for c in found.iter_mut() {
        refine_cluster(c, &coeffs, tol);
    }
    clusters.extend(found);
    clusters.sort_by(compare_clusters);
    Ok(clusters)
}

fn compare_clusters(a: &RootCluster, b: &RootCluster) -> std::cmp::Ordering {
    a.value
        .re
        .partial_cmp(&b.value.re)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(
            a.value
                .im
                .partial_cmp(&b.value.im)
                .unwrap_or(std::cmp::Ordering::Equal),
        )
}

/// Backward-error bound: `|p(x)|` is at evaluation noise level once it is
/// below `8 eps * sum_j |a_j| |x|^j`.
fn residual_threshold(coeffs: &[Complex64], x: Complex64) -> f64 {
    let ax = x.norm();
    let mut acc = 0.0;
    for c in coeffs.iter().rev() {
        acc = acc * ax + c.norm();
    }
    8.0 * f64::EPSILON * acc.max(f64::MIN_POSITIVE)
}

/// Aberth–Ehrlich iteration with Gauss–Seidel updates.
fn aberth(coeffs: &[Complex64], n: usize) -> Result<Vec<Complex64>, Error> {
    let deriv: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect();

    // Initial guesses on a circle between the Cauchy-type inner and outer
    // root bounds, with an irrational angular offset to dodge symmetry.
    let an = coeffs[n].norm();
    let a0 = coeffs[0].norm();
    let max_rest_hi = coeffs[..n].iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    let max_rest_lo = coeffs[1..].iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    let r_hi = 1.0 + max_rest_hi / an;
    let r_lo = a0 / (a0 + max_rest_lo);
    let radius = (r_hi * r_lo).sqrt().max(1e-12);
    let offset = 0.739_085_133_215_160_7;
    let mut x: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + offset) / n as f64;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    let max_iter = 100 + 40 * n;
    for _ in 0..max_iter {
        let mut all_converged = true;
        for i in 0..n {
            let pv = horner(coeffs, x[i]);
            if pv.norm() <= residual_threshold(coeffs, x[i]) {
                continue;
            }
            all_converged = false;
            let mut dv = horner(&deriv, x[i]);
            if dv.re == 0.0 && dv.im == 0.0 {
                // Stationary point: nudge off it.
                let step = 1e-8 * (1.0 + x[i].norm());
                x[i] += Complex64::new(step, 1e-8);
                continue;
            }
            let newton = pv / dv;
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = x[i] - x[j];
                    if d.re == 0.0 && d.im == 0.0 {
                        // Collided guesses: separate them.
                        let step = 1e-8 * (1.0 + x[i].norm());
                        x[i] += Complex64::new(step, -1e-8);
                        dv = Complex64::new(1.0, 0.0);
                        sum = Complex64::new(0.0, 0.0);
                        break;
                    }
                    sum += 1.0 / d;
                }
            }
            let _ = dv;
            let denom = Complex64::new(1.0, 0.0) - newton * sum;
            let correction = if denom.re == 0.0 && denom.im == 0.0 {
                newton
            } else {
                newton / denom
            };
            x[i] -= correction;
        }
        if all_converged {
            return Ok(x);
        }
    }

    let worst = x
        .iter()
        .map(|&xi| horner(coeffs, xi).norm())
        .fold(0.0_f64, f64::max);
    Err(Error::ConvergenceFailure(format!(
        "root iteration did not settle after {max_iter} sweeps; worst residual {worst:.3e}"
    )))
}

/// Polishes a cluster centroid. An `m`-fold root of `p` is a *simple* root
/// of the `(m−1)`-th derivative, so Newton iteration on that derivative
/// recovers full double precision for multiple roots, where the raw cluster
/// centroid is only `O(eps^{1/m})` accurate. The refined point is kept only
/// if it stays close to the centroid (never re-assigning the cluster).
fn refine_cluster(c: &mut RootCluster, coeffs: &[Complex64], tol: f64) {
    if c.multiplicity < 2 {
        return;
    }
    let mut target: Vec<Complex64> = coeffs.to_vec();
    for _ in 0..(c.multiplicity - 1) {
        target = target
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, v)| v * k as f64)
            .collect();
        if target.len() < 2 {
            return;
        }
    }
    let dtarget: Vec<Complex64> = target
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, v)| v * k as f64)
        .collect();
    let mut x = c.value;
    for _ in 0..64 {
        let pv = horner(&target, x);
        let dv = horner(&dtarget, x);
        if dv.norm() == 0.0 {
            return;
        }
        let step = pv / dv;
        x -= step;
        if step.norm() <= 1e-16 * (1.0 + x.norm()) {
            break;
        }
    }
    // Accept only a genuine polish of this cluster.
    if (x - c.value).norm() <= 10.0 * tol * (1.0 + c.value.norm()) {
        c.value = x;
    }
}

/// Merges approximations into clusters. Two approximations join when they
/// are within the relative tolerance of each other or when their Newton
/// inclusion disks (radius `n |p/p'|`, capped) overlap; merging is
/// transitive.
fn cluster(
    approx: &[Complex64],
    coeffs: &[Complex64],
    deriv: &[Complex64],
    tol: f64,
) -> Vec<RootCluster> {
    let n = approx.len();
    let radii: Vec<f64> = approx
        .iter()
        .map(|&x| {
            let pv = horner(coeffs, x);
            let dv = horner(deriv, x);
            // |p(x)| is only known up to evaluation noise, so widen the
            // Newton inclusion radius by the backward-error bound; near a
            // multiple root the raw |p/p'| can otherwise collapse to zero.
            let noise = residual_threshold(coeffs, x);
            let r = if dv.norm() == 0.0 {
                f64::INFINITY
            } else {
                n as f64 * (pv.norm() + noise) / dv.norm()
            };
            r.min(1e-2 * (1.0 + x.norm()))
        })
        .collect();

    // Union-find over the n approximations.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (approx[i] - approx[j]).norm();
            let near = d <= tol * 1.0_f64.max(approx[i].norm().max(approx[j].norm()));
            let disks = d <= radii[i] + radii[j];
            if near || disks {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }

    let mut groups: std::collections::HashMap<usize, Vec<usize>> = std::collections::HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups
        .values()
        .map(|members| {
            let sum = members
                .iter()
                .fold(Complex64::new(0.0, 0.0), |acc, &i| acc + approx[i]);
            RootCluster {
                value: sum / members.len() as f64,
                multiplicity: members.len(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ExactComplexRational;

    fn p(coeffs: &[i64]) -> Polynomial {
        Polynomial::from_i64_coeffs(coeffs)
    }

    fn assert_root_near(clusters: &[RootCluster], re: f64, im: f64, mult: usize) {
        let hit = clusters.iter().find(|c| {
            (c.value - Complex64::new(re, im)).norm() < 1e-6 && c.multiplicity == mult
        });
        assert!(hit.is_some(), "no root near {re}+{im}i x{mult} in {clusters:?}");
    }

    #[test]
    fn quadratic_with_simple_roots() {
        let r = roots(&p(&[-1, 0, 1]), DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(r.len(), 2);
        assert_root_near(&r, 1.0, 0.0, 1);
        assert_root_near(&r, -1.0, 0.0, 1);
    }

    #[test]
    fn double_root_clusters() {
        // (z+1)^2
        let r = roots(&p(&[1, 2, 1]), DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(r.len(), 1);
        assert_root_near(&r, -1.0, 0.0, 2);
    }

    #[test]
    fn cubic_with_mixed_multiplicities() {
        // (z+1)^2 (z+4) = z^3 + 6z^2 + 9z + 4
        let r = roots(&p(&[4, 9, 6, 1]), DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(r.len(), 2);
        assert_root_near(&r, -1.0, 0.0, 2);
        assert_root_near(&r, -4.0, 0.0, 1);
    }

    #[test]
    fn origin_roots_are_exact() {
        // z^2 (z - 3)
        let r = roots(&p(&[0, 0, -3, 1]), DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[1].value.norm() == 0.0 && r[1].multiplicity == 2 || r[0].value.norm() == 0.0);
        assert_root_near(&r, 0.0, 0.0, 2);
        assert_root_near(&r, 3.0, 0.0, 1);
    }

    #[test]
    fn complex_roots_found() {
        // z^2 + 1
        let r = roots(&p(&[1, 0, 1]), DEFAULT_ROOT_TOL).unwrap();
        assert_root_near(&r, 0.0, 1.0, 1);
        assert_root_near(&r, 0.0, -1.0, 1);
    }

    #[test]
    fn multiplicity_sums_to_degree_random_like() {
        let poly = Polynomial::from_roots(&[
            ExactComplexRational::from_ratio(1, 2),
            ExactComplexRational::from_ratio(-7, 3),
            ExactComplexRational::from_ratios(0, 1, 2, 1),
            ExactComplexRational::from_ratios(3, 1, -1, 2),
            ExactComplexRational::from_i64(5),
        ]);
        let r = roots(&poly, DEFAULT_ROOT_TOL).unwrap();
        let total: usize = r.iter().map(|c| c.multiplicity).sum();
        assert_eq!(Some(total), poly.degree());
        assert_root_near(&r, 0.5, 0.0, 1);
        assert_root_near(&r, 3.0, -0.5, 1);
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        assert!(roots(&Polynomial::zero(), DEFAULT_ROOT_TOL).is_err());
    }
}
