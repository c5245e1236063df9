//! Exact dense linear solving over the Gaussian rationals.
//!
//! Small systems only (coefficient matching for low-degree polynomial
//! ansätze), so plain fraction-arithmetic Gauss–Jordan elimination is used.

use super::rational::ExactComplexRational;

/// Exact solution set of `M x = b`.
///
/// `particular` is one solution (free variables set to zero); `kernel` is a
/// basis of the solution space of `M x = 0`. The full solution set is
/// `particular + span(kernel)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolution {
    pub particular: Vec<ExactComplexRational>,
    pub kernel: Vec<Vec<ExactComplexRational>>,
}

/// Solves `M x = b` exactly by Gauss–Jordan elimination.
///
/// `rows` holds the matrix by rows; every row must have `ncols` entries and
/// `rhs` must have one entry per row. Returns `None` when the system is
/// inconsistent.
pub fn solve_exact(
    rows: &[Vec<ExactComplexRational>],
    rhs: &[ExactComplexRational],
    ncols: usize,
) -> Option<LinearSolution> {
    assert_eq!(rows.len(), rhs.len(), "one right-hand side per row");
    for r in rows {
        assert_eq!(r.len(), ncols, "ragged matrix row");
    }
    // Augmented matrix [M | b].
    let mut m: Vec<Vec<ExactComplexRational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();

    let nrows = m.len();
    let mut pivot_col_of_row = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col]
            .checked_inv()
            .expect("pivot entry is nonzero");
        for e in m[rank].iter_mut() {
            *e = &*e * &inv;
        }
        for r in 0..nrows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..=ncols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
        }
        pivot_col_of_row.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }

    // Inconsistent when a zero row has a nonzero right-hand side.
    for r in rank..nrows {
        if !m[r][ncols].is_zero() {
            return None;
        }
    }

    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &c in &pivot_col_of_row {
            v[c] = true;
        }
        v
    };

    let mut particular = vec![ExactComplexRational::zero(); ncols];
    for (r, &c) in pivot_col_of_row.iter().enumerate() {
        particular[c] = m[r][ncols].clone();
    }

    let mut kernel = Vec::new();
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![ExactComplexRational::zero(); ncols];
        v[free] = ExactComplexRational::one();
        for (r, &c) in pivot_col_of_row.iter().enumerate() {
            v[c] = -&m[r][free];
        }
        kernel.push(v);
    }

    Some(LinearSolution { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> ExactComplexRational {
        ExactComplexRational::from_ratio(p, d)
    }

    fn apply(rows: &[Vec<ExactComplexRational>], x: &[ExactComplexRational]) -> Vec<ExactComplexRational> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .zip(x)
                    .fold(ExactComplexRational::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    #[test]
    fn unique_solution() {
        let rows = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(-1, 1)]];
        let rhs = vec![q(5, 1), q(1, 1)];
        let sol = solve_exact(&rows, &rhs, 2).unwrap();
        assert_eq!(sol.particular, vec![q(2, 1), q(1, 1)]);
        assert!(sol.kernel.is_empty());
    }

    #[test]
    fn underdetermined_has_kernel() {
        let rows = vec![vec![q(1, 1), q(2, 1), q(-1, 1)]];
        let rhs = vec![q(3, 1)];
        let sol = solve_exact(&rows, &rhs, 3).unwrap();
        assert_eq!(apply(&rows, &sol.particular), rhs);
        assert_eq!(sol.kernel.len(), 2);
        for v in &sol.kernel {
            let img = apply(&rows, v);
            assert!(img.iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn inconsistent_returns_none() {
        let rows = vec![vec![q(1, 1), q(1, 1)], vec![q(2, 1), q(2, 1)]];
        let rhs = vec![q(1, 1), q(3, 1)];
        assert!(solve_exact(&rows, &rhs, 2).is_none());
    }

    #[test]
    fn zero_matrix_kernel_is_full() {
        let rows = vec![vec![q(0, 1), q(0, 1)]];
        let rhs = vec![q(0, 1)];
        let sol = solve_exact(&rows, &rhs, 2).unwrap();
        assert_eq!(sol.kernel.len(), 2);
    }
}
