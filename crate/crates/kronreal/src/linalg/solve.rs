//! Partial-pivoted elimination over the complex field.
//!
//! The pivot threshold is relative to the largest entry of the factored
//! matrix, so singularity detection is scale-free and reproducible.

use num_complex::Complex64;

use super::CMatrix;
use crate::error::{dim_mismatch, Error, Result};

/// A pivot below `PIVOT_REL_THRESHOLD * max_abs(M)` signals singularity.
pub const PIVOT_REL_THRESHOLD: f64 = 1e-13;

/// LU factorization with row partial pivoting, kept for repeated solves.
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Factor a square matrix; errors when a pivot falls below the
    /// singularity threshold.
    pub fn new(m: &CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(dim_mismatch(
                "lu",
                format!("{}x{} matrix is not square", m.rows(), m.cols()),
            ));
        }
        let n = m.rows();
        let threshold = PIVOT_REL_THRESHOLD * m.max_abs();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_mag = lu[(k, k)].norm();
            for i in k + 1..n {
                let mag = lu[(i, k)].norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = i;
                }
            }
            if pivot_mag <= threshold {
                return Err(Error::Singular {
                    pivot: pivot_mag,
                    threshold,
                });
            }
            if pivot_row != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(k, pivot_row);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in k + 1..n {
                    let sub = factor * lu[(k, j)];
                    lu[(i, j)] -= sub;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    /// Factorization that substitutes `floor` for any pivot of smaller
    /// magnitude instead of failing. Inverse iteration relies on this; the
    /// shifted matrix it factors is singular on purpose.
    pub(crate) fn new_with_floor(m: &CMatrix, floor: f64) -> Self {
        let n = m.rows();
        debug_assert!(m.is_square());
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_mag = lu[(k, k)].norm();
            for i in k + 1..n {
                let mag = lu[(i, k)].norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = i;
                }
            }
            if pivot_row != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(k, pivot_row);
            }
            if pivot_mag < floor {
                let p = lu[(k, k)];
                lu[(k, k)] = if pivot_mag == 0.0 {
                    Complex64::new(floor, 0.0)
                } else {
                    p / pivot_mag * floor
                };
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in k + 1..n {
                    let sub = factor * lu[(k, j)];
                    lu[(i, j)] -= sub;
                }
            }
        }
        Self { lu, perm }
    }

    /// Solve `M X = RHS` column by column.
    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, rhs: &CMatrix) -> Result<CMatrix> {
        let n = self.lu.rows();
        if rhs.rows() != n {
            return Err(dim_mismatch(
                "solve",
                format!("{} rhs rows for an {n}x{n} system", rhs.rows()),
            ));
        }
        let mut x = CMatrix::zeros(n, rhs.cols());
        for c in 0..rhs.cols() {
            // apply the row permutation, then forward/back substitution
            let mut y: Vec<Complex64> = (0..n).map(|i| rhs[(self.perm[i], c)]).collect();
            for i in 1..n {
                let mut acc = y[i];
                for k in 0..i {
                    acc -= self.lu[(i, k)] * y[k];
                }
                y[i] = acc;
            }
            for i in (0..n).rev() {
                let mut acc = y[i];
                for k in i + 1..n {
                    acc -= self.lu[(i, k)] * y[k];
                }
                y[i] = acc / self.lu[(i, i)];
            }
            for i in 0..n {
                x[(i, c)] = y[i];
            }
        }
        Ok(x)
    }
}

/// Solve `M X = RHS` by partial-pivoted elimination.
pub fn solve(m: &CMatrix, rhs: &CMatrix) -> Result<CMatrix> {
    Lu::new(m)?.solve(rhs)
}

/// Matrix inverse, computed as `solve(M, I)`.
pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    Lu::new(m)?.solve(&CMatrix::identity(m.rows()))
}

/// Numerical rank by elimination with full pivoting.
///
/// Pivots are counted while they stay above `rel_tol` times the Frobenius
/// norm of the input (a cheap stand-in for the largest singular value).
pub fn rank(m: &CMatrix, rel_tol: f64) -> usize {
    let threshold = rel_tol * m.frobenius_norm();
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    while r < rows && r < cols {
        // full pivot over the active trailing block
        let (mut pi, mut pj, mut pmag) = (r, r, 0.0);
        for i in r..rows {
            for j in r..cols {
                let mag = a[(i, j)].norm();
                if mag > pmag {
                    pmag = mag;
                    pi = i;
                    pj = j;
                }
            }
        }
        if pmag <= threshold {
            break;
        }
        for j in 0..cols {
            let tmp = a[(r, j)];
            a[(r, j)] = a[(pi, j)];
            a[(pi, j)] = tmp;
        }
        for i in 0..rows {
            let tmp = a[(i, r)];
            a[(i, r)] = a[(i, pj)];
            a[(i, pj)] = tmp;
        }
        let pivot = a[(r, r)];
        for i in r + 1..rows {
            let factor = a[(i, r)] / pivot;
            for j in r..cols {
                let sub = factor * a[(r, j)];
                a[(i, j)] -= sub;
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_matrix, SplitMix64};

    #[test]
    fn solve_identity_returns_rhs() {
        let mut rng = SplitMix64::new(1);
        let rhs = random_matrix(&mut rng, 4, 2);
        let x = solve(&CMatrix::identity(4), &rhs).unwrap();
        assert_eq!(x.max_abs_diff(&rhs), 0.0);
    }

    #[test]
    fn solve_diagonal_case() {
        let m = CMatrix::from_real_rows(&[&[2.0, 0.0], &[0.0, 4.0]]);
        let rhs = CMatrix::col_from_real(&[2.0, 8.0]);
        let x = solve(&m, &rhs).unwrap();
        assert!(x.max_abs_diff(&CMatrix::col_from_real(&[1.0, 2.0])) <= 1e-15);
    }

    #[test]
    fn solve_residual_on_random_system() {
        let mut rng = SplitMix64::new(17);
        let m = random_matrix(&mut rng, 5, 5);
        let rhs = random_matrix(&mut rng, 5, 3);
        let x = solve(&m, &rhs).unwrap();
        let resid = m.matmul(&x).unwrap().sub(&rhs).frobenius_norm();
        assert!(resid <= 1e-10 * (1.0 + rhs.frobenius_norm()), "resid {resid}");
    }

    #[test]
    fn solve_signals_singularity() {
        let m = CMatrix::zeros(3, 3);
        assert!(matches!(
            solve(&m, &CMatrix::identity(3)),
            Err(crate::Error::Singular { .. })
        ));
        // rank-deficient to working precision
        let m = CMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0 + 1e-15]]);
        assert!(matches!(
            solve(&m, &CMatrix::identity(2)),
            Err(crate::Error::Singular { .. })
        ));
    }

    #[test]
    fn inverse_identity_and_diagonal() {
        let inv = inverse(&CMatrix::identity(3)).unwrap();
        assert_eq!(inv.max_abs_diff(&CMatrix::identity(3)), 0.0);
        let d = CMatrix::from_real_rows(&[&[2.0, 0.0], &[0.0, -1.0]]);
        let want = CMatrix::from_real_rows(&[&[0.5, 0.0], &[0.0, -1.0]]);
        assert!(inverse(&d).unwrap().max_abs_diff(&want) <= 1e-15);
    }

    #[test]
    fn inverse_residual_on_random_matrix() {
        let mut rng = SplitMix64::new(23);
        let m = random_matrix(&mut rng, 4, 4);
        let minv = inverse(&m).unwrap();
        let resid = m
            .matmul(&minv)
            .unwrap()
            .sub(&CMatrix::identity(4))
            .frobenius_norm();
        assert!(resid <= 1e-9, "resid {resid}");
    }

    #[test]
    fn solve_empty_system() {
        let x = solve(&CMatrix::zeros(0, 0), &CMatrix::zeros(0, 4)).unwrap();
        assert_eq!((x.rows(), x.cols()), (0, 4));
    }

    #[test]
    fn rank_detects_deficiency() {
        let mut rng = SplitMix64::new(31);
        let m = random_matrix(&mut rng, 4, 4);
        assert_eq!(rank(&m, 1e-9), 4);
        let u = random_matrix(&mut rng, 4, 1);
        let v = random_matrix(&mut rng, 1, 4);
        assert_eq!(rank(&u.matmul(&v).unwrap(), 1e-9), 1);
        assert_eq!(rank(&CMatrix::zeros(3, 5), 1e-9), 0);
    }
}
