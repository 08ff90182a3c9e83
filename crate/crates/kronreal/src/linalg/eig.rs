//! Small dense non-Hermitian eigensolver.
//!
//! Householder reduction to upper Hessenberg form, explicit-shift QR
//! iteration with Wilkinson shifts for the eigenvalues, then inverse
//! iteration on the original matrix for the eigenvectors. Built for the
//! state dimensions this crate works at (tens, not thousands); the spectral
//! splitting search is the only consumer.

use num_complex::Complex64;

use super::{CMatrix, Lu};
use crate::error::{dim_mismatch, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Eigenvalues (sorted by descending real part, then descending imaginary
/// part) with matching unit eigenvector columns.
pub struct Eigen {
    pub values: Vec<Complex64>,
    pub vectors: CMatrix,
}

/// Full eigendecomposition of a square complex matrix.
pub fn eigen(a: &CMatrix) -> Result<Eigen> {
    if !a.is_square() {
        return Err(dim_mismatch(
            "eigen",
            format!("{}x{} matrix is not square", a.rows(), a.cols()),
        ));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Eigen {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let mut values = qr_eigenvalues(hessenberg(a))?;
    values.sort_by(|x, y| {
        y.re.partial_cmp(&x.re)
            .unwrap()
            .then(y.im.partial_cmp(&x.im).unwrap())
    });
    let mut vectors = CMatrix::zeros(n, n);
    for (k, &lambda) in values.iter().enumerate() {
        let v = inverse_iteration(a, lambda)?;
        for i in 0..n {
            vectors[(i, k)] = v[(i, 0)];
        }
    }
    Ok(Eigen { values, vectors })
}

/// Unitary similarity reduction to upper Hessenberg form.
fn hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.rows();
    let mut h = a.clone();
    if n < 3 {
        return h;
    }
    for k in 0..n - 2 {
        let mut x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        // reflector v maps the column to alpha*e1 without cancellation
        let x0 = x[0];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        x[0] -= alpha;
        let vnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        let v: Vec<Complex64> = x.iter().map(|z| z / vnorm).collect();

        // left: rows k+1..n
        for j in 0..n {
            let mut dot = ZERO;
            for (idx, i) in (k + 1..n).enumerate() {
                dot += v[idx].conj() * h[(i, j)];
            }
            let dot2 = dot * 2.0;
            for (idx, i) in (k + 1..n).enumerate() {
                let sub = v[idx] * dot2;
                h[(i, j)] -= sub;
            }
        }
        // right: columns k+1..n
        for i in 0..n {
            let mut dot = ZERO;
            for (idx, j) in (k + 1..n).enumerate() {
                dot += h[(i, j)] * v[idx];
            }
            let dot2 = dot * 2.0;
            for (idx, j) in (k + 1..n).enumerate() {
                let sub = dot2 * v[idx].conj();
                h[(i, j)] -= sub;
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

/// Complex Givens rotation zeroing `b` in the pair `(a, b)`: returns
/// `(c, s)` with real `c`, `|c|^2 + |s|^2 = 1`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = (an * an + bn * bn).sqrt();
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}

fn qr_eigenvalues(mut h: CMatrix) -> Result<Vec<Complex64>> {
    let n = h.rows();
    let overall = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let mut end = n;
    let mut iters = 0usize;
    let mut total = 0usize;
    while end > 1 {
        // start of the unreduced block ending at end-1; the deflation
        // threshold is scaled by the overall norm (not just the local
        // diagonal) so a subdiagonal stalled at rounding level deflates
        let mut l = end - 1;
        while l > 0 {
            let s = h[(l, l - 1)].norm();
            let sc = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let thr = eps * sc.max(overall);
            if s <= thr {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == end - 1 {
            end -= 1;
            iters = 0;
            continue;
        }
        total += 1;
        if total > 60 * n {
            return Err(Error::NoConvergence {
                what: "qr eigenvalue iteration",
            });
        }
        let mu = if iters > 0 && iters.is_multiple_of(12) {
            // exceptional shift to break rare stagnation
            let s = h[(end - 1, end - 2)].norm() + h[(end - 2, end - 2)].norm();
            h[(end - 1, end - 1)] + Complex64::new(1.5 * s, 0.0)
        } else {
            wilkinson_shift(&h, end)
        };
        qr_step(&mut h, l, end, mu);
        iters += 1;
    }
    Ok((0..n).map(|i| h[(i, i)]).collect())
}

/// Eigenvalue of the trailing 2x2 block closest to the corner entry.
fn wilkinson_shift(h: &CMatrix, end: usize) -> Complex64 {
    let a = h[(end - 2, end - 2)];
    let b = h[(end - 2, end - 1)];
    let c = h[(end - 1, end - 2)];
    let d = h[(end - 1, end - 1)];
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - det * 4.0).sqrt();
    let half = Complex64::new(0.5, 0.0);
    let l1 = (tr + disc) * half;
    let l2 = (tr - disc) * half;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit-shift QR sweep on the Hessenberg block `[l, end)`.
fn qr_step(h: &mut CMatrix, l: usize, end: usize, mu: Complex64) {
    let n = h.rows();
    for i in l..end {
        h[(i, i)] -= mu;
    }
    let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(end - l - 1);
    for k in l..end - 1 {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..n {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = y * c - s.conj() * x;
        }
        h[(k + 1, k)] = ZERO;
        rots.push((c, s));
    }
    for (idx, (c, s)) in rots.into_iter().enumerate() {
        let k = l + idx;
        let top = (k + 2).min(n);
        for i in 0..top {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + s.conj() * y;
            h[(i, k + 1)] = y * c - x * s;
        }
    }
    for i in l..end {
        h[(i, i)] += mu;
    }
}

/// Inverse iteration for the eigenvector of `lambda`; tiny pivots in the
/// shifted factorization are replaced rather than rejected.
fn inverse_iteration(a: &CMatrix, lambda: Complex64) -> Result<CMatrix> {
    let n = a.rows();
    let scale = a.frobenius_norm().max(1.0);
    let mut shifted = a.clone();
    for i in 0..n {
        shifted[(i, i)] -= lambda;
    }
    let lu = Lu::new_relaxed(&shifted);
    let root = 1.0 / (n as f64).sqrt();
    let mut x = CMatrix::from_fn(n, 1, |_, _| Complex64::new(root, 0.0));
    let mut best: Option<(f64, CMatrix)> = None;
    for attempt in 0..n + 3 {
        for _ in 0..4 {
            let y = lu.solve(&x)?;
            let norm = y.vec_norm();
            if !norm.is_finite() || norm == 0.0 {
                break;
            }
            x = y.scale(Complex64::new(1.0 / norm, 0.0));
            let resid = a
                .matmul(&x)?
                .sub(&x.scale(lambda))
                .frobenius_norm();
            if resid <= 1e-9 * scale {
                return Ok(x);
            }
            match &best {
                Some((r, _)) if *r <= resid => {}
                _ => best = Some((resid, x.clone())),
            }
        }
        // restart from a different deterministic direction
        x = CMatrix::basis_vector(n, attempt % n);
    }
    match best {
        Some((resid, v)) if resid <= 1e-7 * scale => Ok(v),
        _ => Err(Error::NoConvergence {
            what: "inverse iteration",
        }),
    }
}

impl Lu {
    /// Partial-pivot factorization that substitutes a tiny value for
    /// unusable pivots instead of failing; inverse iteration factors a
    /// singular shifted matrix on purpose.
    fn new_relaxed(m: &CMatrix) -> Lu {
        let tau = (f64::EPSILON * m.max_abs()).max(1e-150);
        Lu::new_with_floor(m, tau)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_matrix, SplitMix64};

    fn eig_residual(a: &CMatrix, e: &Eigen) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, &lambda) in e.values.iter().enumerate() {
            let v = e.vectors.column(k);
            let r = a
                .matmul(&v)
                .unwrap()
                .sub(&v.scale(lambda))
                .frobenius_norm();
            worst = worst.max(r);
        }
        worst
    }

    #[test]
    fn diagonal_matrix_eigenvalues_exact() {
        let d = CMatrix::from_real_rows(&[&[3.0, 0.0], &[0.0, -1.0]]);
        let e = eigen(&d).unwrap();
        assert!((e.values[0] - Complex64::new(3.0, 0.0)).norm() <= 1e-14);
        assert!((e.values[1] - Complex64::new(-1.0, 0.0)).norm() <= 1e-14);
    }

    #[test]
    fn rotation_matrix_has_imaginary_pair() {
        let a = CMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let e = eigen(&a).unwrap();
        let mut ims: Vec<f64> = e.values.iter().map(|z| z.im).collect();
        ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ims[0] + 1.0).abs() <= 1e-12);
        assert!((ims[1] - 1.0).abs() <= 1e-12);
        assert!(e.values.iter().all(|z| z.re.abs() <= 1e-12));
    }

    #[test]
    fn random_matrix_eigenpairs_have_small_residual() {
        for seed in [2u64, 14, 77] {
            let mut rng = SplitMix64::new(seed);
            let a = random_matrix(&mut rng, 6, 6);
            let e = eigen(&a).unwrap();
            assert_eq!(e.values.len(), 6);
            let resid = eig_residual(&a, &e);
            assert!(resid <= 1e-8, "seed {seed}: residual {resid}");
        }
    }

    #[test]
    fn triangular_matrix_with_large_coupling() {
        // nearly parallel eigenvectors but well separated eigenvalues
        let a = CMatrix::from_real_rows(&[&[1.0, 1e10], &[0.0, 1.01]]);
        let e = eigen(&a).unwrap();
        let resid = eig_residual(&a, &e);
        assert!(resid <= 1e-6 * a.frobenius_norm(), "residual {resid}");
        let mut res: Vec<f64> = e.values.iter().map(|z| z.re).collect();
        res.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((res[0] - 1.0).abs() <= 1e-6);
        assert!((res[1] - 1.01).abs() <= 1e-6);
    }

    #[test]
    fn trace_matches_eigenvalue_sum() {
        let mut rng = SplitMix64::new(40);
        let a = random_matrix(&mut rng, 7, 7);
        let e = eigen(&a).unwrap();
        let sum: Complex64 = e.values.iter().sum();
        assert!((sum - a.trace()).norm() <= 1e-9 * (1.0 + a.frobenius_norm()));
    }
}
