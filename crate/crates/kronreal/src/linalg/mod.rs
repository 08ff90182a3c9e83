//! Dense complex-matrix kernel.
//!
//! Row-major storage over `Complex64`, with the handful of operations the
//! realization calculus needs: arithmetic, Kronecker products, block
//! assembly, partial-pivoted solves, elimination-based rank, and a small
//! non-Hermitian eigensolver. No structure exploitation: inflated matrices
//! are Kronecker-structured but stay dense here.

mod eig;
mod solve;

pub use eig::{eigen, Eigen};
pub use solve::{inverse, rank, solve, Lu, PIVOT_REL_THRESHOLD};

use num_complex::Complex64;

use crate::error::{dim_mismatch, Result};

/// Dense complex matrix, row-major.
///
/// Zero rows or columns are allowed; they carry the empty state blocks of
/// constant (state dimension zero) realizations.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl std::fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let v = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from row-major complex entries; errors when the length is off.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(dim_mismatch(
                "from_vec",
                format!("{} entries for a {rows}x{cols} matrix", data.len()),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    /// Real-valued test helper.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Self::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    /// Column vector from real entries; test helper.
    pub fn col_from_real(entries: &[f64]) -> Self {
        Self::from_fn(entries.len(), 1, |i, _| Complex64::new(entries[i], 0.0))
    }

    /// Scalar 1x1 matrix.
    pub fn scalar(z: Complex64) -> Self {
        Self {
            rows: 1,
            cols: 1,
            data: vec![z],
        }
    }

    /// Standard basis column vector `e_k` in dimension `dim`.
    pub fn basis_vector(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim, 1);
        v[(k, 0)] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "add: shape mismatch"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "sub: shape mismatch"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Standard matrix product; errors on a dimension mismatch.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(dim_mismatch(
                "matmul",
                format!(
                    "{}x{} times {}x{}",
                    self.rows, self.cols, rhs.rows, rhs.cols
                ),
            ));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..self.cols {
                    acc += self[(i, k)] * rhs[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    /// Kronecker product: block `(i, j)` of the result is `self[i,j] * rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self[(i, j)];
                for a in 0..rhs.rows {
                    for b in 0..rhs.cols {
                        out[(i * rhs.rows + a, j * rhs.cols + b)] = x * rhs[(a, b)];
                    }
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "max_abs_diff: shape mismatch"
        );
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace: matrix must be square");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Euclidean norm of a column vector (any shape is flattened).
    pub fn vec_norm(&self) -> f64 {
        self.frobenius_norm()
    }

    pub fn column(&self, j: usize) -> Self {
        Self::from_fn(self.rows, 1, |i, _| self[(i, j)])
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn hcat(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(dim_mismatch(
                "hcat",
                format!("{} rows next to {} rows", self.rows, rhs.rows),
            ));
        }
        Ok(Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                rhs[(i, j - self.cols)]
            }
        }))
    }

    pub fn vcat(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.cols {
            return Err(dim_mismatch(
                "vcat",
                format!("{} cols above {} cols", self.cols, rhs.cols),
            ));
        }
        Ok(Self::from_fn(self.rows + rhs.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)]
            } else {
                rhs[(i - self.rows, j)]
            }
        }))
    }

    /// General block assembly from a rectangular grid of blocks.
    pub fn from_blocks(grid: &[&[&CMatrix]]) -> Result<Self> {
        let mut result: Option<CMatrix> = None;
        for row in grid {
            let mut strip: Option<CMatrix> = None;
            for block in *row {
                strip = Some(match strip {
                    None => (*block).clone(),
                    Some(s) => s.hcat(block)?,
                });
            }
            let strip = strip.ok_or_else(|| dim_mismatch("from_blocks", "empty block row"))?;
            result = Some(match result {
                None => strip,
                Some(r) => r.vcat(&strip)?,
            });
        }
        result.ok_or_else(|| dim_mismatch("from_blocks", "empty block grid"))
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Assemble `[[m11, m12], [m21, m22]]`; errors when block shapes do not line up.
pub fn block2x2(m11: &CMatrix, m12: &CMatrix, m21: &CMatrix, m22: &CMatrix) -> Result<CMatrix> {
    CMatrix::from_blocks(&[&[m11, m12], &[m21, m22]])
}

/// Block-diagonal assembly.
pub fn block_diag(blocks: &[&CMatrix]) -> CMatrix {
    let rows = blocks.iter().map(|b| b.rows()).sum();
    let cols = blocks.iter().map(|b| b.cols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out[(r0 + i, c0 + j)] = (*b)[(i, j)];
            }
        }
        r0 += b.rows();
        c0 += b.cols();
    }
    out
}

/// True when `P` is square and `‖P·P − P‖_F ≤ tol`.
pub fn is_idempotent(p: &CMatrix, tol: f64) -> bool {
    if !p.is_square() {
        return false;
    }
    let pp = p.matmul(p).expect("square product");
    pp.sub(p).frobenius_norm() <= tol
}

/// Residual scaled against the reference: `‖x − reference‖_F / (1 + ‖reference‖_F)`.
pub fn rel_diff(x: &CMatrix, reference: &CMatrix) -> f64 {
    x.sub(reference).frobenius_norm() / (1.0 + reference.frobenius_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn rand_matrix(rng: &mut SplitMix64, r: usize, c: usize) -> CMatrix {
        crate::rng::random_matrix(rng, r, c)
    }

    // quadruple-loop reference for the Kronecker product
    fn kron_oracle(x: &CMatrix, y: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(x.rows() * y.rows(), x.cols() * y.cols());
        for i in 0..x.rows() {
            for j in 0..x.cols() {
                for a in 0..y.rows() {
                    for b in 0..y.cols() {
                        out[(i * y.rows() + a, j * y.cols() + b)] = x[(i, j)] * y[(a, b)];
                    }
                }
            }
        }
        out
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let k = CMatrix::identity(2).kron(&CMatrix::identity(3));
        assert_eq!(k.max_abs_diff(&CMatrix::identity(6)), 0.0);
    }

    #[test]
    fn kron_scalar_left_scales() {
        let mut rng = SplitMix64::new(11);
        let y = rand_matrix(&mut rng, 3, 2);
        let two = CMatrix::scalar(num_complex::Complex64::new(2.0, 0.0));
        let k = two.kron(&y);
        assert_eq!(k.max_abs_diff(&y.scale(num_complex::Complex64::new(2.0, 0.0))), 0.0);
    }

    #[test]
    fn kron_matches_quadruple_loop_oracle() {
        let x = CMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let y = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let k = x.kron(&y);
        assert_eq!(k.rows(), 4);
        assert_eq!(k.cols(), 4);
        assert_eq!(k.max_abs_diff(&kron_oracle(&x, &y)), 0.0);

        let mut rng = SplitMix64::new(5);
        let x = rand_matrix(&mut rng, 3, 2);
        let y = rand_matrix(&mut rng, 2, 4);
        assert_eq!(x.kron(&y).max_abs_diff(&kron_oracle(&x, &y)), 0.0);
    }

    #[test]
    fn matmul_identity_and_annihilator() {
        let mut rng = SplitMix64::new(3);
        let y = rand_matrix(&mut rng, 4, 3);
        let i4 = CMatrix::identity(4);
        assert_eq!(i4.matmul(&y).unwrap().max_abs_diff(&y), 0.0);
        let z = CMatrix::zeros(3, 5);
        let prod = y.matmul(&z).unwrap();
        assert_eq!(prod.max_abs(), 0.0);
    }

    #[test]
    fn matmul_matches_triple_loop_oracle() {
        let mut rng = SplitMix64::new(7);
        let x = rand_matrix(&mut rng, 3, 4);
        let y = rand_matrix(&mut rng, 4, 2);
        let got = x.matmul(&y).unwrap();
        // independent entrywise sum of products
        let mut want = CMatrix::zeros(3, 2);
        for i in 0..3 {
            for j in 0..2 {
                let mut s = num_complex::Complex64::new(0.0, 0.0);
                for k in 0..4 {
                    s += x[(i, k)] * y[(k, j)];
                }
                want[(i, j)] = s;
            }
        }
        let scale = want.frobenius_norm();
        assert!(got.max_abs_diff(&want) <= 1e-15 * scale);
    }

    #[test]
    fn matmul_rejects_mismatched_shapes() {
        let x = CMatrix::zeros(2, 3);
        let y = CMatrix::zeros(2, 3);
        assert!(x.matmul(&y).is_err());
    }

    #[test]
    fn block2x2_assembles_identity() {
        let b = block2x2(
            &CMatrix::identity(2),
            &CMatrix::zeros(2, 3),
            &CMatrix::zeros(3, 2),
            &CMatrix::identity(3),
        )
        .unwrap();
        assert_eq!(b.max_abs_diff(&CMatrix::identity(5)), 0.0);
    }

    #[test]
    fn block2x2_of_scalars() {
        let s = |x: f64| CMatrix::scalar(num_complex::Complex64::new(x, 0.0));
        let b = block2x2(&s(1.0), &s(2.0), &s(3.0), &s(4.0)).unwrap();
        assert_eq!(
            b.max_abs_diff(&CMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]])),
            0.0
        );
    }

    #[test]
    fn block2x2_split_rejoin_roundtrip() {
        let mut rng = SplitMix64::new(42);
        let m = rand_matrix(&mut rng, 5, 5);
        let m11 = m.submatrix(0, 0, 2, 2);
        let m12 = m.submatrix(0, 2, 2, 3);
        let m21 = m.submatrix(2, 0, 3, 2);
        let m22 = m.submatrix(2, 2, 3, 3);
        let back = block2x2(&m11, &m12, &m21, &m22).unwrap();
        assert_eq!(back.max_abs_diff(&m), 0.0);
    }

    #[test]
    fn idempotent_identity_and_zero() {
        assert!(is_idempotent(&CMatrix::identity(4), 1e-12));
        assert!(is_idempotent(&CMatrix::zeros(4, 4), 1e-12));
    }

    #[test]
    fn idempotent_from_conjugated_coordinate_projection() {
        let mut rng = SplitMix64::new(9);
        let t = crate::rng::well_conditioned(&mut rng, 5, 1e4);
        let tinv = inverse(&t).unwrap();
        let d = block_diag(&[&CMatrix::identity(2), &CMatrix::zeros(3, 3)]);
        let p = tinv.matmul(&d).unwrap().matmul(&t).unwrap();
        assert!(is_idempotent(&p, 1e-9));
        // and a dense random matrix is generically not idempotent
        let q = rand_matrix(&mut rng, 5, 5);
        assert!(!is_idempotent(&q, 1e-9));
    }

    #[test]
    fn zero_dimension_matrices_compose() {
        let a = CMatrix::zeros(0, 0);
        let b = CMatrix::zeros(0, 3);
        let c = CMatrix::zeros(2, 0);
        let prod = c.matmul(&b).unwrap();
        assert_eq!((prod.rows(), prod.cols()), (2, 3));
        assert_eq!(prod.max_abs(), 0.0);
        assert_eq!(a.kron(&CMatrix::identity(2)).rows(), 0);
    }
}
