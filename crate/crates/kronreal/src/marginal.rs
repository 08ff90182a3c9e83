//! Partial-trace compressions (marginals) of a matrix-valued rational
//! function on a bipartite dimension `N1·N2`.
//!
//! Side `A` traces out the second factor,
//! `M ↦ Σ_k (I_{N1} ⊗ f_k)* M (I_{N1} ⊗ f_k)`, side `B` the first,
//! `M ↦ Σ_k (e_k ⊗ I_{N2})* M (e_k ⊗ I_{N2})`. The sums run over the
//! standard bases; the result is the same for any orthonormal basis, and
//! [`marginal_eval_with_basis`] exists to let tests confirm that. On an
//! exact tensor product the marginals collapse to
//! `R_A(z) = R_1(z)·Tr R_2(z)` and `R_B(z) = R_2(z)·Tr R_1(z)`; on a
//! generic function they are still well defined but their tensor product
//! no longer reconstructs the original.

use num_complex::Complex64;

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{block_diag, CMatrix};
use crate::realization::Realization;
use crate::tensor::tensor_product;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarginalSide {
    A,
    B,
}

/// Bipartite split of a square function's I/O dimension. The split is
/// always caller-supplied; a composite dimension factors in more than one
/// way.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MarginalSpec {
    pub n1: usize,
    pub n2: usize,
    pub side: MarginalSide,
}

impl MarginalSpec {
    pub fn new(n1: usize, n2: usize, side: MarginalSide) -> Self {
        Self { n1, n2, side }
    }

    fn check_matrix(&self, m: &CMatrix) -> Result<()> {
        let dim = self.n1 * self.n2;
        if m.rows() != dim || m.cols() != dim {
            return Err(dim_mismatch(
                "marginal",
                format!(
                    "matrix is {}x{}, spec wants {dim}x{dim} = ({} * {})^2",
                    m.rows(),
                    m.cols(),
                    self.n1,
                    self.n2
                ),
            ));
        }
        Ok(())
    }
}

/// Partial trace of a constant matrix, written directly on block indices:
/// side `A` gives `out[i,j] = Σ_k M[i·N2+k, j·N2+k]`, side `B` gives
/// `out[a,b] = Σ_k M[k·N2+a, k·N2+b]`.
pub fn marginal_compress(m: &CMatrix, spec: &MarginalSpec) -> Result<CMatrix> {
    spec.check_matrix(m)?;
    let (n1, n2) = (spec.n1, spec.n2);
    match spec.side {
        MarginalSide::A => Ok(CMatrix::from_fn(n1, n1, |i, j| {
            (0..n2).map(|k| m[(i * n2 + k, j * n2 + k)]).sum()
        })),
        MarginalSide::B => Ok(CMatrix::from_fn(n2, n2, |a, b| {
            (0..n1).map(|k| m[(k * n2 + a, k * n2 + b)]).sum()
        })),
    }
}

/// Evaluate the function and compress; side `A` yields an `N1 x N1`
/// matrix, side `B` an `N2 x N2` one.
pub fn marginal_eval(r: &Realization, spec: &MarginalSpec, z: Complex64) -> Result<CMatrix> {
    marginal_compress(&r.eval(z)?, spec)
}

/// Same compression against an arbitrary orthonormal basis, supplied as
/// the columns of a square matrix; exists so basis independence can be
/// checked rather than assumed.
pub fn marginal_eval_with_basis(
    r: &Realization,
    spec: &MarginalSpec,
    z: Complex64,
    basis: &CMatrix,
) -> Result<CMatrix> {
    let traced_dim = match spec.side {
        MarginalSide::A => spec.n2,
        MarginalSide::B => spec.n1,
    };
    if basis.rows() != traced_dim || basis.cols() != traced_dim {
        return Err(dim_mismatch(
            "marginal_eval_with_basis",
            format!(
                "basis is {}x{}, expected {traced_dim}x{traced_dim}",
                basis.rows(),
                basis.cols()
            ),
        ));
    }
    let unitary_resid = basis
        .adjoint()
        .matmul(basis)?
        .sub(&CMatrix::identity(traced_dim))
        .frobenius_norm();
    if unitary_resid > 1e-8 {
        return Err(Error::Precondition {
            check: "orthonormal-basis",
            residual: unitary_resid,
            limit: 1e-8,
        });
    }
    let m = r.eval(z)?;
    spec.check_matrix(&m)?;
    let kept = match spec.side {
        MarginalSide::A => spec.n1,
        MarginalSide::B => spec.n2,
    };
    let mut out = CMatrix::zeros(kept, kept);
    for k in 0..traced_dim {
        let col = basis.column(k);
        let embed = match spec.side {
            MarginalSide::A => CMatrix::identity(spec.n1).kron(&col),
            MarginalSide::B => col.kron(&CMatrix::identity(spec.n2)),
        };
        out = out.add(&embed.adjoint().matmul(&m)?.matmul(&embed)?);
    }
    Ok(out)
}

/// Realization of the marginal itself: one copy of `A` per basis vector of
/// the traced factor, so the state dimension is `n·N2` for side `A` and
/// `n·N1` for side `B`. Evaluation agrees with [`marginal_eval`] at every
/// point.
pub fn marginal_realization(r: &Realization, spec: &MarginalSpec) -> Result<Realization> {
    let dim = spec.n1 * spec.n2;
    if r.input_dim() != dim || r.output_dim() != dim {
        return Err(dim_mismatch(
            "marginal_realization",
            format!(
                "realization is {}x{}, spec wants {dim}x{dim}",
                r.output_dim(),
                r.input_dim()
            ),
        ));
    }
    let (copies, kept, stride_select) = match spec.side {
        // (I ⊗ f_k) keeps columns j·N2 + k
        MarginalSide::A => (spec.n2, spec.n1, true),
        // (e_k ⊗ I) keeps columns k·N2 + a
        MarginalSide::B => (spec.n1, spec.n2, false),
    };
    let n = r.state_dim();
    let a_blocks: Vec<&CMatrix> = std::iter::repeat_n(r.a(), copies).collect();
    let a = block_diag(&a_blocks);
    let mut b = CMatrix::zeros(0, kept);
    let mut c = CMatrix::zeros(kept, 0);
    for k in 0..copies {
        let select = |idx: usize| {
            if stride_select {
                idx * spec.n2 + k
            } else {
                k * spec.n2 + idx
            }
        };
        let b_k = CMatrix::from_fn(n, kept, |i, j| r.b()[(i, select(j))]);
        let c_k = CMatrix::from_fn(kept, n, |i, j| r.c()[(select(i), j)]);
        b = b.vcat(&b_k)?;
        c = c.hcat(&c_k)?;
    }
    let d = marginal_compress(r.d(), spec)?;
    Realization::new(a, b, c, d)
}

/// Worst-case gap, over the samples, between the side-`A` marginal of
/// `R_1 ⊗ R_2` and `R_1(z)·Tr R_2(z)`.
pub fn trace_relation_residual(
    r1: &Realization,
    r2: &Realization,
    z_samples: &[Complex64],
) -> Result<f64> {
    if !r1.is_io_square() || !r2.is_io_square() {
        return Err(dim_mismatch(
            "trace_relation_residual",
            "both factors must be square".to_string(),
        ));
    }
    let spec = MarginalSpec::new(r1.output_dim(), r2.output_dim(), MarginalSide::A);
    let big = tensor_product(r1, r2);
    let mut worst: f64 = 0.0;
    for &z in z_samples {
        let marg = marginal_compress(&big.eval(z)?, &spec)?;
        let want = r1.eval(z)?.scale(r2.eval(z)?.trace());
        worst = worst.max(marg.sub(&want).frobenius_norm());
    }
    Ok(worst)
}

/// How far `marginal_A ⊗ marginal_B`, rescaled by the trace, is from the
/// function itself at `z`. Zero (to rounding) exactly when the function is
/// a tensor product there; a generic function misses by a wide margin.
pub fn reconstruction_residual(r: &Realization, spec: &MarginalSpec, z: Complex64) -> Result<f64> {
    let m = r.eval(z)?;
    spec.check_matrix(&m)?;
    let tr = m.trace();
    if tr.norm() < 1e-12 {
        return Err(Error::Precondition {
            check: "nonzero-trace",
            residual: tr.norm(),
            limit: 1e-12,
        });
    }
    let ma = marginal_compress(&m, &MarginalSpec::new(spec.n1, spec.n2, MarginalSide::A))?;
    let mb = marginal_compress(&m, &MarginalSpec::new(spec.n1, spec.n2, MarginalSide::B))?;
    let rebuilt = ma.kron(&mb).scale(Complex64::new(1.0, 0.0) / tr);
    Ok(rebuilt.sub(&m).frobenius_norm())
}
