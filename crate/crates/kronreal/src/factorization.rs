//! Tensor factorization of a square rational function with identity value
//! at infinity.
//!
//! Given realizations of `F` and `F^{-1}` on the state space
//! `C^{n_l·m_r + m_l·n_r}`, a pair of supporting projections
//! `(Π_α, Π_β)` splitting that space into an `A`-invariant part and an
//! `A^x`-invariant part certifies that `F = F_l ⊗ F_r`, and the factors
//! can be written down explicitly: compress the big realization through
//! the hat projections built from the same coordinate transformation and a
//! pair of unit vectors `u, v`. [`tensor_factorize`] does exactly that.
//!
//! When the transformation is unknown, [`find_supporting_projections`]
//! searches for an admissible pair by enumerating eigenvalue subsets of
//! `A` and `A^x`; the first admissible pair in enumeration order wins, no
//! matter how the enumeration is scheduled.

use num_complex::Complex64;

use crate::error::{dim_mismatch, Error, Result};
use crate::exec;
use crate::linalg::{self, block_diag, CMatrix};
use crate::realization::Realization;
use crate::rng::grid_point;

/// Idempotency and cross-product residual allowed in a validated pair.
pub const PROJECTION_TOL: f64 = 1e-9;
/// Allowed deviation of `Π_α + Π_β` from the identity.
pub const PROJECTION_SUM_TOL: f64 = 1e-12;
/// Invariant-subspace residual accepted by the factorization preconditions.
pub const SUBSPACE_TOL: f64 = 1e-8;
/// End-to-end evaluation residual the factorization is expected to meet.
pub const FACTORIZE_TOL: f64 = 1e-7;
/// Condition-proxy cap for a complementary basis in the projection search.
pub const COMPLEMENT_COND_CAP: f64 = 1e8;
/// Smallest admissible eigenvalue gap in the projection search.
pub const EIGENVALUE_GAP: f64 = 1e-6;

/// Two idempotents summing to the identity and annihilating each other,
/// with prescribed ranks `alpha` and `beta`.
#[derive(Clone, Debug)]
pub struct SupportingProjectionPair {
    p_alpha: CMatrix,
    p_beta: CMatrix,
    alpha: usize,
    beta: usize,
}

impl SupportingProjectionPair {
    /// Validates the projection algebra before accepting the pair:
    /// `Π² = Π` and `Π_α Π_β = 0` to [`PROJECTION_TOL`],
    /// `Π_α + Π_β = I` to [`PROJECTION_SUM_TOL`].
    pub fn new(p_alpha: CMatrix, p_beta: CMatrix, alpha: usize, beta: usize) -> Result<Self> {
        let n = alpha + beta;
        if p_alpha.rows() != n || !p_alpha.is_square() || p_beta.rows() != n || !p_beta.is_square()
        {
            return Err(dim_mismatch(
                "supporting_projections",
                format!(
                    "projections are {}x{} and {}x{}, expected {n}x{n}",
                    p_alpha.rows(),
                    p_alpha.cols(),
                    p_beta.rows(),
                    p_beta.cols()
                ),
            ));
        }
        let r = Self::invariant_residuals(&p_alpha, &p_beta);
        let worst_idem = r.idem_alpha.max(r.idem_beta).max(r.cross);
        if worst_idem > PROJECTION_TOL {
            return Err(Error::Precondition {
                check: "projection-algebra",
                residual: worst_idem,
                limit: PROJECTION_TOL,
            });
        }
        if r.sum > PROJECTION_SUM_TOL {
            return Err(Error::Precondition {
                check: "projection-sum",
                residual: r.sum,
                limit: PROJECTION_SUM_TOL,
            });
        }
        Ok(Self {
            p_alpha,
            p_beta,
            alpha,
            beta,
        })
    }

    /// The four defining residuals, before any tolerance is applied.
    pub fn invariant_residuals(p_alpha: &CMatrix, p_beta: &CMatrix) -> ProjectionResiduals {
        let idem = |p: &CMatrix| {
            p.matmul(p)
                .map(|pp| pp.sub(p).frobenius_norm())
                .unwrap_or(f64::INFINITY)
        };
        let cross = p_alpha
            .matmul(p_beta)
            .map(|ab| ab.frobenius_norm())
            .unwrap_or(f64::INFINITY)
            .max(
                p_beta
                    .matmul(p_alpha)
                    .map(|ba| ba.frobenius_norm())
                    .unwrap_or(f64::INFINITY),
            );
        let sum = p_alpha
            .add(p_beta)
            .sub(&CMatrix::identity(p_alpha.rows()))
            .frobenius_norm();
        ProjectionResiduals {
            idem_alpha: idem(p_alpha),
            idem_beta: idem(p_beta),
            cross,
            sum,
        }
    }

    pub fn p_alpha(&self) -> &CMatrix {
        &self.p_alpha
    }
    pub fn p_beta(&self) -> &CMatrix {
        &self.p_beta
    }
    pub fn alpha(&self) -> usize {
        self.alpha
    }
    pub fn beta(&self) -> usize {
        self.beta
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ProjectionResiduals {
    pub idem_alpha: f64,
    pub idem_beta: f64,
    pub cross: f64,
    pub sum: f64,
}

/// State and I/O dimensions of the factors a factorization should produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorDims {
    pub n_l: usize,
    pub m_l: usize,
    pub n_r: usize,
    pub m_r: usize,
}

impl FactorDims {
    /// `α = n_l · m_r`, the dimension of the `A`-invariant part.
    pub fn alpha(&self) -> usize {
        self.n_l * self.m_r
    }

    /// `β = m_l · n_r`, the dimension of the `A^x`-invariant part.
    pub fn beta(&self) -> usize {
        self.m_l * self.n_r
    }

    pub fn total_state(&self) -> usize {
        self.alpha() + self.beta()
    }

    pub fn io_dim(&self) -> usize {
        self.m_l * self.m_r
    }
}

/// Supporting projections obtained by conjugating the coordinate splitting
/// with a nonsingular `T`:
/// `Π_α = T^{-1} diag(I_α, 0) T`, `Π_β = T^{-1} diag(0, I_β) T`.
pub fn projections_from_t(
    t: &CMatrix,
    alpha: usize,
    beta: usize,
) -> Result<SupportingProjectionPair> {
    let n = alpha + beta;
    if !t.is_square() || t.rows() != n {
        return Err(dim_mismatch(
            "projections_from_t",
            format!("T is {}x{}, expected {n}x{n}", t.rows(), t.cols()),
        ));
    }
    if n == 0 {
        return SupportingProjectionPair::new(CMatrix::zeros(0, 0), CMatrix::zeros(0, 0), 0, 0);
    }
    let lu = linalg::Lu::new(t)?;
    let d_alpha = block_diag(&[&CMatrix::identity(alpha), &CMatrix::zeros(beta, beta)]);
    let d_beta = block_diag(&[&CMatrix::zeros(alpha, alpha), &CMatrix::identity(beta)]);
    let p_alpha = lu.solve(&d_alpha.matmul(t)?)?;
    let p_beta = lu.solve(&d_beta.matmul(t)?)?;
    SupportingProjectionPair::new(p_alpha, p_beta, alpha, beta)
}

fn check_unit(w: &CMatrix, dim: usize, what: &'static str) -> Result<()> {
    if w.rows() != dim || w.cols() != 1 {
        return Err(dim_mismatch(
            what,
            format!("vector is {}x{}, expected {dim}x1", w.rows(), w.cols()),
        ));
    }
    let norm = w.vec_norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitNorm { norm });
    }
    Ok(())
}

/// Rank-one-compressed companions of the supporting projections:
///
/// ```text
/// Π̂_α = T^{-1} diag(I_{n_l} ⊗ u u*, 0_β) T
/// Π̂_β = T^{-1} diag(0_α, v v* ⊗ I_{n_r}) T
/// ```
///
/// Both satisfy `Π̂ Π = Π Π̂ = Π̂` against [`projections_from_t`] built from
/// the same `T`.
pub fn hat_projections(
    t: &CMatrix,
    u: &CMatrix,
    v: &CMatrix,
    dims: &FactorDims,
) -> Result<(CMatrix, CMatrix)> {
    let n = dims.total_state();
    if !t.is_square() || t.rows() != n {
        return Err(dim_mismatch(
            "hat_projections",
            format!("T is {}x{}, expected {n}x{n}", t.rows(), t.cols()),
        ));
    }
    check_unit(u, dims.m_r, "hat_projections")?;
    check_unit(v, dims.m_l, "hat_projections")?;
    if n == 0 {
        return Ok((CMatrix::zeros(0, 0), CMatrix::zeros(0, 0)));
    }
    let lu = linalg::Lu::new(t)?;
    let uu = u.matmul(&u.adjoint())?;
    let vv = v.matmul(&v.adjoint())?;
    let alpha_block = CMatrix::identity(dims.n_l).kron(&uu);
    let beta_block = vv.kron(&CMatrix::identity(dims.n_r));
    let d_l = block_diag(&[&alpha_block, &CMatrix::zeros(dims.beta(), dims.beta())]);
    let d_r = block_diag(&[&CMatrix::zeros(dims.alpha(), dims.alpha()), &beta_block]);
    let p_hat_l = lu.solve(&d_l.matmul(t)?)?;
    let p_hat_r = lu.solve(&d_r.matmul(t)?)?;
    Ok((p_hat_l, p_hat_r))
}

/// Invariance residuals of the splitting:
/// `r1 = ‖A Π_α − Π_α A Π_α‖_F`, `r2 = ‖A^x Π_β − Π_β A^x Π_β‖_F`.
pub fn subspace_condition_residual(
    a: &CMatrix,
    a_times: &CMatrix,
    pair: &SupportingProjectionPair,
) -> (f64, f64) {
    let one_sided = |m: &CMatrix, p: &CMatrix| {
        let mp = m.matmul(p).expect("square blocks");
        let pmp = p.matmul(&mp).expect("square blocks");
        mp.sub(&pmp).frobenius_norm()
    };
    (
        one_sided(a, &pair.p_alpha),
        one_sided(a_times, &pair.p_beta),
    )
}

/// Inputs of a tensor factorization: realizations of `F` and `F^{-1}` with
/// `D = I`, the factor dimensions, and the deflation unit vectors.
#[derive(Clone, Debug)]
pub struct FactorizationProblem {
    pub f: Realization,
    pub f_inv: Realization,
    pub dims: FactorDims,
    pub u: CMatrix,
    pub v: CMatrix,
}

impl FactorizationProblem {
    /// Problem with the default deflation vectors (the first standard
    /// basis vector on each side).
    pub fn with_default_vectors(f: Realization, f_inv: Realization, dims: FactorDims) -> Self {
        let u = CMatrix::basis_vector(dims.m_r, 0);
        let v = CMatrix::basis_vector(dims.m_l, 0);
        Self {
            f,
            f_inv,
            dims,
            u,
            v,
        }
    }

    /// Check the hypotheses that do not involve projections: shapes,
    /// `D = I` on both realizations (Frobenius residual at most 1e-10),
    /// unit vectors.
    pub fn validate(&self) -> Result<()> {
        let n = self.dims.total_state();
        let io = self.dims.io_dim();
        for (name, r) in [("F", &self.f), ("F_inv", &self.f_inv)] {
            if r.state_dim() != n || r.input_dim() != io || r.output_dim() != io {
                return Err(dim_mismatch(
                    "factorization_problem",
                    format!(
                        "{name} is {}x{} with state dimension {}, expected {io}x{io} with {n}",
                        r.output_dim(),
                        r.input_dim(),
                        r.state_dim()
                    ),
                ));
            }
            let d_resid = r.d().sub(&CMatrix::identity(io)).frobenius_norm();
            if d_resid > 1e-10 {
                return Err(Error::Precondition {
                    check: "d-equals-identity",
                    residual: d_resid,
                    limit: 1e-10,
                });
            }
        }
        check_unit(&self.u, self.dims.m_r, "factorization_problem")?;
        check_unit(&self.v, self.dims.m_l, "factorization_problem")?;
        Ok(())
    }
}

/// Evaluation residual of the reconstruction at one sample point.
#[derive(Clone, Copy, Debug)]
pub struct SampleResidual {
    pub z: Complex64,
    pub residual: f64,
}

/// The two factors plus the per-sample reconstruction residuals
/// `‖F_l(z) ⊗ F_r(z) − F(z)‖_F / (1 + ‖F(z)‖_F)`.
#[derive(Clone, Debug)]
pub struct FactorizationResult {
    pub f_l: Realization,
    pub f_r: Realization,
    pub samples: Vec<SampleResidual>,
}

impl FactorizationResult {
    pub fn max_residual(&self) -> f64 {
        self.samples.iter().map(|s| s.residual).fold(0.0, f64::max)
    }
}

/// Extract the factors:
///
/// ```text
/// F_l(z) = (I_{m_l} ⊗ u*) C Π̂_α (zI − A)^{-1} Π̂_α B (I_{m_l} ⊗ u) + I_{m_l}
/// F_r(z) = (v* ⊗ I_{m_r}) C Π̂_β (zI − A)^{-1} Π̂_β B (v ⊗ I_{m_r}) + I_{m_r}
/// ```
///
/// The factors keep the full state dimension; `degree_probe` on the result
/// reports how much of it is active. Preconditions (problem hypotheses,
/// subspace condition, hat-projection consistency) are rechecked here and
/// violations come back as errors carrying the offending residual.
pub fn tensor_factorize(
    problem: &FactorizationProblem,
    pair: &SupportingProjectionPair,
    p_hat_l: &CMatrix,
    p_hat_r: &CMatrix,
) -> Result<FactorizationResult> {
    problem.validate()?;
    let dims = &problem.dims;
    if pair.alpha() != dims.alpha() || pair.beta() != dims.beta() {
        return Err(dim_mismatch(
            "tensor_factorize",
            format!(
                "projection split ({}, {}) does not match dims ({}, {})",
                pair.alpha(),
                pair.beta(),
                dims.alpha(),
                dims.beta()
            ),
        ));
    }
    let (r1, r2) = subspace_condition_residual(problem.f.a(), problem.f_inv.a(), pair);
    let sub_resid = r1.max(r2);
    if sub_resid > SUBSPACE_TOL {
        return Err(Error::Precondition {
            check: "subspace-condition",
            residual: sub_resid,
            limit: SUBSPACE_TOL,
        });
    }
    let hat_resid = hat_consistency_residual(pair, p_hat_l, p_hat_r)?;
    if hat_resid > SUBSPACE_TOL {
        return Err(Error::Precondition {
            check: "hat-projection-consistency",
            residual: hat_resid,
            limit: SUBSPACE_TOL,
        });
    }

    let left_embed = CMatrix::identity(dims.m_l).kron(&problem.u);
    let b_l = p_hat_l.matmul(problem.f.b())?.matmul(&left_embed)?;
    let c_l = CMatrix::identity(dims.m_l)
        .kron(&problem.u.adjoint())
        .matmul(problem.f.c())?
        .matmul(p_hat_l)?;
    let f_l = Realization::new(
        problem.f.a().clone(),
        b_l,
        c_l,
        CMatrix::identity(dims.m_l),
    )?;

    let right_embed = problem.v.kron(&CMatrix::identity(dims.m_r));
    let b_r = p_hat_r.matmul(problem.f.b())?.matmul(&right_embed)?;
    let c_r = problem
        .v
        .adjoint()
        .kron(&CMatrix::identity(dims.m_r))
        .matmul(problem.f.c())?
        .matmul(p_hat_r)?;
    let f_r = Realization::new(
        problem.f.a().clone(),
        b_r,
        c_r,
        CMatrix::identity(dims.m_r),
    )?;

    let samples = reconstruction_samples(&problem.f, &f_l, &f_r, 20)?;
    Ok(FactorizationResult { f_l, f_r, samples })
}

/// `max(‖Π̂Π − Π̂‖_F, ‖ΠΠ̂ − Π̂‖_F)` over both hat/supporting pairs.
pub fn hat_consistency_residual(
    pair: &SupportingProjectionPair,
    p_hat_l: &CMatrix,
    p_hat_r: &CMatrix,
) -> Result<f64> {
    let both = |hat: &CMatrix, p: &CMatrix| -> Result<f64> {
        let left = hat.matmul(p)?.sub(hat).frobenius_norm();
        let right = p.matmul(hat)?.sub(hat).frobenius_norm();
        Ok(left.max(right))
    };
    Ok(both(p_hat_l, &pair.p_alpha)?.max(both(p_hat_r, &pair.p_beta)?))
}

/// Relative reconstruction residuals on the verification grid; pole
/// collisions move to the next grid point.
fn reconstruction_samples(
    f: &Realization,
    f_l: &Realization,
    f_r: &Realization,
    count: usize,
) -> Result<Vec<SampleResidual>> {
    let mut samples = Vec::with_capacity(count);
    let mut j = 0;
    while samples.len() < count && j < count + 100 {
        let z = grid_point(j);
        j += 1;
        let fv = match f.eval(z) {
            Ok(m) => m,
            Err(Error::Pole { .. }) => continue,
            Err(e) => return Err(e),
        };
        let lv = match f_l.eval(z) {
            Ok(m) => m,
            Err(Error::Pole { .. }) => continue,
            Err(e) => return Err(e),
        };
        let rv = match f_r.eval(z) {
            Ok(m) => m,
            Err(Error::Pole { .. }) => continue,
            Err(e) => return Err(e),
        };
        let residual = linalg::rel_diff(&lv.kron(&rv), &fv);
        samples.push(SampleResidual { z, residual });
    }
    if samples.len() < count {
        return Err(Error::NoConvergence {
            what: "sample grid selection",
        });
    }
    Ok(samples)
}

/// Projections found by the eigenvalue-subset search, plus the
/// complementary basis that realizes them.
#[derive(Clone, Debug)]
pub struct FoundProjections {
    pub pair: SupportingProjectionPair,
    /// Columns: the `A`-invariant basis followed by the `A^x`-invariant
    /// basis. The coordinate transformation of the splitting is its
    /// inverse.
    pub basis: CMatrix,
}

impl FoundProjections {
    /// `T` with `Π_α = T^{-1} diag(I_α, 0) T`, namely `basis^{-1}`.
    pub fn transformation(&self) -> Result<CMatrix> {
        linalg::inverse(&self.basis)
    }
}

/// Search for supporting projections satisfying the invariance conditions
/// for `(A, A^x)`: enumerate size-`alpha` eigenvalue subsets of `A`
/// against size-`beta` eigenvalue subsets of `A^x`, in lexicographic order
/// over eigenvalues sorted by descending real then imaginary part, and
/// keep the first pair whose combined basis is complementary (condition
/// proxy below [`COMPLEMENT_COND_CAP`]) and passes the projection algebra
/// and subspace-condition checks.
///
/// Both spectra must be simple: a pairwise gap at or below
/// [`EIGENVALUE_GAP`] is rejected. Exhausting every subset pair yields the
/// no-admissible-pair signal.
pub fn find_supporting_projections(
    a: &CMatrix,
    a_times: &CMatrix,
    alpha: usize,
    beta: usize,
) -> Result<FoundProjections> {
    find_impl(a, a_times, alpha, beta, false)
}

/// Sequential variant of [`find_supporting_projections`], kept for
/// benchmarking against the parallel path; the result is identical.
pub fn find_supporting_projections_seq(
    a: &CMatrix,
    a_times: &CMatrix,
    alpha: usize,
    beta: usize,
) -> Result<FoundProjections> {
    find_impl(a, a_times, alpha, beta, true)
}

fn find_impl(
    a: &CMatrix,
    a_times: &CMatrix,
    alpha: usize,
    beta: usize,
    sequential: bool,
) -> Result<FoundProjections> {
    let n = alpha + beta;
    if !a.is_square() || a.rows() != n || !a_times.is_square() || a_times.rows() != n {
        return Err(dim_mismatch(
            "find_supporting_projections",
            format!(
                "matrices are {}x{} and {}x{}, expected {n}x{n}",
                a.rows(),
                a.cols(),
                a_times.rows(),
                a_times.cols()
            ),
        ));
    }
    if n == 0 {
        return Ok(FoundProjections {
            pair: SupportingProjectionPair::new(CMatrix::zeros(0, 0), CMatrix::zeros(0, 0), 0, 0)?,
            basis: CMatrix::identity(0),
        });
    }

    // the simple-spectrum precondition applies to degenerate splits too:
    // a repeated spectrum means the state carries an inflated block whose
    // inner tensor structure this search cannot see
    let eig_a = linalg::eigen(a)?;
    let eig_ax = linalg::eigen(a_times)?;
    for values in [&eig_a.values, &eig_ax.values] {
        if let Some(gap) = min_pairwise_gap(values) {
            if gap <= EIGENVALUE_GAP {
                return Err(Error::RepeatedEigenvalues { min_gap: gap });
            }
        }
    }

    // degenerate splits have a canonical answer
    if alpha == 0 || beta == 0 {
        let (p_alpha, p_beta) = if alpha == 0 {
            (CMatrix::zeros(n, n), CMatrix::identity(n))
        } else {
            (CMatrix::identity(n), CMatrix::zeros(n, n))
        };
        return Ok(FoundProjections {
            pair: SupportingProjectionPair::new(p_alpha, p_beta, alpha, beta)?,
            basis: CMatrix::identity(n),
        });
    }

    let subsets_a = combinations(n, alpha);
    let subsets_b = combinations(n, beta);
    let total = subsets_a.len() * subsets_b.len();
    let candidate = |idx: usize| -> Option<FoundProjections> {
        let sa = &subsets_a[idx / subsets_b.len()];
        let sb = &subsets_b[idx % subsets_b.len()];
        admissible_pair(
            &eig_a.vectors,
            &eig_ax.vectors,
            sa,
            sb,
            a,
            a_times,
            alpha,
            beta,
        )
    };
    let found = if sequential {
        exec::find_first_indexed_seq(total, candidate)
    } else {
        exec::find_first_indexed(total, candidate)
    };
    found.ok_or(Error::NoAdmissiblePair { pairs_tried: total })
}

#[allow(clippy::too_many_arguments)]
fn admissible_pair(
    vecs_a: &CMatrix,
    vecs_ax: &CMatrix,
    subset_a: &[usize],
    subset_b: &[usize],
    a: &CMatrix,
    a_times: &CMatrix,
    alpha: usize,
    beta: usize,
) -> Option<FoundProjections> {
    let n = alpha + beta;
    let mut basis = CMatrix::zeros(n, n);
    for (col, &k) in subset_a.iter().enumerate() {
        for i in 0..n {
            basis[(i, col)] = vecs_a[(i, k)];
        }
    }
    for (col, &k) in subset_b.iter().enumerate() {
        for i in 0..n {
            basis[(i, alpha + col)] = vecs_ax[(i, k)];
        }
    }
    let lu = linalg::Lu::new(&basis).ok()?;
    let basis_inv = lu.solve(&CMatrix::identity(n)).ok()?;
    if basis.frobenius_norm() * basis_inv.frobenius_norm() > COMPLEMENT_COND_CAP {
        return None;
    }
    // oblique projections onto each subspace along the other
    let d_alpha = block_diag(&[&CMatrix::identity(alpha), &CMatrix::zeros(beta, beta)]);
    let d_beta = block_diag(&[&CMatrix::zeros(alpha, alpha), &CMatrix::identity(beta)]);
    let p_alpha = basis.matmul(&d_alpha).ok()?.matmul(&basis_inv).ok()?;
    let p_beta = basis.matmul(&d_beta).ok()?.matmul(&basis_inv).ok()?;
    let pair = SupportingProjectionPair::new(p_alpha, p_beta, alpha, beta).ok()?;
    let (r1, r2) = subspace_condition_residual(a, a_times, &pair);
    if r1.max(r2) > SUBSPACE_TOL {
        return None;
    }
    Some(FoundProjections { pair, basis })
}

fn min_pairwise_gap(values: &[Complex64]) -> Option<f64> {
    let mut gap: Option<f64> = None;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let d = (values[i] - values[j]).norm();
            gap = Some(match gap {
                None => d,
                Some(g) => g.min(d),
            });
        }
    }
    gap
}

/// All size-`k` index subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let needed = k - current.len();
        for i in start..=n - needed {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Rescale a realization with scalar `D = c·I` to `D = I`, dividing `C`
/// by `c`; returns the normalized realization and the extracted `c`.
pub fn scaling_normalize(r: &Realization) -> Result<(Realization, Complex64)> {
    let d = r.d();
    if !d.is_square() || d.rows() == 0 {
        return Err(dim_mismatch(
            "scaling_normalize",
            format!("D is {}x{}", d.rows(), d.cols()),
        ));
    }
    let m = d.rows();
    let c = d[(0, 0)];
    let mut off_diag: f64 = 0.0;
    let mut spread: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            if i == j {
                spread = spread.max((d[(i, i)] - c).norm());
            } else {
                off_diag = off_diag.max(d[(i, j)].norm());
            }
        }
    }
    if off_diag > 1e-10 || spread > 1e-10 {
        return Err(Error::NotScalarD { off_diag, spread });
    }
    if c.norm() <= linalg::PIVOT_REL_THRESHOLD {
        return Err(Error::Singular {
            pivot: c.norm(),
            threshold: linalg::PIVOT_REL_THRESHOLD,
        });
    }
    let inv_c = Complex64::new(1.0, 0.0) / c;
    let normalized = Realization::new(
        r.a().clone(),
        r.b().clone(),
        r.c().scale(inv_c),
        CMatrix::identity(m),
    )?;
    Ok((normalized, c))
}

/// Synthetic factorization instance with planted factors: tensor two
/// `D = I` realizations, scramble the state coordinates with a random
/// well-conditioned `T`, and package the problem together with `T` and the
/// originals. Drives round-trip verification and the CLI fixture
/// generator.
pub struct PlantedInstance {
    pub f_l0: Realization,
    pub f_r0: Realization,
    pub problem: FactorizationProblem,
    pub t: CMatrix,
}

pub fn planted_instance(rng: &mut crate::rng::SplitMix64, dims: FactorDims) -> PlantedInstance {
    let f_l0 = crate::rng::random_realization(rng, dims.n_l, dims.m_l, dims.m_l, true)
        .expect("square factor");
    let f_r0 = crate::rng::random_realization(rng, dims.n_r, dims.m_r, dims.m_r, true)
        .expect("square factor");
    let bold = crate::tensor::tensor_product(&f_l0, &f_r0);
    let bold_inv = bold.inverse().expect("D = I is invertible");
    let t = crate::rng::well_conditioned(rng, dims.total_state(), 1e4);
    let f = bold.conjugate(&t).expect("T is nonsingular");
    let f_inv = bold_inv.conjugate(&t).expect("T is nonsingular");
    let u = crate::rng::random_unit_vector(rng, dims.m_r);
    let v = crate::rng::random_unit_vector(rng, dims.m_l);
    PlantedInstance {
        f_l0,
        f_r0,
        problem: FactorizationProblem {
            f,
            f_inv,
            dims,
            u,
            v,
        },
        t,
    }
}
