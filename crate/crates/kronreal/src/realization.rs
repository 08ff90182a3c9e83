//! Realizations of matrix-valued rational functions and the single-function
//! calculus: evaluation, cascade products, inverses, coordinate changes, and
//! a rank-based degree probe.

use num_complex::Complex64;

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{self, block2x2, CMatrix};

/// State-space realization of `F(z) = D + C (zI - A)^{-1} B`.
///
/// `A` is `n x n`, `B` is `n x m_in`, `C` is `m_out x n`, `D` is
/// `m_out x m_in`. A state dimension of zero is a first-class citizen: it
/// carries constant functions, which show up as identity factors and as
/// deflation edge cases.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    a: CMatrix,
    b: CMatrix,
    c: CMatrix,
    d: CMatrix,
}

impl Realization {
    pub fn new(a: CMatrix, b: CMatrix, c: CMatrix, d: CMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(dim_mismatch(
                "realization",
                format!("A is {}x{}", a.rows(), a.cols()),
            ));
        }
        if b.rows() != a.rows() || c.cols() != a.rows() {
            return Err(dim_mismatch(
                "realization",
                format!(
                    "state blocks disagree: A is {0}x{0}, B has {1} rows, C has {2} cols",
                    a.rows(),
                    b.rows(),
                    c.cols()
                ),
            ));
        }
        if d.rows() != c.rows() || d.cols() != b.cols() {
            return Err(dim_mismatch(
                "realization",
                format!(
                    "D is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    c.rows(),
                    b.cols()
                ),
            ));
        }
        Ok(Self { a, b, c, d })
    }

    /// Constant function `F(z) = D` (state dimension zero).
    pub fn constant(d: CMatrix) -> Self {
        let (p, m) = (d.rows(), d.cols());
        Self {
            a: CMatrix::zeros(0, 0),
            b: CMatrix::zeros(0, m),
            c: CMatrix::zeros(p, 0),
            d,
        }
    }

    /// Constant identity function of size `m`.
    pub fn identity(m: usize) -> Self {
        Self::constant(CMatrix::identity(m))
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }
    pub fn b(&self) -> &CMatrix {
        &self.b
    }
    pub fn c(&self) -> &CMatrix {
        &self.c
    }
    pub fn d(&self) -> &CMatrix {
        &self.d
    }

    pub fn state_dim(&self) -> usize {
        self.a.rows()
    }

    pub fn input_dim(&self) -> usize {
        self.d.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.d.rows()
    }

    pub fn is_io_square(&self) -> bool {
        self.input_dim() == self.output_dim()
    }

    /// Largest entrywise difference across the four blocks.
    pub fn max_abs_diff(&self, other: &Realization) -> f64 {
        self.a
            .max_abs_diff(&other.a)
            .max(self.b.max_abs_diff(&other.b))
            .max(self.c.max_abs_diff(&other.c))
            .max(self.d.max_abs_diff(&other.d))
    }

    /// `zI - A`.
    fn resolvent_matrix(&self, z: Complex64) -> CMatrix {
        let n = self.state_dim();
        let mut m = self.a.neg();
        for i in 0..n {
            m[(i, i)] += z;
        }
        m
    }

    /// Evaluate `F(z) = D + C (zI - A)^{-1} B`.
    ///
    /// A singularity signal from the resolvent solve is reported as a pole
    /// at `z`; no eigenvalue precomputation happens here.
    pub fn eval(&self, z: Complex64) -> Result<CMatrix> {
        let m = self.resolvent_matrix(z);
        let x = linalg::solve(&m, &self.b).map_err(|e| match e {
            Error::Singular { .. } => Error::Pole { z },
            other => other,
        })?;
        Ok(self.d.add(&self.c.matmul(&x)?))
    }

    /// Series (cascade) product: the realization of `F_self · F_rhs`,
    /// with state matrix `[[A_l, B_l C_r], [0, A_r]]` and state dimension
    /// `n_l + n_r`.
    pub fn series(&self, rhs: &Realization) -> Result<Realization> {
        if self.input_dim() != rhs.output_dim() {
            return Err(dim_mismatch(
                "series",
                format!(
                    "left factor takes {} inputs, right factor yields {} outputs",
                    self.input_dim(),
                    rhs.output_dim()
                ),
            ));
        }
        let a = block2x2(
            &self.a,
            &self.b.matmul(&rhs.c)?,
            &CMatrix::zeros(rhs.state_dim(), self.state_dim()),
            &rhs.a,
        )?;
        let b = self.b.matmul(&rhs.d)?.vcat(&rhs.b)?;
        let c = self.c.hcat(&self.d.matmul(&rhs.c)?)?;
        let d = self.d.matmul(&rhs.d)?;
        Realization::new(a, b, c, d)
    }

    /// Realization of `F^{-1}`: `(A - B D^{-1} C, -B D^{-1}, D^{-1} C, D^{-1})`.
    pub fn inverse(&self) -> Result<Realization> {
        if !self.d.is_square() {
            return Err(dim_mismatch(
                "inverse",
                format!("D is {}x{}", self.d.rows(), self.d.cols()),
            ));
        }
        let dinv = linalg::inverse(&self.d)?;
        let bdinv = self.b.matmul(&dinv)?;
        let a = self.a.sub(&bdinv.matmul(&self.c)?);
        Realization::new(a, bdinv.neg(), dinv.matmul(&self.c)?, dinv)
    }

    /// State coordinate change `(T^{-1} A T, T^{-1} B, C T, D)`; the
    /// transfer function is untouched.
    pub fn conjugate(&self, t: &CMatrix) -> Result<Realization> {
        if !t.is_square() || t.rows() != self.state_dim() {
            return Err(dim_mismatch(
                "conjugate",
                format!(
                    "T is {}x{}, state dimension is {}",
                    t.rows(),
                    t.cols(),
                    self.state_dim()
                ),
            ));
        }
        let lu = linalg::Lu::new(t)?;
        let a = lu.solve(&self.a.matmul(t)?)?;
        let b = lu.solve(&self.b)?;
        let c = self.c.matmul(t)?;
        Realization::new(a, b, c, self.d.clone())
    }

    /// Minimum of the controllability and observability ranks, from the
    /// Krylov block matrices `[B, AB, ..., A^{n-1}B]` and its dual, at a
    /// rank tolerance of `1e-9` relative to the Frobenius norm.
    ///
    /// Reports ranks only; no minimality claim is attached to the result.
    pub fn degree_probe(&self) -> usize {
        let n = self.state_dim();
        if n == 0 {
            return 0;
        }
        let mut ctrb = self.b.clone();
        let mut block = self.b.clone();
        for _ in 1..n {
            block = self.a.matmul(&block).expect("conformable");
            ctrb = ctrb.hcat(&block).expect("conformable");
        }
        let mut obsv = self.c.clone();
        let mut oblock = self.c.clone();
        for _ in 1..n {
            oblock = oblock.matmul(&self.a).expect("conformable");
            obsv = obsv.vcat(&oblock).expect("conformable");
        }
        linalg::rank(&ctrb, 1e-9).min(linalg::rank(&obsv, 1e-9))
    }

    /// The realization written as the single array `[[A, B], [C, D]]`.
    pub fn array(&self) -> CMatrix {
        block2x2(&self.a, &self.b, &self.c, &self.d).expect("conformable blocks")
    }
}

/// Evaluate the cascade `F_l(z_l) · F_r(z_r)` in two independent variables
/// through the block resolvent `diag(z_l I - A_l, z_r I - A_r)` coupled by
/// the cascade state matrix.
pub fn eval_two_var(
    rl: &Realization,
    rr: &Realization,
    z_l: Complex64,
    z_r: Complex64,
) -> Result<CMatrix> {
    if rl.input_dim() != rr.output_dim() {
        return Err(dim_mismatch(
            "eval_two_var",
            format!(
                "left factor takes {} inputs, right factor yields {} outputs",
                rl.input_dim(),
                rr.output_dim()
            ),
        ));
    }
    eval_cascade_two_var(
        rl.a(),
        &rl.b().matmul(rr.c())?,
        rr.a(),
        &rl.b().matmul(rr.d())?,
        rr.b(),
        rl.c(),
        &rl.d().matmul(rr.c())?,
        &rl.d().matmul(rr.d())?,
        z_l,
        z_r,
    )
}

/// Shared two-variable cascade evaluation on explicit blocks
/// `A = [[a1, a12], [0, a2]]`, `B = [b1; b2]`, `C = [c1, c2]`.
///
/// Exploits the block triangular structure so each pole signal names the
/// variable that caused it.
#[allow(clippy::too_many_arguments)]
pub(crate) fn eval_cascade_two_var(
    a1: &CMatrix,
    a12: &CMatrix,
    a2: &CMatrix,
    b1: &CMatrix,
    b2: &CMatrix,
    c1: &CMatrix,
    c2: &CMatrix,
    d: &CMatrix,
    z_l: Complex64,
    z_r: Complex64,
) -> Result<CMatrix> {
    let pole = |e: Error, z: Complex64| match e {
        Error::Singular { .. } => Error::Pole { z },
        other => other,
    };
    let mut m2 = a2.neg();
    for i in 0..m2.rows() {
        m2[(i, i)] += z_r;
    }
    let x2 = linalg::solve(&m2, b2).map_err(|e| pole(e, z_r))?;
    let mut m1 = a1.neg();
    for i in 0..m1.rows() {
        m1[(i, i)] += z_l;
    }
    let rhs1 = b1.add(&a12.matmul(&x2)?);
    let x1 = linalg::solve(&m1, &rhs1).map_err(|e| pole(e, z_l))?;
    Ok(d.add(&c1.matmul(&x1)?).add(&c2.matmul(&x2)?))
}

/// Realization of `(F_l F_r)^{-1}` assembled directly from the inverse
/// factors:
///
/// ```text
/// [ A_l^x            0      |  B_l^x          ]
/// [ B_r^x C_l^x      A_r^x  |  B_r^x D_l^{-1} ]
/// [ ------------------------+---------------- ]
/// [ D_r^{-1} C_l^x   C_r^x  |  D_r^{-1} D_l^{-1} ]
/// ```
pub fn inverse_product(rl: &Realization, rr: &Realization) -> Result<Realization> {
    if rl.input_dim() != rr.output_dim() || rl.output_dim() != rr.input_dim() {
        return Err(dim_mismatch(
            "inverse_product",
            format!(
                "factors are {}x{} and {}x{}",
                rl.output_dim(),
                rl.input_dim(),
                rr.output_dim(),
                rr.input_dim()
            ),
        ));
    }
    let lx = rl.inverse()?;
    let rx = rr.inverse()?;
    let a = block2x2(
        lx.a(),
        &CMatrix::zeros(lx.state_dim(), rx.state_dim()),
        &rx.b().matmul(lx.c())?,
        rx.a(),
    )?;
    let b = lx.b().vcat(&rx.b().matmul(lx.d())?)?;
    let c = rx.d().matmul(lx.c())?.hcat(rx.c())?;
    let d = rx.d().matmul(lx.d())?;
    Realization::new(a, b, c, d)
}

/// Largest entrywise gap between the cascade realization array of
/// `F_l F_r` and the product of the two extended arrays
/// `[[A_l, 0, B_l], [0, I, 0], [C_l, 0, D_l]] ·
///  [[I, 0, 0], [0, A_r, B_r], [0, C_r, D_r]]`.
pub fn product_array_residual(rl: &Realization, rr: &Realization) -> Result<f64> {
    let lhs = rl.series(rr)?.array();
    let (nl, nr) = (rl.state_dim(), rr.state_dim());
    let f1 = CMatrix::from_blocks(&[
        &[rl.a(), &CMatrix::zeros(nl, nr), rl.b()],
        &[
            &CMatrix::zeros(nr, nl),
            &CMatrix::identity(nr),
            &CMatrix::zeros(nr, rl.input_dim()),
        ],
        &[rl.c(), &CMatrix::zeros(rl.output_dim(), nr), rl.d()],
    ])?;
    let f2 = CMatrix::from_blocks(&[
        &[
            &CMatrix::identity(nl),
            &CMatrix::zeros(nl, nr),
            &CMatrix::zeros(nl, rr.input_dim()),
        ],
        &[&CMatrix::zeros(nr, nl), rr.a(), rr.b()],
        &[&CMatrix::zeros(rr.output_dim(), nl), rr.c(), rr.d()],
    ])?;
    Ok(f1.matmul(&f2)?.max_abs_diff(&lhs))
}
