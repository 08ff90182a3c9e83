//! Tensor-product layer: inflation, the tensor-product realization, its
//! inverse, deflation through unit vectors, and the multi-factor fold.
//!
//! Inflation replaces the blocks of a realization by `M ⊗ I_p` (left
//! factor) or `I_m ⊗ M` (right factor). The point of the exercise: with
//! `p = p_r` and `m = m_l`, the tensor product `F_l ⊗ F_r` equals the
//! ordinary product of the inflated functions, so the classical cascade
//! formulas apply verbatim. [`tensor_product`] builds that cascade array
//! directly; [`proposition_residual`] keeps the claimed equality with the
//! inflated ordinary product falsifiable instead of definitional.

use num_complex::Complex64;

use crate::error::{dim_mismatch, Result};
use crate::linalg::{block2x2, CMatrix};
use crate::realization::{eval_cascade_two_var, Realization};

/// Which factor of a tensor product a matrix sits in, together with the
/// dimension of the identity it is inflated by (`p_r` on the left, `m_l`
/// on the right).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InflationSide {
    Left(usize),
    Right(usize),
}

impl InflationSide {
    pub fn factor_dim(&self) -> usize {
        match *self {
            InflationSide::Left(p) | InflationSide::Right(p) => p,
        }
    }
}

fn check_factor_dim(op: &'static str, side: InflationSide) -> Result<()> {
    if side.factor_dim() == 0 {
        return Err(dim_mismatch(op, "inflation dimension must be at least 1"));
    }
    Ok(())
}

/// Inflate one matrix: `M ⊗ I_p` (left) or `I_m ⊗ M` (right).
pub fn inflate_matrix(m: &CMatrix, side: InflationSide) -> CMatrix {
    match side {
        InflationSide::Left(p) => m.kron(&CMatrix::identity(p)),
        InflationSide::Right(q) => CMatrix::identity(q).kron(m),
    }
}

/// Inflate a whole realization blockwise; evaluation becomes
/// `F(z) ⊗ I_p` (left) or `I_m ⊗ F(z)` (right).
pub fn inflate(r: &Realization, side: InflationSide) -> Result<Realization> {
    check_factor_dim("inflate", side)?;
    Realization::new(
        inflate_matrix(r.a(), side),
        inflate_matrix(r.b(), side),
        inflate_matrix(r.c(), side),
        inflate_matrix(r.d(), side),
    )
}

/// Inflated blocks of a factor pair, left factor by `I_{p_r}`, right
/// factor by `I_{m_l}`.
struct BoldParts {
    al: CMatrix,
    bl: CMatrix,
    cl: CMatrix,
    dl: CMatrix,
    ar: CMatrix,
    br: CMatrix,
    cr: CMatrix,
    dr: CMatrix,
}

impl BoldParts {
    fn of(rl: &Realization, rr: &Realization) -> Self {
        let left = InflationSide::Left(rr.output_dim());
        let right = InflationSide::Right(rl.input_dim());
        Self {
            al: inflate_matrix(rl.a(), left),
            bl: inflate_matrix(rl.b(), left),
            cl: inflate_matrix(rl.c(), left),
            dl: inflate_matrix(rl.d(), left),
            ar: inflate_matrix(rr.a(), right),
            br: inflate_matrix(rr.b(), right),
            cr: inflate_matrix(rr.c(), right),
            dr: inflate_matrix(rr.d(), right),
        }
    }

    /// Same blocks built from the inverse realizations, for the inverse of
    /// the tensor product.
    fn of_inverses(rl: &Realization, rr: &Realization) -> Result<Self> {
        Ok(Self::of(&rl.inverse()?, &rr.inverse()?))
    }
}

fn mul(x: &CMatrix, y: &CMatrix) -> CMatrix {
    x.matmul(y).expect("conformable block product")
}

/// Realization of `F_l ⊗ F_r` with state dimension `n_l·p_r + m_l·n_r`:
///
/// ```text
/// [ A_l⊗I   (B_l⊗I)(I⊗C_r) | (B_l⊗I)(I⊗D_r) ]
/// [ 0        I⊗A_r          | I⊗B_r           ]
/// [ -------------------------+---------------- ]
/// [ C_l⊗I   (D_l⊗I)(I⊗C_r) | D_l ⊗ D_r       ]
/// ```
pub fn tensor_product(rl: &Realization, rr: &Realization) -> Realization {
    let p = BoldParts::of(rl, rr);
    let a = block2x2(
        &p.al,
        &mul(&p.bl, &p.cr),
        &CMatrix::zeros(p.ar.rows(), p.al.cols()),
        &p.ar,
    )
    .expect("conformable blocks");
    let b = mul(&p.bl, &p.dr).vcat(&p.br).expect("conformable blocks");
    let c = p.cl.hcat(&mul(&p.dl, &p.cr)).expect("conformable blocks");
    // the D block is the plain Kronecker product, which coincides with the
    // inflated product entry for entry
    let d = rl.d().kron(rr.d());
    Realization::new(a, b, c, d).expect("conformable blocks")
}

/// Two-variable tensor evaluation through the split resolvent
/// `diag(z_l I - A_l⊗I, z_r I - I⊗A_r)`; equals
/// `F_l(z_l) ⊗ F_r(z_r)`.
pub fn tensor_eval_two_var(
    rl: &Realization,
    rr: &Realization,
    z_l: Complex64,
    z_r: Complex64,
) -> Result<CMatrix> {
    let p = BoldParts::of(rl, rr);
    eval_cascade_two_var(
        &p.al,
        &mul(&p.bl, &p.cr),
        &p.ar,
        &mul(&p.bl, &p.dr),
        &p.br,
        &p.cl,
        &mul(&p.dl, &p.cr),
        &rl.d().kron(rr.d()),
        z_l,
        z_r,
    )
}

/// Largest entrywise gap between [`tensor_product`] and the series product
/// of the two inflations. The two constructions multiply the same numbers
/// in the same order, so this stays at rounding level (below 1e-12) for
/// any input.
pub fn proposition_residual(rl: &Realization, rr: &Realization) -> f64 {
    let direct = tensor_product(rl, rr);
    let left = inflate(rl, InflationSide::Left(rr.output_dim().max(1)));
    let right = inflate(rr, InflationSide::Right(rl.input_dim().max(1)));
    match (left, right) {
        (Ok(l), Ok(r)) => {
            let via_product = l.series(&r).expect("inflations are conformable");
            // degenerate zero-dimension factors make the max(1) fallback
            // unreachable in practice; dimensions then agree exactly
            direct.max_abs_diff(&via_product)
        }
        _ => f64::INFINITY,
    }
}

/// Realization of `(F_l ⊗ F_r)^{-1}`, assembled from the inflated inverse
/// blocks:
///
/// ```text
/// [ A_l^x⊗I              0       | B_l^x⊗I            ]
/// [ (I⊗B_r^x)(C_l^x⊗I)  I⊗A_r^x | (I⊗B_r^x)(D_l^{-1}⊗I) ]
/// [ ------------------------------+------------------- ]
/// [ (I⊗D_r^{-1})(C_l^x⊗I)  I⊗C_r^x | (I⊗D_r^{-1})(D_l^{-1}⊗I) ]
/// ```
///
/// Both `D` blocks must be square and nonsingular.
pub fn tensor_inverse(rl: &Realization, rr: &Realization) -> Result<Realization> {
    let p = BoldParts::of_inverses(rl, rr)?;
    let a = block2x2(
        &p.al,
        &CMatrix::zeros(p.al.rows(), p.ar.cols()),
        &mul(&p.br, &p.cl),
        &p.ar,
    )?;
    let b = p.bl.vcat(&mul(&p.br, &p.dl))?;
    let c = mul(&p.dr, &p.cl).hcat(&p.cr)?;
    let d = mul(&p.dr, &p.dl);
    Realization::new(a, b, c, d)
}

/// Largest entrywise gap between the tensor (or inverse-tensor) realization
/// array and the product of its two extended-array factors.
///
/// `inverted = false` checks
/// `R = [[𝐀_l,0,𝐁_l],[0,I,0],[𝐂_l,0,𝐃_l]] · [[I,0,0],[0,𝐀_r,𝐁_r],[0,𝐂_r,𝐃_r]]`,
/// and `inverted = true` the mirrored factorization of the inverse array.
pub fn factored_array_residual(rl: &Realization, rr: &Realization, inverted: bool) -> Result<f64> {
    let (lhs, p) = if inverted {
        (tensor_inverse(rl, rr)?.array(), BoldParts::of_inverses(rl, rr)?)
    } else {
        (tensor_product(rl, rr).array(), BoldParts::of(rl, rr))
    };
    let alpha = p.al.rows();
    let beta = p.ar.rows();
    let left_factor: CMatrix;
    let right_factor: CMatrix;
    if inverted {
        left_factor = CMatrix::from_blocks(&[
            &[
                &CMatrix::identity(alpha),
                &CMatrix::zeros(alpha, beta),
                &CMatrix::zeros(alpha, p.br.cols()),
            ],
            &[&CMatrix::zeros(beta, alpha), &p.ar, &p.br],
            &[&CMatrix::zeros(p.cr.rows(), alpha), &p.cr, &p.dr],
        ])?;
        right_factor = CMatrix::from_blocks(&[
            &[&p.al, &CMatrix::zeros(alpha, beta), &p.bl],
            &[
                &CMatrix::zeros(beta, alpha),
                &CMatrix::identity(beta),
                &CMatrix::zeros(beta, p.bl.cols()),
            ],
            &[&p.cl, &CMatrix::zeros(p.cl.rows(), beta), &p.dl],
        ])?;
    } else {
        left_factor = CMatrix::from_blocks(&[
            &[&p.al, &CMatrix::zeros(alpha, beta), &p.bl],
            &[
                &CMatrix::zeros(beta, alpha),
                &CMatrix::identity(beta),
                &CMatrix::zeros(beta, p.bl.cols()),
            ],
            &[&p.cl, &CMatrix::zeros(p.cl.rows(), beta), &p.dl],
        ])?;
        right_factor = CMatrix::from_blocks(&[
            &[
                &CMatrix::identity(alpha),
                &CMatrix::zeros(alpha, beta),
                &CMatrix::zeros(alpha, p.br.cols()),
            ],
            &[&CMatrix::zeros(beta, alpha), &p.ar, &p.br],
            &[&CMatrix::zeros(p.cr.rows(), alpha), &p.cr, &p.dr],
        ])?;
    }
    Ok(left_factor.matmul(&right_factor)?.max_abs_diff(&lhs))
}

/// Compress an inflated matrix back through a unit vector:
/// `(I_s ⊗ w*) M (I_q ⊗ w)` on the left side, `(w* ⊗ I_s) M (w ⊗ I_q)` on
/// the right. When `M` really is `X ⊗ I_p` (or `I_m ⊗ X`) this recovers
/// `X` for any unit `w`; for other `M` it is still the stated compression.
pub fn deflate(mbold: &CMatrix, side: InflationSide, w: &CMatrix) -> Result<CMatrix> {
    check_factor_dim("deflate", side)?;
    let p = side.factor_dim();
    if w.rows() != p || w.cols() != 1 {
        return Err(dim_mismatch(
            "deflate",
            format!("w is {}x{}, expected {p}x1", w.rows(), w.cols()),
        ));
    }
    let norm = w.vec_norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(crate::Error::NotUnitNorm { norm });
    }
    if !mbold.rows().is_multiple_of(p) || !mbold.cols().is_multiple_of(p) {
        return Err(dim_mismatch(
            "deflate",
            format!(
                "{}x{} matrix is not divisible by the factor dimension {p}",
                mbold.rows(),
                mbold.cols()
            ),
        ));
    }
    let s = mbold.rows() / p;
    let q = mbold.cols() / p;
    let (left, right) = match side {
        InflationSide::Left(_) => (
            CMatrix::identity(s).kron(&w.adjoint()),
            CMatrix::identity(q).kron(w),
        ),
        InflationSide::Right(_) => (
            w.adjoint().kron(&CMatrix::identity(s)),
            w.kron(&CMatrix::identity(q)),
        ),
    };
    left.matmul(mbold)?.matmul(&right)
}

/// Deflate all four blocks of an inflated realization, recovering the
/// original quadruple; the per-block identity dimensions are read off the
/// block shapes.
pub fn deflate_realization(
    rbold: &Realization,
    side: InflationSide,
    w: &CMatrix,
) -> Result<Realization> {
    Realization::new(
        deflate(rbold.a(), side, w)?,
        deflate(rbold.b(), side, w)?,
        deflate(rbold.c(), side, w)?,
        deflate(rbold.d(), side, w)?,
    )
}

/// Left fold of [`tensor_product`] over at least one factor.
pub fn multi_tensor(factors: &[Realization]) -> Result<Realization> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| dim_mismatch("multi_tensor", "at least one factor is required"))?;
    let mut acc = first.clone();
    for f in rest {
        acc = tensor_product(&acc, f);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rel_diff;
    use crate::rng::{grid_point, random_matrix, random_realization, random_unit_vector, SplitMix64};

    #[test]
    fn inflate_by_one_is_the_identity() {
        let mut rng = SplitMix64::new(5);
        let r = random_realization(&mut rng, 2, 3, 2, false).unwrap();
        let left = inflate(&r, InflationSide::Left(1)).unwrap();
        assert_eq!(r.max_abs_diff(&left), 0.0);
        let right = inflate(&r, InflationSide::Right(1)).unwrap();
        assert_eq!(r.max_abs_diff(&right), 0.0);
    }

    #[test]
    fn inflation_evaluates_to_kron_with_identity() {
        let mut rng = SplitMix64::new(6);
        let r = random_realization(&mut rng, 3, 2, 2, false).unwrap();
        for j in 0..6 {
            let z = grid_point(j);
            let f = r.eval(z).unwrap();
            let left = inflate(&r, InflationSide::Left(3)).unwrap().eval(z).unwrap();
            assert!(rel_diff(&left, &f.kron(&CMatrix::identity(3))) <= 1e-10);
            let right = inflate(&r, InflationSide::Right(2)).unwrap().eval(z).unwrap();
            assert!(rel_diff(&right, &CMatrix::identity(2).kron(&f)) <= 1e-10);
        }
    }

    #[test]
    fn tensor_state_dimension_formula() {
        let mut rng = SplitMix64::new(7);
        let rl = random_realization(&mut rng, 3, 2, 4, false).unwrap();
        let rr = random_realization(&mut rng, 2, 3, 5, false).unwrap();
        let t = tensor_product(&rl, &rr);
        assert_eq!(t.state_dim(), 3 * 5 + 2 * 2);
        assert_eq!(t.output_dim(), 4 * 5);
        assert_eq!(t.input_dim(), 2 * 3);
    }

    #[test]
    fn tensor_of_constants_is_constant_kron() {
        let mut rng = SplitMix64::new(8);
        let dl = random_matrix(&mut rng, 2, 3);
        let dr = random_matrix(&mut rng, 3, 2);
        let t = tensor_product(
            &Realization::constant(dl.clone()),
            &Realization::constant(dr.clone()),
        );
        assert_eq!(t.state_dim(), 0);
        assert_eq!(t.d().max_abs_diff(&dl.kron(&dr)), 0.0);
    }

    #[test]
    fn tensor_evaluates_to_kron_of_factors() {
        for seed in 0..5u64 {
            let mut rng = SplitMix64::new(seed);
            let rl = random_realization(&mut rng, 2, 2, 3, false).unwrap();
            let rr = random_realization(&mut rng, 3, 2, 2, false).unwrap();
            let t = tensor_product(&rl, &rr);
            for j in 0..8 {
                let z = grid_point(j);
                let want = rl.eval(z).unwrap().kron(&rr.eval(z).unwrap());
                assert!(rel_diff(&t.eval(z).unwrap(), &want) <= 1e-9);
            }
        }
    }

    #[test]
    fn two_variable_tensor_evaluation() {
        let mut rng = SplitMix64::new(13);
        let rl = random_realization(&mut rng, 2, 3, 2, false).unwrap();
        let rr = random_realization(&mut rng, 3, 2, 2, false).unwrap();
        let (zl, zr) = (grid_point(1), grid_point(7));
        let got = tensor_eval_two_var(&rl, &rr, zl, zr).unwrap();
        let want = rl.eval(zl).unwrap().kron(&rr.eval(zr).unwrap());
        assert!(rel_diff(&got, &want) <= 1e-9);

        // diagonal specialization agrees with the one-variable realization
        let z = grid_point(4);
        let diag = tensor_eval_two_var(&rl, &rr, z, z).unwrap();
        let one = tensor_product(&rl, &rr).eval(z).unwrap();
        assert!(rel_diff(&diag, &one) <= 1e-10);

        // constant left factor pulls out as a Kronecker block
        let dl = random_matrix(&mut rng, 2, 2);
        let c = Realization::constant(dl.clone());
        let got = tensor_eval_two_var(&c, &rr, zl, zr).unwrap();
        assert!(rel_diff(&got, &dl.kron(&rr.eval(zr).unwrap())) <= 1e-10);
    }

    #[test]
    fn construction_equals_inflated_product() {
        // identity constants come out exactly equal
        assert_eq!(
            proposition_residual(&Realization::identity(2), &Realization::identity(3)),
            0.0
        );
        // scalar reciprocal factors
        let one_over_z = Realization::new(
            CMatrix::zeros(1, 1),
            CMatrix::from_real_rows(&[&[1.0]]),
            CMatrix::from_real_rows(&[&[1.0]]),
            CMatrix::zeros(1, 1),
        )
        .unwrap();
        assert!(proposition_residual(&one_over_z, &one_over_z) <= 1e-12);
        for seed in 0..10u64 {
            let mut rng = SplitMix64::new(seed);
            let rl = random_realization(&mut rng, 2, 3, 2, false).unwrap();
            let rr = random_realization(&mut rng, 1, 2, 3, false).unwrap();
            assert!(proposition_residual(&rl, &rr) <= 1e-12);
        }
    }

    #[test]
    fn tensor_inverse_of_identity_constants() {
        let t = tensor_inverse(&Realization::identity(2), &Realization::identity(2)).unwrap();
        assert_eq!(t.state_dim(), 0);
        assert!(t.d().max_abs_diff(&CMatrix::identity(4)) <= 1e-14);
    }

    #[test]
    fn tensor_inverse_inverts_pointwise_and_matches_inverse_of_tensor() {
        let mut rng = SplitMix64::new(19);
        let rl = crate::rng::random_realization_invertible_d(&mut rng, 2, 2);
        let rr = crate::rng::random_realization_invertible_d(&mut rng, 1, 3);
        let ti = tensor_inverse(&rl, &rr).unwrap();
        let t = tensor_product(&rl, &rr);
        let other = t.inverse().unwrap();
        let mut checked = 0;
        let mut j = 0;
        while checked < 12 && j < 120 {
            let z = grid_point(j);
            j += 1;
            let (iv, tv) = match (ti.eval(z), t.eval(z)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            assert!(iv.matmul(&tv).unwrap().max_abs_diff(&CMatrix::identity(6)) <= 1e-8);
            assert!(rel_diff(&iv, &other.eval(z).unwrap()) <= 1e-9);
            checked += 1;
        }
        assert!(checked >= 8);
    }

    #[test]
    fn extended_arrays_factor_the_tensor_arrays() {
        let mut rng = SplitMix64::new(25);
        let rl = random_realization(&mut rng, 2, 2, 3, false).unwrap();
        let rr = random_realization(&mut rng, 3, 3, 2, false).unwrap();
        assert!(factored_array_residual(&rl, &rr, false).unwrap() <= 1e-12);

        let constl = Realization::constant(random_matrix(&mut rng, 2, 3));
        let constr = Realization::constant(random_matrix(&mut rng, 1, 2));
        assert_eq!(factored_array_residual(&constl, &constr, false).unwrap(), 0.0);

        let sl = crate::rng::random_realization_invertible_d(&mut rng, 2, 2);
        let sr = crate::rng::random_realization_invertible_d(&mut rng, 3, 3);
        assert!(factored_array_residual(&sl, &sr, true).unwrap() <= 1e-12);
    }

    #[test]
    fn deflation_recovers_inflated_matrices() {
        let mut rng = SplitMix64::new(30);
        let m = random_matrix(&mut rng, 3, 2);

        // standard basis vector on the left side: exact recovery
        let e1 = CMatrix::basis_vector(4, 0);
        let got = deflate(
            &m.kron(&CMatrix::identity(4)),
            InflationSide::Left(4),
            &e1,
        )
        .unwrap();
        assert_eq!(got.max_abs_diff(&m), 0.0);

        // random unit vector on the right side
        let v = random_unit_vector(&mut rng, 3);
        let got = deflate(
            &CMatrix::identity(3).kron(&m),
            InflationSide::Right(3),
            &v,
        )
        .unwrap();
        assert!(got.max_abs_diff(&m) <= 1e-12);
    }

    #[test]
    fn deflation_of_a_generic_matrix_is_the_stated_compression() {
        let mut rng = SplitMix64::new(31);
        let mbold = random_matrix(&mut rng, 6, 4);
        let u = random_unit_vector(&mut rng, 2);
        let got = deflate(&mbold, InflationSide::Left(2), &u).unwrap();
        // explicit multiplication oracle
        let left = CMatrix::identity(3).kron(&u.adjoint());
        let right = CMatrix::identity(2).kron(&u);
        let want = left.matmul(&mbold).unwrap().matmul(&right).unwrap();
        assert_eq!(got.max_abs_diff(&want), 0.0);
    }

    #[test]
    fn deflation_rejects_bad_vectors_and_shapes() {
        let mut rng = SplitMix64::new(32);
        let m = random_matrix(&mut rng, 4, 4);
        let long = random_matrix(&mut rng, 2, 1);
        assert!(deflate(&m, InflationSide::Left(2), &long.scale(Complex64::new(3.0, 0.0))).is_err());
        let u = random_unit_vector(&mut rng, 3);
        assert!(deflate(&m, InflationSide::Left(3), &u).is_err());
    }

    #[test]
    fn deflate_realization_undoes_inflate() {
        let mut rng = SplitMix64::new(33);
        let r = random_realization(&mut rng, 2, 2, 3, false).unwrap();

        let e1 = CMatrix::basis_vector(3, 0);
        let infl = inflate(&r, InflationSide::Left(3)).unwrap();
        let back = deflate_realization(&infl, InflationSide::Left(3), &e1).unwrap();
        assert_eq!(back.max_abs_diff(&r), 0.0);

        let u = random_unit_vector(&mut rng, 4);
        let infl = inflate(&r, InflationSide::Right(4)).unwrap();
        let back = deflate_realization(&infl, InflationSide::Right(4), &u).unwrap();
        assert!(back.max_abs_diff(&r) <= 1e-12);
        for j in 0..6 {
            let z = grid_point(j);
            assert!(rel_diff(&back.eval(z).unwrap(), &r.eval(z).unwrap()) <= 1e-12);
        }
    }

    #[test]
    fn deflation_commutes_with_the_resolvent_of_an_inflation() {
        // compressing the inflated resolvent recovers the small resolvent,
        // which is what lets factor extraction work through projections
        let mut rng = SplitMix64::new(35);
        let a = random_matrix(&mut rng, 3, 3);
        let p = 2;
        let u = random_unit_vector(&mut rng, p);
        let z = grid_point(2);
        let small = {
            let mut m = a.neg();
            for i in 0..3 {
                m[(i, i)] += z;
            }
            crate::linalg::inverse(&m).unwrap()
        };
        let big = {
            let mut m = inflate_matrix(&a, InflationSide::Left(p)).neg();
            for i in 0..3 * p {
                m[(i, i)] += z;
            }
            crate::linalg::inverse(&m).unwrap()
        };
        let compressed = deflate(&big, InflationSide::Left(p), &u).unwrap();
        assert!(compressed.max_abs_diff(&small) <= 1e-9);
    }

    #[test]
    fn multi_tensor_folds_left() {
        let mut rng = SplitMix64::new(40);
        let single = random_realization(&mut rng, 2, 2, 2, false).unwrap();
        let folded = multi_tensor(std::slice::from_ref(&single)).unwrap();
        assert_eq!(folded.max_abs_diff(&single), 0.0);

        let f: Vec<Realization> = (0..3)
            .map(|_| random_realization(&mut rng, 1, 1, 1, false).unwrap())
            .collect();
        let t = multi_tensor(&f).unwrap();
        for j in 0..6 {
            let z = grid_point(j);
            let want = f[0]
                .eval(z)
                .unwrap()
                .kron(&f[1].eval(z).unwrap())
                .kron(&f[2].eval(z).unwrap());
            assert!(rel_diff(&t.eval(z).unwrap(), &want) <= 1e-9);

            // fold direction does not matter at evaluation level
            let right_fold = tensor_product(&f[0], &tensor_product(&f[1], &f[2]));
            assert!(rel_diff(&t.eval(z).unwrap(), &right_fold.eval(z).unwrap()) <= 1e-9);
        }

        assert!(multi_tensor(&[]).is_err());
    }
}
