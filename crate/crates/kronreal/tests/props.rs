//! Property tests for the algebraic identities the calculus rests on.

use kronreal::linalg::{self, rel_diff, CMatrix};
use kronreal::realization::Realization;
use kronreal::rng::{self, SplitMix64};
use kronreal::tensor::{self, InflationSide};
use kronreal::Complex64;
use proptest::prelude::*;

fn dim() -> impl Strategy<Value = usize> {
    1usize..=4
}

fn seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

fn matrix(rng: &mut SplitMix64, r: usize, c: usize) -> CMatrix {
    rng::random_matrix(rng, r, c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // (T X) ⊗ (Y Z) = (T ⊗ Y)(X ⊗ Z) for all conformable shapes
    #[test]
    fn mixed_product_rule(s in seed(), n in dim(), m in dim(), l in dim(), p in dim(), q in dim()) {
        let mut rng = SplitMix64::new(s);
        let t = matrix(&mut rng, n, m);
        let x = matrix(&mut rng, m, l);
        let y = matrix(&mut rng, l, p);
        let z = matrix(&mut rng, p, q);
        let lhs = t.matmul(&x).unwrap().kron(&y.matmul(&z).unwrap());
        let rhs = t.kron(&y).matmul(&x.kron(&z)).unwrap();
        let scale = 1.0 + lhs.frobenius_norm();
        prop_assert!(lhs.sub(&rhs).frobenius_norm() <= 1e-10 * scale);
    }

    #[test]
    fn kron_is_associative(s in seed(), a in dim(), b in dim(), c in dim()) {
        let mut rng = SplitMix64::new(s);
        let x = matrix(&mut rng, a, b);
        let y = matrix(&mut rng, b, c);
        let z = matrix(&mut rng, c, a);
        let left = x.kron(&y).kron(&z);
        let right = x.kron(&y.kron(&z));
        prop_assert!(left.max_abs_diff(&right) <= 1e-12);
    }

    // solve and inverse meet their residual contracts away from bad conditioning
    #[test]
    fn solve_residual_contract(s in seed(), n in 1usize..=6, k in dim()) {
        let mut rng = SplitMix64::new(s);
        let m = matrix(&mut rng, n, n);
        let rhs = matrix(&mut rng, n, k);
        let minv = match linalg::inverse(&m) {
            Ok(inv) => inv,
            Err(_) => return Ok(()), // singular draw
        };
        prop_assume!(m.frobenius_norm() * minv.frobenius_norm() <= 1e6);
        let x = linalg::solve(&m, &rhs).unwrap();
        let resid = m.matmul(&x).unwrap().sub(&rhs).frobenius_norm();
        prop_assert!(resid <= 1e-10 * (1.0 + rhs.frobenius_norm()));
        let id_resid = m.matmul(&minv).unwrap()
            .sub(&CMatrix::identity(n))
            .frobenius_norm();
        prop_assert!(id_resid <= 1e-9);
    }

    // evaluation is a homomorphism for the cascade product
    #[test]
    fn series_evaluation_homomorphism(s in seed(), nl in 0usize..=3, nr in 0usize..=3,
                                      p in dim(), m in dim(), q in dim()) {
        let mut rng = SplitMix64::new(s);
        let rl = rng::random_realization(&mut rng, nl, m, p, false).unwrap();
        let rr = rng::random_realization(&mut rng, nr, q, m, false).unwrap();
        let prod = rl.series(&rr).unwrap();
        let mut checked = 0;
        for j in 0..40 {
            if checked >= 5 { break; }
            let z = rng::grid_point(j);
            let (fl, fr, fp) = match (rl.eval(z), rr.eval(z), prod.eval(z)) {
                (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                _ => continue,
            };
            prop_assert!(rel_diff(&fp, &fl.matmul(&fr).unwrap()) <= 1e-9);
            checked += 1;
        }
        prop_assert!(checked >= 3);
    }

    // tensor evaluation against the Kronecker of the factors, on annulus points
    #[test]
    fn tensor_evaluation_homomorphism(s in seed(), nl in 0usize..=3, nr in 0usize..=3,
                                      p in dim(), m in dim()) {
        let mut rng = SplitMix64::new(s);
        let rl = rng::random_realization(&mut rng, nl, m, p, false).unwrap();
        let rr = rng::random_realization(&mut rng, nr, p, m, false).unwrap();
        let t = tensor::tensor_product(&rl, &rr);
        prop_assert_eq!(t.state_dim(), nl * rr.output_dim() + rl.input_dim() * nr);
        let mut checked = 0;
        for _ in 0..40 {
            if checked >= 5 { break; }
            let z = rng::annulus_point(&mut rng);
            let (fl, fr, ft) = match (rl.eval(z), rr.eval(z), t.eval(z)) {
                (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                _ => continue,
            };
            prop_assert!(rel_diff(&ft, &fl.kron(&fr)) <= 1e-9);
            checked += 1;
        }
        prop_assert!(checked >= 3);
    }

    #[test]
    fn construction_identity_always_holds(s in seed(), nl in 0usize..=3, nr in 0usize..=3,
                                          pl in dim(), ml in dim(), pr in dim(), mr in dim()) {
        let mut rng = SplitMix64::new(s);
        let rl = rng::random_realization(&mut rng, nl, ml, pl, false).unwrap();
        let rr = rng::random_realization(&mut rng, nr, mr, pr, false).unwrap();
        prop_assert!(tensor::proposition_residual(&rl, &rr) <= 1e-12);
    }

    #[test]
    fn conjugation_preserves_evaluation(s in seed(), n in 1usize..=4, m in dim()) {
        let mut rng = SplitMix64::new(s);
        let r = rng::random_realization(&mut rng, n, m, m, false).unwrap();
        let t = rng::well_conditioned(&mut rng, n, 1e4);
        let conj = r.conjugate(&t).unwrap();
        let mut checked = 0;
        for j in 0..40 {
            if checked >= 5 { break; }
            let z = rng::grid_point(j);
            let (a, b) = match (r.eval(z), conj.eval(z)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            prop_assert!(rel_diff(&b, &a) <= 1e-9);
            checked += 1;
        }
        prop_assert!(checked >= 3);
    }

    // deflation undoes inflation for any unit vector on either side
    #[test]
    fn deflation_left_inverse_of_inflation(s in seed(), n in 0usize..=3,
                                           p in dim(), m in dim(), w_dim in 1usize..=4) {
        let mut rng = SplitMix64::new(s);
        let r = rng::random_realization(&mut rng, n, m, p, false).unwrap();
        let w = rng::random_unit_vector(&mut rng, w_dim);
        for side in [InflationSide::Left(w_dim), InflationSide::Right(w_dim)] {
            let inflated = tensor::inflate(&r, side).unwrap();
            let back = tensor::deflate_realization(&inflated, side, &w).unwrap();
            prop_assert!(back.max_abs_diff(&r) <= 1e-12);
        }
    }

    // the constant-at-infinity block of a tensor product is exactly the Kronecker
    #[test]
    fn tensor_d_block_is_kron(s in seed(), pl in dim(), ml in dim(), pr in dim(), mr in dim()) {
        let mut rng = SplitMix64::new(s);
        let rl = Realization::constant(matrix(&mut rng, pl, ml));
        let rr = Realization::constant(matrix(&mut rng, pr, mr));
        let t = tensor::tensor_product(&rl, &rr);
        prop_assert_eq!(t.d().max_abs_diff(&rl.d().kron(rr.d())), 0.0);
    }

    // evaluation of an inverse realization inverts the evaluation
    #[test]
    fn inverse_realization_pointwise(s in seed(), n in 0usize..=3, m in dim()) {
        let mut rng = SplitMix64::new(s);
        let r = rng::random_realization_invertible_d(&mut rng, n, m);
        let rinv = r.inverse().unwrap();
        let mut checked = 0;
        for j in 0..60 {
            if checked >= 5 { break; }
            let z = rng::grid_point(j);
            let (f, g) = match (r.eval(z), rinv.eval(z)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            let fwd = linalg::inverse(&f).map(|finv| rel_diff(&g, &finv));
            if let Ok(d) = fwd {
                prop_assert!(d <= 1e-8, "pointwise inverse off by {d}");
                checked += 1;
            }
        }
        prop_assert!(checked >= 3);
    }
}

#[test]
fn grid_points_stay_clear_of_the_origin() {
    for j in 0..120 {
        let z = rng::grid_point(j);
        assert!(z.norm() >= 0.4, "grid point {j} too close to 0: {z}");
        assert!(z.norm() <= 14.0);
    }
}

#[test]
fn annulus_points_respect_the_annulus() {
    let mut rng = SplitMix64::new(7);
    for _ in 0..200 {
        let z: Complex64 = rng::annulus_point(&mut rng);
        assert!(z.norm() >= 1.0 - 1e-12 && z.norm() <= 10.0 + 1e-12);
    }
}
