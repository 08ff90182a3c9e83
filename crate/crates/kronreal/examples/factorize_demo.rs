//! Plant a tensor factorization, scramble the coordinates, and recover
//! the factors two ways: from the known transformation and by searching
//! for supporting projections.
//!
//! ```text
//! cargo run --release -p kronreal --example factorize_demo
//! ```

use kronreal::factorization::{
    find_supporting_projections, hat_projections, planted_instance, projections_from_t,
    subspace_condition_residual, tensor_factorize, FactorDims,
};
use kronreal::linalg::rel_diff;
use kronreal::rng::{grid_point, SplitMix64};

fn main() {
    let mut rng = SplitMix64::new(2);

    // matrix-valued factors, recovered through the known transformation
    let dims = FactorDims {
        n_l: 2,
        m_l: 2,
        n_r: 2,
        m_r: 3,
    };
    let inst = planted_instance(&mut rng, dims);
    println!(
        "planted F = F_l (x) F_r with factor dims {}x{} (n={}) and {}x{} (n={}), state {}",
        dims.m_l,
        dims.m_l,
        dims.n_l,
        dims.m_r,
        dims.m_r,
        dims.n_r,
        dims.total_state()
    );

    let pair = projections_from_t(&inst.t, dims.alpha(), dims.beta()).unwrap();
    let (r1, r2) = subspace_condition_residual(inst.problem.f.a(), inst.problem.f_inv.a(), &pair);
    println!("subspace condition residuals: {r1:.2e}, {r2:.2e}");
    let (hl, hr) = hat_projections(&inst.t, &inst.problem.u, &inst.problem.v, &dims).unwrap();
    let result = tensor_factorize(&inst.problem, &pair, &hl, &hr).unwrap();
    println!(
        "given-T reconstruction residual: {:.2e}",
        result.max_residual()
    );
    let z = grid_point(0);
    println!(
        "factor match at z = {z}: {:.2e}",
        rel_diff(
            &result.f_l.eval(z).unwrap(),
            &inst.f_l0.eval(z).unwrap()
        )
    );

    // scalar factors, transformation unknown: search for the projections
    let dims = FactorDims {
        n_l: 3,
        m_l: 1,
        n_r: 3,
        m_r: 1,
    };
    let inst = planted_instance(&mut rng, dims);
    let found = find_supporting_projections(
        inst.problem.f.a(),
        inst.problem.f_inv.a(),
        dims.alpha(),
        dims.beta(),
    )
    .unwrap();
    let t = found.transformation().unwrap();
    let (hl, hr) = hat_projections(&t, &inst.problem.u, &inst.problem.v, &dims).unwrap();
    let result = tensor_factorize(&inst.problem, &found.pair, &hl, &hr).unwrap();
    println!(
        "search-mode reconstruction residual (state {}): {:.2e}",
        dims.total_state(),
        result.max_residual()
    );
}
