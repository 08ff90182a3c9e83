//! State-space calculus for Kronecker (tensor) products of matrix-valued
//! rational functions.
//!
//! A rational function `F(z) = D + C (zI - A)^{-1} B` analytic at infinity is
//! carried by its realization quadruple `(A, B, C, D)`. This crate builds the
//! usual cascade calculus on realizations (evaluation, series product,
//! inverse, change of state coordinates) plus the tensor-product layer:
//!
//! * [`tensor::inflate`] turns a realization into its "inflated" version
//!   `M ⊗ I_p` or `I_m ⊗ M`, so a tensor product of functions becomes an
//!   ordinary product of inflated functions.
//! * [`tensor::tensor_product`] assembles the realization of `F_l ⊗ F_r`
//!   directly, with state dimension `n_l·p_r + m_l·n_r`.
//! * [`tensor::deflate`] compresses inflated matrices back through unit
//!   vectors, `(I ⊗ u*) (M ⊗ I) (I ⊗ u) = M`.
//! * [`factorization::tensor_factorize`] splits a square `F` with
//!   `F(∞) = I` into `F_l ⊗ F_r`, given a pair of supporting projections of
//!   the state space; [`factorization::find_supporting_projections`]
//!   searches for such a pair by eigenvalue-subset enumeration.
//! * [`marginal`] computes partial-trace compressions of a matrix-valued
//!   function and the trace relation they satisfy on exact tensor products.
//!
//! Everything is dense, double-precision complex arithmetic over a
//! self-contained kernel ([`linalg`]); identities are verified to residual
//! tolerances, not exactly. Seed sweeps and the projection search run on
//! rayon when the `parallel` feature (default) is enabled and fall back to
//! sequential loops otherwise; both paths produce identical output.

pub mod error;
pub mod factorization;
pub mod json;
pub mod linalg;
pub mod marginal;
pub mod realization;
pub mod rng;
pub mod tensor;
pub mod verify;

mod exec;

pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use num_complex::Complex64;
pub use realization::Realization;
