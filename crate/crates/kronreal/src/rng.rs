//! Deterministic instance generation.
//!
//! Every random object in the crate comes from [`SplitMix64`] so that a
//! seed fully determines the instance, byte for byte, across runs and
//! across reimplementations in other languages. The exact stream contract
//! (documented in the README) is:
//!
//! * `next_u64`: splitmix64 with increment `0x9E3779B97F4A7C15`.
//! * `unit`: `(next_u64() >> 11) * 2^-53`, uniform in `[0, 1)`.
//! * `signed_unit`: `2 * unit() - 1`, uniform in `[-1, 1)`.
//! * a complex entry draws its real part first, then its imaginary part;
//! * a matrix is filled row-major;
//! * a realization draws `A`, then `B`, then `C`, then `D` (`D` is skipped
//!   entirely when it is forced to the identity).

use num_complex::Complex64;

use crate::error::{dim_mismatch, Result};
use crate::linalg::{self, CMatrix};
use crate::realization::Realization;

/// splitmix64 generator state.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[-1, 1)`.
    pub fn signed_unit(&mut self) -> f64 {
        2.0 * self.unit() - 1.0
    }

    /// Complex entry with independent real and imaginary parts in `[-1, 1)`.
    pub fn complex(&mut self) -> Complex64 {
        let re = self.signed_unit();
        let im = self.signed_unit();
        Complex64::new(re, im)
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below((hi - lo + 1) as u64) as usize
    }
}

/// Dense matrix with entries uniform over the complex square `[-1,1)^2`.
pub fn random_matrix(rng: &mut SplitMix64, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| rng.complex())
}

/// Random realization; `d_identity` forces `D = I` (square only).
pub fn random_realization(
    rng: &mut SplitMix64,
    n: usize,
    m_in: usize,
    m_out: usize,
    d_identity: bool,
) -> Result<Realization> {
    if d_identity && m_in != m_out {
        return Err(dim_mismatch(
            "random_realization",
            format!("identity D needs square dimensions, got {m_out}x{m_in}"),
        ));
    }
    let a = random_matrix(rng, n, n);
    let b = random_matrix(rng, n, m_in);
    let c = random_matrix(rng, m_out, n);
    let d = if d_identity {
        CMatrix::identity(m_in)
    } else {
        random_matrix(rng, m_out, m_in)
    };
    Realization::new(a, b, c, d)
}

/// Square realization whose `D` block is comfortably invertible; redraws
/// `D` until the inverse stays below the conditioning cap.
pub fn random_realization_invertible_d(rng: &mut SplitMix64, n: usize, m: usize) -> Realization {
    let a = random_matrix(rng, n, n);
    let b = random_matrix(rng, n, m);
    let c = random_matrix(rng, m, n);
    let d = loop {
        let d = random_matrix(rng, m, m);
        if let Ok(dinv) = linalg::inverse(&d) {
            if d.frobenius_norm() * dinv.frobenius_norm() <= 1e4 {
                break d;
            }
        }
    };
    Realization::new(a, b, c, d).expect("conformable by construction")
}

/// Unit vector in the 2-norm; redrawn while the raw draw is too short to
/// normalize safely.
pub fn random_unit_vector(rng: &mut SplitMix64, dim: usize) -> CMatrix {
    loop {
        let v = random_matrix(rng, dim, 1);
        let norm = v.vec_norm();
        if norm > 1e-3 {
            return v.scale(Complex64::new(1.0 / norm, 0.0));
        }
    }
}

/// Random square matrix accepted only when the Frobenius condition proxy
/// `‖T‖_F · ‖T^{-1}‖_F` stays below `cond_cap`.
pub fn well_conditioned(rng: &mut SplitMix64, size: usize, cond_cap: f64) -> CMatrix {
    if size == 0 {
        return CMatrix::zeros(0, 0);
    }
    loop {
        let t = random_matrix(rng, size, size);
        if let Ok(tinv) = linalg::inverse(&t) {
            if t.frobenius_norm() * tinv.frobenius_norm() <= cond_cap {
                return t;
            }
        }
    }
}

/// Fixed verification grid point: `z_j = 1.5 · exp(2πi·j/20) + 0.1·j`.
///
/// Indices run past 19 so that a pole collision can move to the next point
/// deterministically.
pub fn grid_point(j: usize) -> Complex64 {
    let theta = 2.0 * std::f64::consts::PI * (j % 20) as f64 / 20.0;
    Complex64::new(theta.cos(), theta.sin()) * 1.5 + Complex64::new(0.1 * j as f64, 0.0)
}

/// Random point in the annulus `1 ≤ |z| ≤ 10`.
pub fn annulus_point(rng: &mut SplitMix64) -> Complex64 {
    let r = 1.0 + 9.0 * rng.unit();
    let theta = 2.0 * std::f64::consts::PI * rng.unit();
    Complex64::new(r * theta.cos(), r * theta.sin())
}
