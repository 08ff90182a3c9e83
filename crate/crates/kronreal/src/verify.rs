//! Seeded property sweeps behind the `verify` CLI subcommand and the
//! acceptance suite.
//!
//! Each suite draws one instance per seed, runs its checks, and reports
//! every residual exactly as computed together with the tolerance it is
//! held to. Sweeps run on rayon when the `parallel` feature is enabled;
//! reports come back in seed order either way.

use std::time::{Duration, Instant};

use num_complex::Complex64;

use crate::error::Error;
use crate::exec;
use crate::factorization::{
    hat_projections, planted_instance, projections_from_t, tensor_factorize, FactorDims,
};
use crate::linalg::{rel_diff, CMatrix};
use crate::marginal::{marginal_compress, MarginalSide, MarginalSpec};
use crate::realization::{eval_two_var, Realization};
use crate::rng::{grid_point, random_realization, random_unit_vector, SplitMix64};
use crate::tensor::{
    deflate_realization, factored_array_residual, inflate, proposition_residual,
    tensor_eval_two_var, tensor_product, InflationSide,
};

/// Tolerance ladder: construction identities, evaluation identities,
/// inverse chains, and the end-to-end factorization, in decreasing
/// strictness of what one extra solve costs.
pub mod tol {
    pub const CONSTRUCTION: f64 = 1e-12;
    pub const EVAL: f64 = 1e-9;
    pub const INVERSE: f64 = 1e-8;
    pub const INVERSE_AGREE: f64 = 1e-9;
    pub const FACTORIZE: f64 = 1e-7;
    pub const TRACE_RELATION: f64 = 1e-9;
    pub const TRACE_CONSISTENCY: f64 = 1e-10;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Proposition,
    TensorEval,
    Inverse,
    Deflation,
    FactorizeRoundtrip,
    Marginals,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Proposition,
        Suite::TensorEval,
        Suite::Inverse,
        Suite::Deflation,
        Suite::FactorizeRoundtrip,
        Suite::Marginals,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Proposition => "proposition",
            Suite::TensorEval => "tensor-eval",
            Suite::Inverse => "inverse",
            Suite::Deflation => "deflation",
            Suite::FactorizeRoundtrip => "factorize-roundtrip",
            Suite::Marginals => "marginals",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.iter().copied().find(|suite| suite.name() == s)
    }
}

/// One named residual held against one tolerance.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn pass(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Everything one seed produced.
#[derive(Clone, Debug)]
pub struct SeedReport {
    pub suite: &'static str,
    pub seed: u64,
    pub dims: Vec<(&'static str, usize)>,
    pub checks: Vec<Check>,
    pub error: Option<Error>,
    pub wall: Duration,
}

impl SeedReport {
    pub fn pass(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(Check::pass)
    }
}

fn seed_count(seeds: &std::ops::Range<u64>) -> usize {
    seeds.end.saturating_sub(seeds.start) as usize
}

/// Run one suite over a seed range, parallel when available.
pub fn run_range(suite: Suite, seeds: std::ops::Range<u64>) -> Vec<SeedReport> {
    let start = seeds.start;
    exec::map_indexed(seed_count(&seeds), move |i| run_seed(suite, start + i as u64))
}

/// Sequential twin of [`run_range`] with identical output; the benches
/// compare the two.
pub fn run_range_seq(suite: Suite, seeds: std::ops::Range<u64>) -> Vec<SeedReport> {
    let start = seeds.start;
    exec::map_indexed_seq(seed_count(&seeds), move |i| run_seed(suite, start + i as u64))
}

pub fn run_seed(suite: Suite, seed: u64) -> SeedReport {
    let started = Instant::now();
    let mut report = match suite {
        Suite::Proposition => proposition_seed(seed),
        Suite::TensorEval => tensor_eval_seed(seed),
        Suite::Inverse => inverse_seed(seed),
        Suite::Deflation => deflation_seed(seed),
        Suite::FactorizeRoundtrip => factorize_seed(seed),
        Suite::Marginals => marginals_seed(seed),
    };
    report.wall = started.elapsed();
    report
}

fn new_report(suite: Suite, seed: u64) -> SeedReport {
    SeedReport {
        suite: suite.name(),
        seed,
        dims: Vec::new(),
        checks: Vec::new(),
        error: None,
        wall: Duration::ZERO,
    }
}

/// Twenty grid points at which all listed realizations evaluate; pole
/// collisions move along the grid.
fn usable_grid(realizations: &[&Realization], count: usize) -> Result<Vec<Complex64>, Error> {
    let mut points = Vec::with_capacity(count);
    let mut j = 0;
    'outer: while points.len() < count && j < count + 100 {
        let z = grid_point(j);
        j += 1;
        for r in realizations {
            match r.eval(z) {
                Ok(_) => {}
                Err(Error::Pole { .. }) => continue 'outer,
                Err(e) => return Err(e),
            }
        }
        points.push(z);
    }
    if points.len() < count {
        return Err(Error::NoConvergence {
            what: "sample grid selection",
        });
    }
    Ok(points)
}

fn catch(report: &mut SeedReport, body: impl FnOnce(&mut SeedReport) -> Result<(), Error>) {
    if let Err(e) = body(report) {
        report.error = Some(e);
    }
}

fn proposition_seed(seed: u64) -> SeedReport {
    let mut report = new_report(Suite::Proposition, seed);
    catch(&mut report, |report| {
        let mut rng = SplitMix64::new(seed);
        let n_l = rng.range(0, 3);
        let n_r = rng.range(0, 3);
        let (m_l, p_l) = (rng.range(1, 3), rng.range(1, 3));
        let (m_r, p_r) = (rng.range(1, 3), rng.range(1, 3));
        report.dims = vec![
            ("n_l", n_l),
            ("p_l", p_l),
            ("m_l", m_l),
            ("n_r", n_r),
            ("p_r", p_r),
            ("m_r", m_r),
        ];
        let rl = random_realization(&mut rng, n_l, m_l, p_l, false)?;
        let rr = random_realization(&mut rng, n_r, m_r, p_r, false)?;
        report.checks.push(Check {
            name: "construction-identity",
            residual: proposition_residual(&rl, &rr),
            tolerance: tol::CONSTRUCTION,
        });
        let t = tensor_product(&rl, &rr);
        let want_state = n_l * p_r + m_l * n_r;
        report.checks.push(Check {
            name: "state-dimension",
            residual: (t.state_dim() as f64 - want_state as f64).abs(),
            tolerance: 0.0,
        });
        report.checks.push(Check {
            name: "d-block-kron",
            residual: t.d().max_abs_diff(&rl.d().kron(rr.d())),
            tolerance: 0.0,
        });
        Ok(())
    });
    report
}

fn tensor_eval_seed(seed: u64) -> SeedReport {
    let mut report = new_report(Suite::TensorEval, seed);
    catch(&mut report, |report| {
        let mut rng = SplitMix64::new(seed);
        let n_l = rng.range(0, 3);
        let n_r = rng.range(0, 3);
        let (m_l, p_l) = (rng.range(1, 3), rng.range(1, 3));
        let (m_r, p_r) = (rng.range(1, 3), rng.range(1, 3));
        report.dims = vec![
            ("n_l", n_l),
            ("p_l", p_l),
            ("m_l", m_l),
            ("n_r", n_r),
            ("p_r", p_r),
            ("m_r", m_r),
        ];
        let rl = random_realization(&mut rng, n_l, m_l, p_l, false)?;
        let rr = random_realization(&mut rng, n_r, m_r, p_r, false)?;
        let t = tensor_product(&rl, &rr);
        let grid = usable_grid(&[&rl, &rr, &t], 20)?;
        let mut worst: f64 = 0.0;
        for &z in &grid {
            let want = rl.eval(z)?.kron(&rr.eval(z)?);
            worst = worst.max(rel_diff(&t.eval(z)?, &want));
        }
        report.checks.push(Check {
            name: "tensor-evaluation",
            residual: worst,
            tolerance: tol::EVAL,
        });

        // two-variable evaluations against products of separate evaluations
        let (zl, zr) = (grid[0], grid[grid.len() / 2]);
        let want = rl.eval(zl)?.kron(&rr.eval(zr)?);
        let got = tensor_eval_two_var(&rl, &rr, zl, zr)?;
        report.checks.push(Check {
            name: "tensor-two-variable",
            residual: rel_diff(&got, &want),
            tolerance: tol::EVAL,
        });
        // a conformable cascade pair for the plain two-variable product
        let sl = random_realization(&mut rng, n_l.max(1), m_l, p_l, false)?;
        let sr = random_realization(&mut rng, n_r.max(1), m_r, m_l, false)?;
        let grid2 = usable_grid(&[&sl, &sr], 4)?;
        let got = eval_two_var(&sl, &sr, grid2[0], grid2[1])?;
        let want = sl.eval(grid2[0])?.matmul(&sr.eval(grid2[1])?)?;
        report.checks.push(Check {
            name: "cascade-two-variable",
            residual: rel_diff(&got, &want),
            tolerance: tol::EVAL,
        });
        Ok(())
    });
    report
}

fn inverse_seed(seed: u64) -> SeedReport {
    let mut report = new_report(Suite::Inverse, seed);
    catch(&mut report, |report| {
        let mut rng = SplitMix64::new(seed);
        let n = rng.range(0, 3);
        let m = rng.range(1, 3);
        let n_r = rng.range(0, 3);
        let m_r = rng.range(1, 3);
        report.dims = vec![("n_l", n), ("m_l", m), ("n_r", n_r), ("m_r", m_r)];
        let rl = crate::rng::random_realization_invertible_d(&mut rng, n, m);
        let rr = crate::rng::random_realization_invertible_d(&mut rng, n_r, m_r);

        let rl_inv = rl.inverse()?;
        let grid = usable_grid(&[&rl, &rl_inv], 20)?;
        let mut worst: f64 = 0.0;
        for &z in &grid {
            let prod = rl_inv.eval(z)?.matmul(&rl.eval(z)?)?;
            worst = worst.max(prod.max_abs_diff(&CMatrix::identity(m)));
        }
        report.checks.push(Check {
            name: "inverse-evaluation",
            residual: worst,
            tolerance: tol::INVERSE,
        });

        let ti = crate::tensor::tensor_inverse(&rl, &rr)?;
        let t = tensor_product(&rl, &rr);
        let other = t.inverse()?;
        let grid = usable_grid(&[&ti, &other], 20)?;
        let mut worst: f64 = 0.0;
        for &z in &grid {
            worst = worst.max(rel_diff(&ti.eval(z)?, &other.eval(z)?));
        }
        report.checks.push(Check {
            name: "tensor-inverse-agreement",
            residual: worst,
            tolerance: tol::INVERSE_AGREE,
        });

        report.checks.push(Check {
            name: "factored-array",
            residual: factored_array_residual(&rl, &rr, false)?,
            tolerance: tol::CONSTRUCTION,
        });
        report.checks.push(Check {
            name: "factored-array-inverse",
            residual: factored_array_residual(&rl, &rr, true)?,
            tolerance: tol::CONSTRUCTION,
        });
        Ok(())
    });
    report
}

fn deflation_seed(seed: u64) -> SeedReport {
    let mut report = new_report(Suite::Deflation, seed);
    catch(&mut report, |report| {
        let mut rng = SplitMix64::new(seed);
        let n = rng.range(0, 3);
        let (m, p) = (rng.range(1, 3), rng.range(1, 3));
        let left_dim = rng.range(1, 4);
        let right_dim = rng.range(1, 4);
        report.dims = vec![
            ("n", n),
            ("p", p),
            ("m", m),
            ("left_dim", left_dim),
            ("right_dim", right_dim),
        ];
        let r = random_realization(&mut rng, n, m, p, false)?;

        let u = random_unit_vector(&mut rng, left_dim);
        let inflated = inflate(&r, InflationSide::Left(left_dim))?;
        let back = deflate_realization(&inflated, InflationSide::Left(left_dim), &u)?;
        report.checks.push(Check {
            name: "deflate-left",
            residual: back.max_abs_diff(&r),
            tolerance: tol::CONSTRUCTION,
        });

        let v = random_unit_vector(&mut rng, right_dim);
        let inflated = inflate(&r, InflationSide::Right(right_dim))?;
        let back = deflate_realization(&inflated, InflationSide::Right(right_dim), &v)?;
        report.checks.push(Check {
            name: "deflate-right",
            residual: back.max_abs_diff(&r),
            tolerance: tol::CONSTRUCTION,
        });
        Ok(())
    });
    report
}

fn factorize_seed(seed: u64) -> SeedReport {
    let mut report = new_report(Suite::FactorizeRoundtrip, seed);
    catch(&mut report, |report| {
        let mut rng = SplitMix64::new(seed);
        let dims = FactorDims {
            n_l: rng.range(1, 3),
            m_l: rng.range(1, 3),
            n_r: rng.range(1, 3),
            m_r: rng.range(1, 3),
        };
        report.dims = vec![
            ("n_l", dims.n_l),
            ("m_l", dims.m_l),
            ("n_r", dims.n_r),
            ("m_r", dims.m_r),
        ];
        let inst = planted_instance(&mut rng, dims);
        let pair = projections_from_t(&inst.t, dims.alpha(), dims.beta())?;
        let (hl, hr) = hat_projections(&inst.t, &inst.problem.u, &inst.problem.v, &dims)?;
        let result = tensor_factorize(&inst.problem, &pair, &hl, &hr)?;
        report.checks.push(Check {
            name: "reconstruction",
            residual: result.max_residual(),
            tolerance: tol::FACTORIZE,
        });

        let grid = usable_grid(&[&result.f_l, &inst.f_l0, &result.f_r, &inst.f_r0], 20)?;
        let mut worst: f64 = 0.0;
        for &z in &grid {
            worst = worst.max(rel_diff(&result.f_l.eval(z)?, &inst.f_l0.eval(z)?));
            worst = worst.max(rel_diff(&result.f_r.eval(z)?, &inst.f_r0.eval(z)?));
        }
        report.checks.push(Check {
            name: "factor-match",
            residual: worst,
            tolerance: tol::FACTORIZE,
        });
        Ok(())
    });
    report
}

fn marginals_seed(seed: u64) -> SeedReport {
    let mut report = new_report(Suite::Marginals, seed);
    catch(&mut report, |report| {
        let mut rng = SplitMix64::new(seed);
        let n1 = rng.range(1, 3);
        let n2 = rng.range(1, 3);
        let s1 = rng.range(0, 3);
        let s2 = rng.range(0, 3);
        report.dims = vec![("N1", n1), ("N2", n2), ("n1", s1), ("n2", s2)];
        let r1 = random_realization(&mut rng, s1, n1, n1, false)?;
        let r2 = random_realization(&mut rng, s2, n2, n2, false)?;
        let big = tensor_product(&r1, &r2);
        let grid = usable_grid(&[&r1, &r2, &big], 10)?;
        report.checks.push(Check {
            name: "trace-relation",
            residual: crate::marginal::trace_relation_residual(&r1, &r2, &grid)?,
            tolerance: tol::TRACE_RELATION,
        });

        let mut worst: f64 = 0.0;
        for &z in &grid {
            let m = big.eval(z)?;
            let full = m.trace();
            let ta = marginal_compress(&m, &MarginalSpec::new(n1, n2, MarginalSide::A))?.trace();
            let tb = marginal_compress(&m, &MarginalSpec::new(n1, n2, MarginalSide::B))?.trace();
            worst = worst.max((ta - full).norm()).max((tb - full).norm());
        }
        report.checks.push(Check {
            name: "trace-consistency",
            residual: worst,
            tolerance: tol::TRACE_CONSISTENCY,
        });
        Ok(())
    });
    report
}
