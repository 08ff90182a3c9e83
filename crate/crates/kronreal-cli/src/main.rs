//! Command-line front end: deterministic instance generation, realization
//! algebra on JSON files, tensor factorization, and seeded verification
//! sweeps with machine-readable reports.
//!
//! All output is canonical JSON (stable float formatting, fixed key
//! order), so identical invocations produce byte-identical files and
//! stdout. Timing information never goes to stdout unless `--timings`
//! asks for it; summaries go to stderr.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use kronreal::factorization::{
    find_supporting_projections, hat_projections, planted_instance, projections_from_t,
    subspace_condition_residual, tensor_factorize, FactorDims, FactorizationResult, FACTORIZE_TOL,
};
use kronreal::json::{self, JsonObject};
use kronreal::marginal::{marginal_eval, marginal_realization, MarginalSide, MarginalSpec};
use kronreal::realization::inverse_product;
use kronreal::rng::SplitMix64;
use kronreal::tensor::{multi_tensor, tensor_inverse};
use kronreal::verify::{run_range, run_range_seq, SeedReport, Suite};
use kronreal::{Complex64, Error, Realization};

#[derive(Parser)]
#[command(
    name = "kronreal",
    about = "State-space calculus for tensor products of rational matrix functions",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a seeded random realization (or factorization problem)
    Gen {
        #[arg(long)]
        seed: u64,
        /// State dimension; zero gives a constant function
        #[arg(long, default_value_t = 2, conflicts_with = "problem_dims")]
        n: usize,
        /// Input dimension
        #[arg(long = "m-in", default_value_t = 2, conflicts_with = "problem_dims")]
        m_in: usize,
        /// Output dimension
        #[arg(long = "m-out", default_value_t = 2, conflicts_with = "problem_dims")]
        m_out: usize,
        /// Force D to the identity (square dimensions only)
        #[arg(long, conflicts_with = "problem_dims")]
        d_identity: bool,
        /// Emit a planted factorization problem with these factor
        /// dimensions instead of a single realization
        #[arg(long, value_name = "NL,ML,NR,MR")]
        problem_dims: Option<DimsArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a realization at a point
    Eval {
        file: PathBuf,
        /// Evaluation point as re,im
        #[arg(long)]
        z: ZArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Series (cascade) product of two realizations
    Product {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tensor product of one or more realizations (left fold)
    Tensor {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inverse realization of one function, a product, or a tensor product
    Inverse {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = InverseMode::Single)]
        mode: InverseMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partial-trace marginal of a square realization
    Marginal {
        file: PathBuf,
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long, value_enum)]
        side: SideArg,
        /// Evaluate the marginal at re,im instead of emitting its realization
        #[arg(long)]
        z: Option<ZArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tensor-factorize a problem file into F_l and F_r
    Factorize {
        problem: PathBuf,
        #[arg(long, value_enum)]
        mode: FactorizeMode,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a verification report
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run a seeded verification suite, one report line per seed
    Verify {
        /// proposition | tensor-eval | inverse | deflation |
        /// factorize-roundtrip | marginals
        #[arg(long)]
        suite: String,
        /// Seed range like 0..50 (half-open)
        #[arg(long)]
        seeds: SeedRange,
        /// Override every check tolerance (exploratory; defaults are pinned)
        #[arg(long)]
        tol: Option<f64>,
        /// Include wall-clock milliseconds in each line (not byte-stable)
        #[arg(long)]
        timings: bool,
        /// Force the sequential sweep path
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum InverseMode {
    Single,
    Product,
    Tensor,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum FactorizeMode {
    #[value(name = "given-t")]
    GivenT,
    Search,
}

#[derive(Clone, Copy)]
struct ZArg(Complex64);

impl FromStr for ZArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (re, im) = s
            .split_once(',')
            .ok_or_else(|| format!("expected re,im, got {s:?}"))?;
        let re: f64 = re.trim().parse().map_err(|e| format!("bad real part: {e}"))?;
        let im: f64 = im
            .trim()
            .parse()
            .map_err(|e| format!("bad imaginary part: {e}"))?;
        Ok(ZArg(Complex64::new(re, im)))
    }
}

#[derive(Clone, Copy)]
struct DimsArg(FactorDims);

impl FromStr for DimsArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(format!("expected n_l,m_l,n_r,m_r, got {s:?}"));
        }
        let parse = |t: &str| -> Result<usize, String> {
            t.trim().parse().map_err(|e| format!("bad dimension: {e}"))
        };
        Ok(DimsArg(FactorDims {
            n_l: parse(parts[0])?,
            m_l: parse(parts[1])?,
            n_r: parse(parts[2])?,
            m_r: parse(parts[3])?,
        }))
    }
}

#[derive(Clone, Copy)]
struct SeedRange {
    start: u64,
    end: u64,
}

impl FromStr for SeedRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected start..end, got {s:?}"))?;
        let start: u64 = a.trim().parse().map_err(|e| format!("bad start: {e}"))?;
        let end: u64 = b.trim().parse().map_err(|e| format!("bad end: {e}"))?;
        if end < start {
            return Err(format!("range {s:?} runs backwards"));
        }
        Ok(SeedRange { start, end })
    }
}

enum CliError {
    Lib(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn to_json(&self) -> String {
        let envelope = |kind: &str, message: &str| {
            JsonObject::new()
                .field_raw(
                    "error",
                    &JsonObject::new()
                        .field_str("kind", kind)
                        .field_str("message", message)
                        .finish(),
                )
                .finish()
        };
        match self {
            CliError::Lib(e) => json::error_to_json(e),
            CliError::Io(path, e) => envelope("io", &format!("{}: {e}", path.display())),
            CliError::Usage(msg) => envelope("usage", msg),
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn read_realization(path: &Path) -> Result<Realization, CliError> {
    Ok(json::realization_from_json(&read_file(path)?)?)
}

/// Write to the file or stdout, always newline-terminated.
fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, format!("{content}\n"))
            .map_err(|e| CliError::Io(path.to_path_buf(), e)),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            println!("{}", e.to_json());
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Cmd) -> Result<ExitCode, CliError> {
    match cmd {
        Cmd::Gen {
            seed,
            n,
            m_in,
            m_out,
            d_identity,
            problem_dims,
            out,
        } => {
            let mut rng = SplitMix64::new(seed);
            let content = match problem_dims {
                Some(DimsArg(dims)) => {
                    let inst = planted_instance(&mut rng, dims);
                    json::problem_to_json(&inst.problem, Some(&inst.t))
                }
                None => {
                    let r =
                        kronreal::rng::random_realization(&mut rng, n, m_in, m_out, d_identity)?;
                    json::realization_to_json(&r)
                }
            };
            emit(out.as_deref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Eval { file, z, out } => {
            let r = read_realization(&file)?;
            let value = r.eval(z.0)?;
            emit(out.as_deref(), &json::matrix_to_json(&value))?;
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Product { left, right, out } => {
            let rl = read_realization(&left)?;
            let rr = read_realization(&right)?;
            let prod = rl.series(&rr)?;
            emit(out.as_deref(), &json::realization_to_json(&prod))?;
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Tensor { files, out } => {
            let factors: Vec<Realization> = files
                .iter()
                .map(|p| read_realization(p))
                .collect::<Result<_, _>>()?;
            let t = multi_tensor(&factors)?;
            emit(out.as_deref(), &json::realization_to_json(&t))?;
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Inverse { files, mode, out } => {
            let result = match mode {
                InverseMode::Single => {
                    expect_files(&files, 1, "single")?;
                    read_realization(&files[0])?.inverse()?
                }
                InverseMode::Product => {
                    expect_files(&files, 2, "product")?;
                    inverse_product(&read_realization(&files[0])?, &read_realization(&files[1])?)?
                }
                InverseMode::Tensor => {
                    expect_files(&files, 2, "tensor")?;
                    tensor_inverse(&read_realization(&files[0])?, &read_realization(&files[1])?)?
                }
            };
            emit(out.as_deref(), &json::realization_to_json(&result))?;
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Marginal {
            file,
            n1,
            n2,
            side,
            z,
            out,
        } => {
            let r = read_realization(&file)?;
            let spec = MarginalSpec::new(
                n1,
                n2,
                match side {
                    SideArg::A => MarginalSide::A,
                    SideArg::B => MarginalSide::B,
                },
            );
            let content = match z {
                Some(z) => json::matrix_to_json(&marginal_eval(&r, &spec, z.0)?),
                None => json::realization_to_json(&marginal_realization(&r, &spec)?),
            };
            emit(out.as_deref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Factorize {
            problem,
            mode,
            out,
            report,
        } => {
            let (problem, t_opt) = json::problem_from_json(&read_file(&problem)?)?;
            let dims = problem.dims;
            let (pair, t) = match mode {
                FactorizeMode::GivenT => {
                    let t = t_opt.ok_or_else(|| {
                        CliError::Lib(Error::Json(
                            "given-t mode requires a T entry in the problem file".to_string(),
                        ))
                    })?;
                    (projections_from_t(&t, dims.alpha(), dims.beta())?, t)
                }
                FactorizeMode::Search => {
                    let found = find_supporting_projections(
                        problem.f.a(),
                        problem.f_inv.a(),
                        dims.alpha(),
                        dims.beta(),
                    )?;
                    let t = found.transformation()?;
                    (found.pair, t)
                }
            };
            let (hl, hr) = hat_projections(&t, &problem.u, &problem.v, &dims)?;
            let result = tensor_factorize(&problem, &pair, &hl, &hr)?;
            emit(out.as_deref(), &json::result_to_json(&result))?;

            let (r1, r2) = subspace_condition_residual(problem.f.a(), problem.f_inv.a(), &pair);
            let pass = result.max_residual() <= FACTORIZE_TOL;
            if let Some(report_path) = report {
                let content = factorize_report(mode, &dims, r1, r2, &result, pass);
                emit(Some(&report_path), &content)?;
            }
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Cmd::Verify {
            suite,
            seeds,
            tol,
            timings,
            sequential,
        } => {
            let suite = Suite::parse(&suite)
                .ok_or_else(|| CliError::Usage(format!("unknown suite {suite:?}")))?;
            let range = seeds.start..seeds.end;
            let started = std::time::Instant::now();
            let reports = if sequential {
                run_range_seq(suite, range)
            } else {
                run_range(suite, range)
            };
            let mut all_pass = true;
            for r in &reports {
                println!("{}", report_line(r, tol, timings));
                all_pass &= passes(r, tol);
            }
            eprintln!(
                "suite {}: {}/{} passed in {:.1} ms",
                suite.name(),
                reports.iter().filter(|r| passes(r, tol)).count(),
                reports.len(),
                started.elapsed().as_secs_f64() * 1e3
            );
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn expect_files(files: &[PathBuf], want: usize, mode: &str) -> Result<(), CliError> {
    if files.len() != want {
        return Err(CliError::Usage(format!(
            "inverse --mode {mode} takes exactly {want} file(s), got {}",
            files.len()
        )));
    }
    Ok(())
}

fn passes(r: &SeedReport, tol_override: Option<f64>) -> bool {
    match tol_override {
        None => r.pass(),
        Some(tol) => r.error.is_none() && r.checks.iter().all(|c| c.residual <= tol),
    }
}

/// One NDJSON report line; key order and float formatting are fixed so
/// repeated runs are byte-identical (unless `--timings` is on).
fn report_line(r: &SeedReport, tol_override: Option<f64>, timings: bool) -> String {
    let mut dims = JsonObject::new();
    for (name, value) in &r.dims {
        dims.field_u64(name, *value as u64);
    }
    let mut checks = String::from("[");
    for (i, c) in r.checks.iter().enumerate() {
        if i > 0 {
            checks.push(',');
        }
        let tolerance = tol_override.unwrap_or(c.tolerance);
        let _ = write!(
            checks,
            "{}",
            JsonObject::new()
                .field_str("name", c.name)
                .field_f64("residual", c.residual)
                .field_f64("tolerance", tolerance)
                .field_bool("pass", c.residual <= tolerance)
                .finish()
        );
    }
    checks.push(']');

    let mut line = JsonObject::new();
    line.field_str("suite", r.suite)
        .field_u64("seed", r.seed)
        .field_raw("dims", &dims.finish())
        .field_raw("checks", &checks)
        .field_bool("pass", passes(r, tol_override));
    if let Some(e) = &r.error {
        line.field_str("error", &e.to_string());
        line.field_str("error_kind", e.kind());
    }
    if timings {
        line.field_f64("wall_ms", r.wall.as_secs_f64() * 1e3);
    }
    line.finish()
}

fn factorize_report(
    mode: FactorizeMode,
    dims: &FactorDims,
    r1: f64,
    r2: f64,
    result: &FactorizationResult,
    pass: bool,
) -> String {
    let mode = match mode {
        FactorizeMode::GivenT => "given-t",
        FactorizeMode::Search => "search",
    };
    let dims_json = JsonObject::new()
        .field_u64("n_l", dims.n_l as u64)
        .field_u64("m_l", dims.m_l as u64)
        .field_u64("n_r", dims.n_r as u64)
        .field_u64("m_r", dims.m_r as u64)
        .finish();
    JsonObject::new()
        .field_str("operation", "factorize")
        .field_str("mode", mode)
        .field_raw("dims", &dims_json)
        .field_f64("subspace_residual_a", r1)
        .field_f64("subspace_residual_a_times", r2)
        .field_f64("max_reconstruction_residual", result.max_residual())
        .field_f64("tolerance", FACTORIZE_TOL)
        .field_bool("pass", pass)
        .finish()
}
