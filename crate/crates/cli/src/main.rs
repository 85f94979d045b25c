//! Command-line front end: solve, verify, evaluate, and print kernels.
//!
//! Exit codes: 0 success (warnings included), 1 parse/usage error,
//! 2 resonance or conditioning error, 3 verification failure.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use helmholtz_layer::document::{LimitDocument, ProblemDocument, SolutionDocument};
use helmholtz_layer::exact::RationalPoint;
use helmholtz_layer::kernels::{self, KernelFamily};
use helmholtz_layer::qpoly::LayerFace;
use helmholtz_layer::solver::{self, Bc, ProblemSpec, SolveError};
use helmholtz_layer::verify::{self, Tolerances};
use helmholtz_layer::{calculus, render, EvalPoint, Mode, MultiIndex, QuasiPoly};

#[derive(Parser)]
#[command(
    name = "helmlayer",
    about = "Exact quasipolynomial solutions of Helmholtz boundary-value problems in a layer",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IoArgs {
    /// Problem document (JSON); defaults to stdin.
    #[arg(long)]
    input: Option<String>,
    /// Output file; defaults to stdout.
    #[arg(long)]
    output: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem document and emit a solution document.
    Solve {
        #[command(flatten)]
        io: IoArgs,
        /// Emit only the polynomial particular solution of the equation.
        #[arg(long)]
        particular_only: bool,
    },
    /// Verify a solution: symbolic residual, boundary traces, and a
    /// finite-difference residual sweep. Exit code 3 if any check fails.
    Verify {
        #[command(flatten)]
        io: IoArgs,
        /// Check this solution document instead of solving afresh.
        #[arg(long)]
        check_solution: Option<String>,
        /// Also check the kappa -> 0 limit against this polynomial document.
        #[arg(long)]
        poisson_limit: Option<String>,
        /// Grid points per axis for the finite-difference sweep.
        #[arg(long, default_value_t = 4)]
        grid: usize,
        /// Relative tolerance for finite-difference residuals.
        #[arg(long, default_value_t = 1e-5)]
        tol_fd: f64,
        /// Per-unit tolerance for the kappa -> 0 limit at kappa = 1e-4.
        #[arg(long, default_value_t = 1e-6)]
        tol_limit: f64,
        /// Step for the finite-difference Laplacian.
        #[arg(long, default_value_t = 1e-3)]
        fd_step: f64,
    },
    /// Evaluate a solution at a point.
    Eval {
        #[command(flatten)]
        io: IoArgs,
        /// Evaluate this solution document instead of solving the input.
        #[arg(long)]
        solution: Option<String>,
        /// Point, e.g. "x=0.5,-0.25;y=0.3;kappa=1;a=1".
        #[arg(long)]
        at: String,
    },
    /// Print a boundary kernel in text and LaTeX.
    Kernels {
        /// Kernel family: dirichlet | dn-p | dn-q.
        #[arg(long)]
        family: String,
        /// hyperbolic | circular.
        #[arg(long)]
        mode: String,
        /// Kernel order m (the kernel multiplies x^(k-2m)).
        #[arg(long, default_value_t = 0)]
        m: u32,
        /// Multi-index order, comma-separated (overrides --m).
        #[arg(long)]
        multiindex: Option<String>,
    },
}

enum CliError {
    Parse(String),
    Conditioning(String),
    VerificationFailed,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Conditioning(_) => 2,
            CliError::VerificationFailed => 3,
        }
    }
}

fn read_input(path: &Option<String>) -> Result<String, CliError> {
    match path {
        Some(p) => {
            fs::read_to_string(p).map_err(|e| CliError::Parse(format!("cannot read {p}: {e}")))
        }
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Parse(format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn write_output(path: &Option<String>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            fs::write(p, content).map_err(|e| CliError::Parse(format!("cannot write {p}: {e}")))
        }
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn load_spec(io: &IoArgs) -> Result<ProblemSpec, CliError> {
    let text = read_input(&io.input)?;
    let doc = ProblemDocument::from_json(&text).map_err(|e| CliError::Parse(e.to_string()))?;
    doc.to_spec().map_err(|e| CliError::Parse(e.to_string()))
}

fn solve_spec(spec: &ProblemSpec) -> Result<solver::Solution, CliError> {
    solver::solve(spec).map_err(|e| match e {
        SolveError::AtEigenvalue { .. } => CliError::Conditioning(e.to_string()),
        SolveError::Algebra(_) => CliError::Parse(e.to_string()),
    })
}

/// 15 significant digits, fixed-point for moderate magnitudes.
fn format_significant(v: f64) -> String {
    if v == 0.0 {
        return "0.00000000000000".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.14e}")
    }
}

fn parse_at(at: &str, dim: usize) -> Result<EvalPoint, CliError> {
    let mut x: Option<Vec<f64>> = None;
    let mut y: Option<f64> = None;
    let mut kappa: Option<f64> = None;
    let mut a: Option<f64> = None;
    for assign in at.split([';', ' ']).filter(|s| !s.is_empty()) {
        let (key, value) = assign
            .split_once('=')
            .ok_or_else(|| CliError::Parse(format!("bad assignment {assign:?} in --at")))?;
        let parse_f = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Parse(format!("bad number {s:?} in --at")))
        };
        match key.trim() {
            "x" => {
                x = Some(
                    value
                        .split(',')
                        .map(parse_f)
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
            "y" => y = Some(parse_f(value)?),
            "kappa" | "lambda" | "mu" => kappa = Some(parse_f(value)?),
            "a" => a = Some(parse_f(value)?),
            other => return Err(CliError::Parse(format!("unknown --at key {other:?}"))),
        }
    }
    let x = x.ok_or_else(|| CliError::Parse("--at needs x=...".to_string()))?;
    if x.len() != dim {
        return Err(CliError::Parse(format!(
            "--at has {} x-coordinates, problem dimension is {dim}",
            x.len()
        )));
    }
    let kappa = kappa.ok_or_else(|| CliError::Parse("--at needs kappa=...".to_string()))?;
    let a = a.ok_or_else(|| CliError::Parse("--at needs a=...".to_string()))?;
    if kappa <= 0.0 || a <= 0.0 {
        return Err(CliError::Parse(
            "--at needs kappa > 0 and a > 0".to_string(),
        ));
    }
    Ok(EvalPoint::new(
        x,
        y.ok_or_else(|| CliError::Parse("--at needs y=...".to_string()))?,
        kappa,
        a,
    ))
}

fn cmd_solve(io: &IoArgs, particular_only: bool) -> Result<(), CliError> {
    let spec = load_spec(io)?;
    let doc = if particular_only {
        let particular =
            kernels::particular(&spec.rhs_poly()).map_err(|e| CliError::Parse(e.to_string()))?;
        SolutionDocument::from_parts(&particular, solver::uniqueness_report(&spec), &[])
    } else {
        SolutionDocument::from_solution(&solve_spec(&spec)?)
    };
    write_output(&io.output, &doc.to_json())
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn grid_points(spec: &ProblemSpec, per_axis: usize) -> Vec<EvalPoint> {
    let n = spec.dim();
    let a = helmholtz_layer::verify::to_f64(spec.width());
    let kappa = helmholtz_layer::verify::to_f64(spec.kappa());
    let coords = |lo: f64, hi: f64| -> Vec<f64> {
        (0..per_axis)
            .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / per_axis as f64)
            .collect()
    };
    let xs = coords(-1.0, 1.0);
    let ys = coords(0.1 * a, 0.9 * a);
    // odometer over n x-axes plus y
    let mut pts = Vec::new();
    let mut idx = vec![0usize; n + 1];
    loop {
        let x: Vec<f64> = (0..n).map(|i| xs[idx[i]]).collect();
        let y = ys[idx[n]];
        pts.push(EvalPoint::new(x, y, kappa, a));
        let mut axis = 0;
        loop {
            if axis == idx.len() {
                return pts;
            }
            idx[axis] += 1;
            if idx[axis] < per_axis {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    io: &IoArgs,
    check_solution: &Option<String>,
    poisson_limit: &Option<String>,
    grid: usize,
    tol_fd: f64,
    tol_limit: f64,
    fd_step: f64,
) -> Result<(), CliError> {
    let spec = load_spec(io)?;
    let u: QuasiPoly = match check_solution {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Parse(format!("cannot read {path}: {e}")))?;
            SolutionDocument::from_json(&text)
                .and_then(|d| d.to_quasipoly())
                .map_err(|e| CliError::Parse(e.to_string()))?
        }
        None => solve_spec(&spec)?.u,
    };

    let mut checks: Vec<Check> = Vec::new();

    let residual =
        verify::residual_symbolic(&u, &spec).map_err(|e| CliError::Parse(e.to_string()))?;
    checks.push(Check {
        name: "residual_symbolic",
        passed: residual.is_zero(),
        detail: format!("{} residual terms", residual.terms().len()),
    });

    let bottom = u.subst_y(LayerFace::Bottom).sub(&spec.phi_poly());
    let top = match spec.bc() {
        Bc::Dirichlet => u.subst_y(LayerFace::Top).sub(&spec.psi_poly()),
        Bc::DirichletNeumann => calculus::ddy(&u)
            .subst_y(LayerFace::Top)
            .sub(&spec.psi_poly()),
    };
    for (name, trace) in [("boundary_bottom", bottom), ("boundary_top", top)] {
        match trace {
            Ok(t) => checks.push(Check {
                name,
                passed: t.is_zero(),
                detail: format!("{} residual terms", t.terms().len()),
            }),
            Err(e) => checks.push(Check {
                name,
                passed: false,
                detail: e.to_string(),
            }),
        }
    }

    let mut worst_rel: f64 = 0.0;
    let mut fd_failure: Option<String> = None;
    let pts = grid_points(&spec, grid.max(2));
    for pt in &pts {
        match (
            verify::residual_fd(&u, &spec, pt, fd_step),
            verify::residual_fd_scale(&u, &spec, pt, fd_step),
        ) {
            (Ok(r), Ok(scale)) => worst_rel = worst_rel.max(r / scale),
            (Err(e), _) | (_, Err(e)) => {
                fd_failure = Some(e.to_string());
                break;
            }
        }
    }
    checks.push(match fd_failure {
        Some(e) => Check {
            name: "residual_fd",
            passed: false,
            detail: e,
        },
        None => Check {
            name: "residual_fd",
            passed: worst_rel <= tol_fd,
            detail: format!(
                "max relative {worst_rel:.3e} over {} grid points",
                pts.len()
            ),
        },
    });

    if let Some(path) = poisson_limit {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {path}: {e}")))?;
        let limit = LimitDocument::from_json(&text)
            .and_then(|d| d.to_quasipoly(spec.mode(), spec.dim(), spec.basis()))
            .map_err(|e| CliError::Parse(e.to_string()))?;
        let tol = Tolerances {
            poisson_limit_abs: tol_limit,
            ..Tolerances::default()
        };
        let pts: Vec<RationalPoint> = grid_points(&spec, 2)
            .iter()
            .map(RationalPoint::from_eval_point)
            .collect();
        let report = verify::poisson_limit_check(|_| u.clone(), &limit, &pts, &tol)
            .map_err(|e| CliError::Parse(e.to_string()))?;
        checks.push(Check {
            name: "poisson_limit",
            passed: report.passed,
            detail: format!(
                "discrepancies {:?}, rates {:?}",
                report.discrepancies, report.rates
            ),
        });
    }

    let passed = checks.iter().all(|c| c.passed);
    let json = serde_json::json!({
        "passed": passed,
        "checks": checks.iter().map(|c| serde_json::json!({
            "name": c.name,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    });
    write_output(
        &io.output,
        &serde_json::to_string_pretty(&json).expect("report"),
    )?;
    if passed {
        Ok(())
    } else {
        Err(CliError::VerificationFailed)
    }
}

fn cmd_eval(io: &IoArgs, solution: &Option<String>, at: &str) -> Result<(), CliError> {
    let (u, _spec) = match solution {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Parse(format!("cannot read {path}: {e}")))?;
            let doc =
                SolutionDocument::from_json(&text).map_err(|e| CliError::Parse(e.to_string()))?;
            let u = doc
                .to_quasipoly()
                .map_err(|e| CliError::Parse(e.to_string()))?;
            (u, None)
        }
        None => {
            let spec = load_spec(io)?;
            let u = solve_spec(&spec)?.u;
            (u, Some(spec))
        }
    };
    let pt = parse_at(at, u.dim())?;
    let value = u
        .eval(&pt)
        .map_err(|e| CliError::Conditioning(e.to_string()))?;
    write_output(&io.output, &format_significant(value))
}

fn cmd_kernels(
    family: &str,
    mode: &str,
    m: u32,
    multiindex: &Option<String>,
) -> Result<(), CliError> {
    let mode = match mode {
        "hyperbolic" => Mode::Hyperbolic,
        "circular" => Mode::Circular,
        other => return Err(CliError::Parse(format!("unknown mode {other:?}"))),
    };
    let family = match family {
        "dirichlet" => KernelFamily::dirichlet(mode),
        "dn-p" => KernelFamily::mixed_value(mode),
        "dn-q" => KernelFamily::mixed_flux(mode),
        other => {
            return Err(CliError::Parse(format!(
                "unknown family {other:?} (expected dirichlet, dn-p, or dn-q)"
            )))
        }
    };
    let kernel = match multiindex {
        Some(mi) => {
            let exps: Vec<u32> = mi
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u32>()
                        .map_err(|_| CliError::Parse(format!("bad multiindex entry {s:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            kernels::multiindex_p(family, &MultiIndex::new(exps))
        }
        None => kernels::p2m(family, m),
    };
    println!("text:  {}", render::text(&kernel));
    println!("latex: {}", render::latex(&kernel));
    Ok(())
}

fn run() -> Result<(), CliError> {
    let cli = Cli::try_parse().map_err(|e| {
        use clap::error::ErrorKind;
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
            print!("{e}");
            std::process::exit(0);
        }
        CliError::Parse(e.to_string())
    })?;
    match &cli.command {
        Command::Solve {
            io,
            particular_only,
        } => cmd_solve(io, *particular_only),
        Command::Verify {
            io,
            check_solution,
            poisson_limit,
            grid,
            tol_fd,
            tol_limit,
            fd_step,
        } => cmd_verify(
            io,
            check_solution,
            poisson_limit,
            *grid,
            *tol_fd,
            *tol_limit,
            *fd_step,
        ),
        Command::Eval { io, solution, at } => cmd_eval(io, solution, at),
        Command::Kernels {
            family,
            mode,
            m,
            multiindex,
        } => cmd_kernels(family, mode, *m, multiindex),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Parse(msg) => eprintln!("error: {msg}"),
                CliError::Conditioning(msg) => eprintln!("error: {msg}"),
                CliError::VerificationFailed => eprintln!("error: verification failed"),
            }
            ExitCode::from(e.code())
        }
    }
}
