use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use psh_forge::certify::{certify_psh, empirical_threshold, neighborhood_csv, Family};
use psh_forge::levi::{build_candidate, leading_minors};
use psh_forge::polyalg::serial::real_from_json_infer;
use psh_forge::polyalg::{BivariatePoly, FloatPoly};
use psh_forge::rational::{parse_q, to_f64, fmt_q, Q};
use psh_forge::retract::{
    flow, glue, retraction_check, FlowOptions, DEFAULT_EPSILON, DEFAULT_MAX_STEPS, DEFAULT_RADIUS, DEFAULT_TOL,
};
use psh_forge::subspace::{distance_form_for, real_distance_form, JordanSpec};
use psh_forge::suite::{run_suite, Fault, SuiteConfig, SuiteSizes};
use psh_forge::{json, Error};

#[derive(Parser)]
#[command(name = "psh-forge", version, about = "Plurisubharmonic defining functions for unions of totally real subspaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    DiagUniform,
    DiagPair,
    ComplexEqual,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum FieldArg {
    Rho,
    Rho0,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact identity suite.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Run one group only.
        #[arg(long)]
        only: Option<String>,
        /// Reduced case counts.
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Sample all leading minors of the complex Hessian on the unit sphere.
    Certify {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value = "p21")]
        poly: String,
        /// Defaults to 100000 for n = 2 and 10000 otherwise.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV of minor values around the worst sample of the last minor.
        #[arg(long)]
        neighborhood: Option<PathBuf>,
    },
    /// Bisect the largest family scalar that still certifies.
    Threshold {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "p21")]
        poly: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// Bracket width.
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gradient flow of the glued field: one trajectory with --point, else a seeded retraction experiment.
    Flow {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value = "p21")]
        poly: String,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        starts: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        #[arg(long, default_value_t = 2)]
        cutoff_order: u32,
        #[arg(long)]
        point: Option<String>,
        /// Trace CSV for a single trajectory.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Squared distances to M and N at a point `x1,…,xn,y1,…,yn`.
    Dist {
        #[arg(long)]
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV grid of ρ or ρ₀ over a coordinate plane, other coordinates zero.
    Slice {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value = "p21")]
        poly: String,
        /// Two coordinates, e.g. x1:y1.
        #[arg(long, default_value = "x1:y1")]
        plane: String,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Half-width of the square; defaults to twice the radius.
        #[arg(long)]
        extent: Option<f64>,
        #[arg(long, value_enum, default_value = "rho")]
        field: FieldArg,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) => Failure::Math(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn load_spec(arg: &str) -> Result<JordanSpec, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("cannot read spec {arg}: {e}")))?
    };
    Ok(JordanSpec::from_json(&text)?)
}

fn load_poly(arg: &str) -> Result<BivariatePoly, Failure> {
    match arg {
        "p21" => Ok(BivariatePoly::p21()),
        "p315" => Ok(BivariatePoly::p315()),
        text if text.trim_start().starts_with('[') => Ok(BivariatePoly::new(real_from_json_infer(text)?)?),
        other => Err(Failure::Usage(format!("unknown polynomial {other}; use p21, p315 or JSON term records"))),
    }
}

fn parse_point(text: &str) -> Result<Vec<Q>, Failure> {
    text.split(',').map(|s| parse_q(s.trim()).map_err(Failure::from)).collect()
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            Ok(())
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn coordinate_index(name: &str, n: usize) -> Result<usize, Failure> {
    let bad = || Failure::Usage(format!("bad coordinate {name}; expected x1..x{n} or y1..y{n}"));
    let (offset, rest) = match name.split_at_checked(1) {
        Some(("x", rest)) => (0, rest),
        Some(("y", rest)) => (n, rest),
        _ => return Err(bad()),
    };
    let j: usize = rest.parse().map_err(|_| bad())?;
    if j == 0 || j > n {
        return Err(bad());
    }
    Ok(offset + j - 1)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Verify { seed, only, quick, out, inject_fault } => {
            let sizes = if quick { SuiteSizes::quick() } else { SuiteSizes::default() };
            let cfg = SuiteConfig { seed, only, sizes, fault: inject_fault.then_some(Fault::Lemma3Rhs) };
            let report = run_suite(&cfg)?;
            emit(&out, &json::to_string(&report))?;
            if let Some(f) = report.first_failure() {
                eprintln!("{} failed: {}", f.lemma, f.witness.as_deref().unwrap_or("no witness"));
            }
            Ok(report.pass)
        }
        Command::Certify { spec, poly, samples, seed, out, neighborhood } => {
            let spec = load_spec(&spec)?;
            let p = load_poly(&poly)?;
            let samples = samples.unwrap_or(if spec.n == 2 { 100_000 } else { 10_000 });
            let cert = certify_psh(&spec, &p, samples, seed)?;
            emit(&out, &json::to_string(&cert))?;
            if let Some(path) = neighborhood {
                let c = build_candidate(&spec, &p)?;
                let minors = leading_minors(&c)?;
                let center = &cert.reports.last().expect("at least one minor").argmin;
                write_file(&path, &neighborhood_csv(&minors, center, 1e-2, 200, seed))?;
            }
            if !cert.pass() {
                let worst = cert
                    .reports
                    .iter()
                    .zip(&cert.tolerances)
                    .find(|(r, t)| r.min <= **t)
                    .map(|(r, _)| format!("{} has sampled minimum {:e} at {:?}", r.poly_id, r.min, r.argmin))
                    .unwrap_or_else(|| "zero set check failed".into());
                eprintln!("certification failed: {worst}");
            }
            Ok(cert.pass())
        }
        Command::Threshold { family, n, poly, samples, seed, tol, out } => {
            let family = match family {
                FamilyArg::DiagUniform => Family::DiagUniform,
                FamilyArg::DiagPair => Family::DiagPair,
                FamilyArg::ComplexEqual => Family::ComplexEqual,
            };
            let report = empirical_threshold(family, n, &load_poly(&poly)?, samples, seed, tol)?;
            emit(&out, &json::to_string(&report))?;
            Ok(report.monotone)
        }
        Command::Flow { spec, poly, eps, radius, tol, seed, starts, max_steps, cutoff_order, point, trace, out } => {
            let spec = load_spec(&spec)?;
            let c = build_candidate(&spec, &load_poly(&poly)?)?;
            let field = glue(&c, radius, eps, cutoff_order)?;
            match point {
                Some(point) => {
                    let start: Vec<f64> = parse_point(&point)?.iter().map(to_f64).collect();
                    let opts = FlowOptions { max_steps, tol, ..FlowOptions::default() };
                    let t = flow(&field, &start, &opts)?;
                    if let Some(path) = trace {
                        write_file(&path, &t.to_csv())?;
                    }
                    let summary = json!({
                        "start": start,
                        "end": t.last().point,
                        "value": t.last().value,
                        "steps": t.steps.len() - 1,
                        "termination": t.termination,
                        "final_distance": t.final_distance,
                        "monotonicity_violations": t.monotonicity_violations,
                    });
                    emit(&out, &json::to_string(&summary))?;
                    Ok(t.converged() && t.monotonicity_violations == 0)
                }
                None => {
                    let report = retraction_check(&field, starts, seed, tol)?;
                    emit(&out, &json::to_string(&report))?;
                    Ok(report.pass)
                }
            }
        }
        Command::Dist { spec, point, out } => {
            let spec = load_spec(&spec)?;
            let w = parse_point(&point)?;
            if w.len() != 2 * spec.n {
                return Err(Failure::Usage(format!("point needs {} coordinates, got {}", 2 * spec.n, w.len())));
            }
            let dm = distance_form_for(&spec)?.eval(&w);
            let dn = real_distance_form(spec.n).eval(&w);
            let report = json!({
                "point": w.iter().map(fmt_q).collect::<Vec<_>>(),
                "d_m": fmt_q(&dm),
                "d_n": fmt_q(&dn),
                "d_m_f64": to_f64(&dm),
                "d_n_f64": to_f64(&dn),
            });
            emit(&out, &json::to_string(&report))?;
            Ok(true)
        }
        Command::Slice { spec, poly, plane, grid, extent, field, eps, radius, out } => {
            let spec = load_spec(&spec)?;
            let c = build_candidate(&spec, &load_poly(&poly)?)?;
            let (a, b) = plane
                .split_once(':')
                .ok_or_else(|| Failure::Usage(format!("plane must look like x1:y1, got {plane}")))?;
            let (ia, ib) = (coordinate_index(a, spec.n)?, coordinate_index(b, spec.n)?);
            if ia == ib || grid < 2 {
                return Err(Failure::Usage("plane needs two distinct coordinates and grid ≥ 2".into()));
            }
            let extent = extent.unwrap_or(2.0 * radius);
            let glued = if field == FieldArg::Rho0 { Some(glue(&c, radius, eps, 2)?) } else { None };
            let rho = FloatPoly::from_poly(&c.rho);
            let coord = |k: usize| -extent + 2.0 * extent * k as f64 / (grid - 1) as f64;
            let mut csv = String::new();
            for i in 0..grid {
                let row: Vec<String> = (0..grid)
                    .map(|j| {
                        let mut w = vec![0.0; 2 * spec.n];
                        w[ia] = coord(i);
                        w[ib] = coord(j);
                        let v = match &glued {
                            Some(g) => g.value(&w).unwrap_or(f64::NAN),
                            None => rho.eval(&w),
                        };
                        format!("{v:.16e}")
                    })
                    .collect();
                csv.push_str(&row.join(","));
                csv.push('\n');
            }
            match &out {
                Some(path) => write_file(path, &csv)?,
                None => {
                    let _ = std::io::stdout().lock().write_all(csv.as_bytes());
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("PSH_FORGE_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool is set once");
            }
            _ => {
                eprintln!("PSH_FORGE_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
