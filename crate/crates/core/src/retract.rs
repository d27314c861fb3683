//! The glued field `ρ₀` near `M ∪ N` and the negative gradient flow that
//! retracts its sublevel sets onto `M ∪ N`.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certify::{min_over, sphere_points};
use crate::error::{Error, Result};
use crate::levi::PshCandidate;
use crate::polyalg::{xy_names, FloatPoly};
use crate::report::VerificationReport;
use crate::subspace::{real_subspace_basis, subspace_basis, jordan_matrix};
use crate::rational::to_f64;

pub const DEFAULT_RADIUS: f64 = 1.0;
pub const DEFAULT_EPSILON: f64 = 0.05;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_STEPS: usize = 100_000;
/// Gradient norms vanish polynomially towards the origin, so the gradient
/// stop is effectively disabled unless asked for.
pub const DEFAULT_GRAD_TOL: f64 = 1e-300;

/// Hermite smoothstep of the given order in the squared radius, 1 on `[0, R²]` and 0 beyond `(2R)²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    pub order: u32,
    pub radius: f64,
}

fn binom(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl Cutoff {
    pub fn new(order: u32, radius: f64) -> Result<Self> {
        if order == 0 || !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Contract("cutoff needs order ≥ 1 and a positive radius".into()));
        }
        Ok(Cutoff { order, radius })
    }

    fn unit(&self, t: f64) -> f64 {
        let r2 = self.radius * self.radius;
        (t - r2) / (3.0 * r2)
    }

    /// `S_N(s) = s^{N+1} Σ_k C(N+k, k) C(2N+1, N−k) (−s)^k`.
    fn step(&self, s: f64) -> f64 {
        let n = self.order as u64;
        let sum: f64 = (0..=n).map(|k| binom(n + k, k) * binom(2 * n + 1, n - k) * (-s).powi(k as i32)).sum();
        s.powi(self.order as i32 + 1) * sum
    }

    /// `χ(t)` at squared radius `t`.
    pub fn chi(&self, t: f64) -> f64 {
        let s = self.unit(t);
        if s <= 0.0 {
            1.0
        } else if s >= 1.0 {
            0.0
        } else {
            1.0 - self.step(s)
        }
    }

    /// `χ'(t)`.
    pub fn dchi(&self, t: f64) -> f64 {
        let s = self.unit(t);
        if s <= 0.0 || s >= 1.0 {
            return 0.0;
        }
        let n = self.order as u64;
        let scale = binom(2 * n + 1, n) * (n + 1) as f64;
        let r2 = self.radius * self.radius;
        -scale * (s * (1.0 - s)).powi(self.order as i32) / (3.0 * r2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    Ball,
    TubeM,
    TubeN,
    Outside,
}

/// `ρ₀ = θρ + (1−θ) d_M 1_{T_M} + (1−θ) d_N 1_{T_N}` on `B_R ∪ T_ε`, `θ = χ(|z|²)`.
#[derive(Clone, Debug)]
pub struct GluedField {
    pub n: usize,
    pub epsilon: f64,
    pub cutoff: Cutoff,
    rho: FloatPoly,
    grad_rho: Vec<FloatPoly>,
    hess_rho: Vec<Vec<FloatPoly>>,
    q_m: Vec<Vec<f64>>,
    q_n: Vec<Vec<f64>>,
    /// `min_{|z|=1} max(d_M, d_N)` from sampling.
    pub separation: f64,
}

fn quad(q: &[Vec<f64>], w: &[f64]) -> f64 {
    q.iter().zip(w).map(|(row, wi)| wi * row.iter().zip(w).map(|(a, b)| a * b).sum::<f64>()).sum()
}

fn quad_grad(q: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    q.iter().map(|row| 2.0 * row.iter().zip(w).map(|(a, b)| a * b).sum::<f64>()).collect()
}

fn norm_sq(w: &[f64]) -> f64 {
    w.iter().map(|x| x * x).sum()
}

/// Samples used to estimate tube separation.
pub const SEPARATION_SAMPLES: usize = 20_000;

pub fn glue(c: &PshCandidate, radius: f64, epsilon: f64, cutoff_order: u32) -> Result<GluedField> {
    let cutoff = Cutoff::new(cutoff_order, radius)?;
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Contract("epsilon must be positive".into()));
    }
    let dim = 2 * c.n();
    let grad = c.rho.gradient();
    let hess = grad.iter().map(|g| g.gradient().iter().map(FloatPoly::from_poly).collect()).collect();
    let q_m = c.q_m.to_f64_matrix();
    let q_n = c.q_n.to_f64_matrix();
    let points = sphere_points(dim, SEPARATION_SAMPLES, 0x7e57);
    let (_, separation) = min_over(&points, |w| quad(&q_m, w).max(quad(&q_n, w)));
    if separation * radius * radius <= epsilon {
        return Err(Error::Contract(format!(
            "tubes overlap beyond radius {radius}: max(d_M, d_N) drops to {:.3e} < ε = {epsilon}; lower epsilon",
            separation * radius * radius
        )));
    }
    Ok(GluedField {
        n: c.n(),
        epsilon,
        cutoff,
        rho: FloatPoly::from_poly(&c.rho),
        grad_rho: grad.iter().map(FloatPoly::from_poly).collect(),
        hess_rho: hess,
        q_m,
        q_n,
        separation,
    })
}

impl GluedField {
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn d_m(&self, w: &[f64]) -> f64 {
        quad(&self.q_m, w)
    }

    pub fn d_n(&self, w: &[f64]) -> f64 {
        quad(&self.q_n, w)
    }

    pub fn rho(&self, w: &[f64]) -> f64 {
        self.rho.eval(w)
    }

    pub fn region(&self, w: &[f64]) -> Region {
        let r = self.cutoff.radius;
        if norm_sq(w) <= r * r {
            Region::Ball
        } else if self.d_m(w) < self.epsilon {
            Region::TubeM
        } else if self.d_n(w) < self.epsilon {
            Region::TubeN
        } else {
            Region::Outside
        }
    }

    /// `ρ₀(w)`, or `None` outside `B_R ∪ T_ε`.
    pub fn value(&self, w: &[f64]) -> Option<f64> {
        let region = self.region(w);
        let tube = match region {
            Region::Ball => return Some(self.rho(w)),
            Region::TubeM => self.d_m(w),
            Region::TubeN => self.d_n(w),
            Region::Outside => return None,
        };
        let theta = self.cutoff.chi(norm_sq(w));
        let inner = if theta > 0.0 { theta * self.rho(w) } else { 0.0 };
        Some(inner + (1.0 - theta) * tube)
    }

    /// `∇ρ₀ = θ∇ρ + (1−θ)∇d + 2χ'(|z|²)(ρ − d) z` on a tube.
    pub fn gradient(&self, w: &[f64]) -> Option<Vec<f64>> {
        let region = self.region(w);
        let grad_rho = || self.grad_rho.iter().map(|g| g.eval(w)).collect::<Vec<f64>>();
        let q = match region {
            Region::Ball => return Some(grad_rho()),
            Region::TubeM => &self.q_m,
            Region::TubeN => &self.q_n,
            Region::Outside => return None,
        };
        let t = norm_sq(w);
        let theta = self.cutoff.chi(t);
        let dchi = self.cutoff.dchi(t);
        let d = quad(q, w);
        let gd = quad_grad(q, w);
        if theta == 0.0 {
            return Some(gd);
        }
        let gr = grad_rho();
        let rho = self.rho(w);
        Some(
            (0..w.len())
                .map(|i| theta * gr[i] + (1.0 - theta) * gd[i] + 2.0 * dchi * (rho - d) * w[i])
                .collect(),
        )
    }

    /// `θ ℒ(ρ) + (1−θ) ℒ(d)` as a real `2n × 2n` matrix of second derivatives, valid on `M ∪ N`.
    pub fn blended_hessian(&self, w: &[f64]) -> Option<Vec<Vec<f64>>> {
        let q = match self.region(w) {
            Region::Ball => None,
            Region::TubeM => Some(&self.q_m),
            Region::TubeN => Some(&self.q_n),
            Region::Outside => return None,
        };
        let theta = if q.is_some() { self.cutoff.chi(norm_sq(w)) } else { 1.0 };
        let dim = self.dim();
        Some(
            (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| {
                            let h = self.hess_rho[i][j].eval(w);
                            let d = q.map_or(0.0, |q| 2.0 * q[i][j]);
                            theta * h + (1.0 - theta) * d
                        })
                        .collect()
                })
                .collect(),
        )
    }
}

/// Levi matrix `∂²f/∂z_j∂z̄_k` of a real Hessian in `(x, y)` coordinates, as `(re, im)` parts.
pub fn levi_from_real_hessian(h: &[Vec<f64>], n: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let mut re = vec![vec![0.0; n]; n];
    let mut im = vec![vec![0.0; n]; n];
    for j in 0..n {
        for k in 0..n {
            re[j][k] = 0.25 * (h[j][k] + h[n + j][n + k]);
            im[j][k] = 0.25 * (h[j][n + k] - h[n + j][k]);
        }
    }
    (re, im)
}

/// Smallest eigenvalue of a Hermitian matrix through its real `2n × 2n` form.
pub fn hermitian_min_eigenvalue(re: &[Vec<f64>], im: &[Vec<f64>]) -> f64 {
    let n = re.len();
    let m = DMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => re[i][j],
        (false, false) => re[i - n][j - n],
        (true, false) => -im[i][j - n],
        (false, true) => im[i - n][j],
    });
    SymmetricEigen::new(m).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// `min(d_M, d_N) < tol`.
    Converged,
    GradientVanished,
    BudgetExhausted,
    /// No step size below the floor decreases the field.
    Stalled,
    DomainExit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowStep {
    pub point: Vec<f64>,
    pub value: f64,
    pub grad_norm: f64,
    pub step: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowTrace {
    pub steps: Vec<FlowStep>,
    pub termination: Termination,
    pub final_distance: f64,
    /// Accepted steps on which the value did not strictly decrease.
    pub monotonicity_violations: usize,
}

impl FlowTrace {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    pub fn last(&self) -> &FlowStep {
        self.steps.last().expect("trace has its start")
    }

    pub fn to_csv(&self) -> String {
        let n = self.last().point.len() / 2;
        let mut out = format!("step,{},value,gradnorm\n", xy_names(n).join(","));
        for (i, s) in self.steps.iter().enumerate() {
            let coords: Vec<String> = s.point.iter().map(|x| format!("{x:.16e}")).collect();
            out.push_str(&format!("{i},{},{:.16e},{:.16e}\n", coords.join(","), s.value, s.grad_norm));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowOptions {
    pub max_steps: usize,
    pub tol: f64,
    pub grad_tol: f64,
    /// Keep every accepted step, or only the endpoints.
    pub keep_steps: bool,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions { max_steps: DEFAULT_MAX_STEPS, tol: DEFAULT_TOL, grad_tol: DEFAULT_GRAD_TOL, keep_steps: true }
    }
}

const MIN_STEP: f64 = 1e-300;

fn axpy(w: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    w.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

fn rk4(field: &GluedField, w: &[f64], g0: &[f64], h: f64) -> Option<Vec<f64>> {
    let k1: Vec<f64> = g0.iter().map(|g| -g).collect();
    let k2: Vec<f64> = field.gradient(&axpy(w, 0.5 * h, &k1))?.iter().map(|g| -g).collect();
    let k3: Vec<f64> = field.gradient(&axpy(w, 0.5 * h, &k2))?.iter().map(|g| -g).collect();
    let k4: Vec<f64> = field.gradient(&axpy(w, h, &k3))?.iter().map(|g| -g).collect();
    Some((0..w.len()).map(|i| w[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect())
}

/// Negative gradient flow of `ρ₀` by RK4; the step halves whenever the value
/// would not decrease and doubles after each accepted step.
pub fn flow(field: &GluedField, start: &[f64], opts: &FlowOptions) -> Result<FlowTrace> {
    if start.len() != field.dim() {
        return Err(Error::VarMismatch { expected: field.dim(), got: start.len() });
    }
    let value = field
        .value(start)
        .ok_or_else(|| Error::Contract("start lies outside B_R ∪ T_ε".into()))?;
    if !(value < field.epsilon) {
        return Err(Error::Contract(format!("start has ρ₀ = {value:e} ≥ ε = {}", field.epsilon)));
    }
    let mut w = start.to_vec();
    let mut value = value;
    let mut grad = field.gradient(&w).expect("inside domain");
    let gnorm = |g: &[f64]| norm_sq(g).sqrt();
    let mut h = 1.0;
    let mut steps = vec![FlowStep { point: w.clone(), value, grad_norm: gnorm(&grad), step: 0.0 }];
    let mut violations = 0;
    let distance = |w: &[f64]| field.d_m(w).min(field.d_n(w));
    let mut accepted = 0;
    let termination = loop {
        if distance(&w) < opts.tol {
            break Termination::Converged;
        }
        if gnorm(&grad) < opts.grad_tol {
            break Termination::GradientVanished;
        }
        if accepted >= opts.max_steps {
            break Termination::BudgetExhausted;
        }
        let mut exited = false;
        let next = loop {
            if h < MIN_STEP {
                break None;
            }
            match rk4(field, &w, &grad, h).and_then(|p| field.value(&p).map(|v| (p, v))) {
                Some((p, v)) if v < value => break Some((p, v)),
                Some(_) => exited = false,
                None => exited = true,
            }
            h *= 0.5;
        };
        let Some((p, v)) = next else {
            break if exited { Termination::DomainExit } else { Termination::Stalled };
        };
        if !(v < value) {
            violations += 1;
        }
        w = p;
        value = v;
        grad = field.gradient(&w).expect("inside domain");
        accepted += 1;
        let step = FlowStep { point: w.clone(), value, grad_norm: gnorm(&grad), step: h };
        if opts.keep_steps || steps.len() < 2 {
            steps.push(step);
        } else {
            *steps.last_mut().expect("non-empty") = step;
        }
        h *= 2.0;
    };
    Ok(FlowTrace { final_distance: distance(&w), steps, termination, monotonicity_violations: violations })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RetractionReport {
    pub requested: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub radius: f64,
    pub tol: f64,
    /// Starts that met the precondition and were flowed.
    pub accepted: usize,
    /// Supplied starts outside `Ω_ε`.
    pub rejected: usize,
    pub converged: usize,
    pub max_final_distance: f64,
    pub monotonicity_violations: usize,
    pub terminations: Vec<(Termination, usize)>,
    /// Start and endpoint of the first non-converged trajectory.
    pub witness: Option<(Vec<f64>, Vec<f64>)>,
    pub pass: bool,
}

/// Seeded points of `Ω_ε`, rejection-sampled uniformly from the ball of radius `3R`.
pub fn sample_omega(field: &GluedField, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let dim = field.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let big = 3.0 * field.cutoff.radius;
    let mut out = Vec::with_capacity(count);
    let limit = 10_000_000usize.max(count * 100_000);
    let mut tries = 0usize;
    while out.len() < count {
        tries += 1;
        if tries > limit {
            return Err(Error::Consistency(format!("Ω_ε too thin to sample: {} of {count} after {limit} tries", out.len())));
        }
        let g: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = norm_sq(&g).sqrt();
        if norm == 0.0 {
            continue;
        }
        let r = big * rng.random::<f64>().powf(1.0 / dim as f64);
        let w: Vec<f64> = g.iter().map(|x| x / norm * r).collect();
        if field.value(&w).is_some_and(|v| v < field.epsilon) {
            out.push(w);
        }
    }
    Ok(out)
}

pub fn retraction_check(field: &GluedField, n_starts: usize, seed: u64, tol: f64) -> Result<RetractionReport> {
    let starts = sample_omega(field, n_starts, seed)?;
    retraction_check_from(field, &starts, seed, tol)
}

/// Flows every supplied start; starts outside `Ω_ε` are counted as rejected.
pub fn retraction_check_from(field: &GluedField, starts: &[Vec<f64>], seed: u64, tol: f64) -> Result<RetractionReport> {
    let opts = FlowOptions { tol, keep_steps: false, ..FlowOptions::default() };
    let results: Vec<Option<FlowTrace>> = starts
        .par_iter()
        .map(|s| match flow(field, s, &opts) {
            Ok(t) => Ok(Some(t)),
            Err(Error::Contract(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let mut report = RetractionReport {
        requested: starts.len(),
        seed,
        epsilon: field.epsilon,
        radius: field.cutoff.radius,
        tol,
        accepted: 0,
        rejected: 0,
        converged: 0,
        max_final_distance: 0.0,
        monotonicity_violations: 0,
        terminations: Vec::new(),
        witness: None,
        pass: false,
    };
    for (start, result) in starts.iter().zip(&results) {
        let Some(trace) = result else {
            report.rejected += 1;
            continue;
        };
        report.accepted += 1;
        report.max_final_distance = report.max_final_distance.max(trace.final_distance);
        report.monotonicity_violations += trace.monotonicity_violations;
        if trace.converged() {
            report.converged += 1;
        } else if report.witness.is_none() {
            report.witness = Some((start.clone(), trace.last().point.clone()));
        }
        match report.terminations.iter_mut().find(|(t, _)| *t == trace.termination) {
            Some(entry) => entry.1 += 1,
            None => report.terminations.push((trace.termination, 1)),
        }
    }
    report.pass = report.converged == report.accepted && report.monotonicity_violations == 0;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NestingReport {
    pub levels: Vec<f64>,
    pub grid_points: usize,
    pub in_domain: usize,
    pub violations: usize,
    pub pass: bool,
}

/// Membership of `Ω_t` along increasing levels on a regular grid of `[−2R, 2R]^{2n}`.
pub fn nesting_check(field: &GluedField, levels: &[f64], grid: usize) -> Result<NestingReport> {
    if levels.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Contract("levels must be strictly increasing".into()));
    }
    if grid < 2 {
        return Err(Error::Contract("grid needs at least two points per axis".into()));
    }
    let dim = field.dim();
    let total = grid.checked_pow(dim as u32).filter(|t| *t <= 50_000_000).ok_or_else(|| {
        Error::SizeLimit(format!("grid {grid}^{dim} is too large"))
    })?;
    let span = 2.0 * field.cutoff.radius;
    let coord = |k: usize| -span + 2.0 * span * k as f64 / (grid - 1) as f64;
    let (in_domain, violations) = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let w: Vec<f64> = (0..dim)
                .map(|_| {
                    let c = coord(idx % grid);
                    idx /= grid;
                    c
                })
                .collect();
            match field.value(&w) {
                None => (0, 0),
                Some(v) => {
                    let member: Vec<bool> = levels.iter().map(|t| v < *t).collect();
                    let bad = member.windows(2).filter(|m| m[0] && !m[1]).count();
                    (1, bad)
                }
            }
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(NestingReport { levels: levels.to_vec(), grid_points: total, in_domain, violations, pass: violations == 0 })
}

/// Central-difference gradient of `ρ₀`.
pub fn numeric_gradient(field: &GluedField, w: &[f64], h: f64) -> Option<Vec<f64>> {
    (0..w.len())
        .map(|i| {
            let mut a = w.to_vec();
            let mut b = w.to_vec();
            a[i] += h;
            b[i] -= h;
            Some((field.value(&a)? - field.value(&b)?) / (2.0 * h))
        })
        .collect()
}

/// Central-difference Hessian of `ρ₀`.
pub fn numeric_hessian(field: &GluedField, w: &[f64], h: f64) -> Option<Vec<Vec<f64>>> {
    let dim = w.len();
    let f = |di: i32, i: usize, dj: i32, j: usize| {
        let mut p = w.to_vec();
        p[i] += di as f64 * h;
        p[j] += dj as f64 * h;
        field.value(&p)
    };
    let mut out = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            out[i][j] = (f(1, i, 1, j)? - f(1, i, -1, j)? - f(-1, i, 1, j)? + f(-1, i, -1, j)?) / (4.0 * h * h);
        }
    }
    Some(out)
}

/// Seeded points on a tube in the shell `R < |z| < 2R`, near `M` or `N`.
fn shell_points(field: &GluedField, c: &PshCandidate, count: usize, seed: u64, on_set: bool) -> Result<Vec<Vec<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bm = subspace_basis(&jordan_matrix(&c.spec)?)?;
    let bn = real_subspace_basis(c.n());
    let bases: Vec<Vec<Vec<f64>>> = [bm, bn]
        .iter()
        .map(|b| b.vectors.iter().map(|v| v.iter().map(to_f64).collect()).collect())
        .collect();
    let r = field.cutoff.radius;
    let dim = field.dim();
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        if tries > count * 1000 {
            return Err(Error::Consistency("could not place shell points inside the tubes".into()));
        }
        let basis = &bases[out.len() % 2];
        let coeffs: Vec<f64> = basis.iter().map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let mut w: Vec<f64> = (0..dim).map(|i| basis.iter().zip(&coeffs).map(|(v, k)| v[i] * k).sum()).collect();
        let norm = norm_sq(&w).sqrt();
        let target = r * rng.random_range(1.1..1.9);
        w.iter_mut().for_each(|x| *x *= target / norm);
        if !on_set {
            let off = (field.epsilon / 4.0).sqrt();
            for x in w.iter_mut() {
                *x += off / (dim as f64).sqrt() * rng.random_range(-1.0..1.0);
            }
        }
        if matches!(field.region(&w), Region::TubeM | Region::TubeN) {
            out.push(w);
        }
    }
    Ok(out)
}

/// Analytic against central-difference gradient of `ρ₀` at seeded shell points.
pub fn blend_smoothness_check(field: &GluedField, c: &PshCandidate, count: usize, seed: u64) -> Result<VerificationReport> {
    let pts = shell_points(field, c, count, seed, false)?;
    let mut worst = (0.0f64, None);
    for p in &pts {
        let (Some(a), Some(d)) = (field.gradient(p), numeric_gradient(field, p, 1e-5)) else { continue };
        let err = a.iter().zip(&d).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        if err > worst.0 {
            worst = (err, Some(p.clone()));
        }
    }
    Ok(VerificationReport::new("blend gradient", json!({"points": count, "seed": seed, "tolerance": 1e-6}))
        .expect(worst.0 <= 1e-6, || format!("gradient error {:e} at {:?}", worst.0, worst.1)))
}

/// Finite-difference Levi form of `ρ₀` on `M ∪ N` in the shell against the
/// convex combination `θℒ(ρ) + (1−θ)ℒ(d)`, and its positivity.
pub fn levi_blend_check(field: &GluedField, c: &PshCandidate, count: usize, seed: u64) -> Result<VerificationReport> {
    let pts = shell_points(field, c, count, seed, true)?;
    let n = field.n;
    let mut err_max = 0.0f64;
    let mut min_eig = f64::INFINITY;
    let mut witness = None;
    for p in &pts {
        let (Some(hn), Some(ha)) = (numeric_hessian(field, p, 1e-4), field.blended_hessian(p)) else { continue };
        let (nre, nim) = levi_from_real_hessian(&hn, n);
        let (are, aim) = levi_from_real_hessian(&ha, n);
        let mut err = 0.0f64;
        for j in 0..n {
            for k in 0..n {
                err = err.max((nre[j][k] - are[j][k]).abs()).max((nim[j][k] - aim[j][k]).abs());
            }
        }
        if err > err_max {
            err_max = err;
            witness = Some(p.clone());
        }
        min_eig = min_eig.min(hermitian_min_eigenvalue(&are, &aim));
    }
    Ok(VerificationReport::new("Levi form blend on M ∪ N", json!({"points": count, "seed": seed, "tolerance": 1e-4}))
        .expect(err_max <= 1e-4, || format!("Levi entry error {err_max:e} at {witness:?}"))
        .expect(min_eig > 0.0, || format!("blended Levi form has eigenvalue {min_eig:e}")))
}

/// `ρ₀ > 0` at seeded domain points away from `M ∪ N`, where `min(d_M, d_N) ≥ margin·|z|²`.
pub fn positivity_check(field: &GluedField, samples: usize, seed: u64, margin: f64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = field.dim();
    let big = 3.0 * field.cutoff.radius;
    let mut worst: Option<(f64, Vec<f64>)> = None;
    let mut checked = 0;
    for _ in 0..samples {
        let w: Vec<f64> = (0..dim).map(|_| rng.random_range(-big..big)).collect();
        let t = norm_sq(&w);
        if t == 0.0 || field.d_m(&w).min(field.d_n(&w)) < margin * t {
            continue;
        }
        if let Some(v) = field.value(&w) {
            checked += 1;
            if worst.as_ref().is_none_or(|(b, _)| v < *b) {
                worst = Some((v, w));
            }
        }
    }
    let ok = worst.as_ref().is_none_or(|(v, _)| *v > 0.0);
    VerificationReport::new("rho_0 positive off M ∪ N", json!({"samples": samples, "checked": checked, "seed": seed}))
        .expect(ok, || format!("ρ₀ = {:e} at {:?}", worst.as_ref().unwrap().0, worst.as_ref().unwrap().1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levi::build_candidate;
    use crate::polyalg::BivariatePoly;
    use crate::rational::{q, qi};
    use crate::subspace::JordanSpec;

    fn field(spec: &JordanSpec) -> (PshCandidate, GluedField) {
        let c = build_candidate(spec, &BivariatePoly::p21()).unwrap();
        let f = glue(&c, DEFAULT_RADIUS, DEFAULT_EPSILON, 2).unwrap();
        (c, f)
    }

    #[test]
    fn cutoff_profile() {
        for order in 1..=4 {
            let ch = Cutoff::new(order, 1.0).unwrap();
            assert_eq!(ch.chi(0.5), 1.0);
            assert_eq!(ch.chi(4.5), 0.0);
            assert!((ch.chi(2.5) - 0.5).abs() < 1e-12);
            for k in 1..40 {
                let t = 1.0 + 3.0 * k as f64 / 40.0;
                let fd = (ch.chi(t + 1e-6) - ch.chi(t - 1e-6)) / 2e-6;
                assert!((fd - ch.dchi(t)).abs() < 1e-6, "order {order} t {t}");
                assert!(ch.dchi(t) <= 0.0);
            }
        }
    }

    #[test]
    fn field_branches() {
        let (c, f) = field(&JordanSpec::uniform(2, &q(1, 4)));
        let inside = [0.3, -0.2, 0.1, 0.25];
        assert_eq!(f.value(&inside).unwrap(), f.rho(&inside));
        let far_n = [2.1, 0.0, 0.0, 0.001];
        assert_eq!(f.region(&far_n), Region::TubeN);
        assert_eq!(f.value(&far_n).unwrap(), f.d_n(&far_n));
        let far = [1.5, 0.0, 1.5, 0.0];
        assert_eq!(f.value(&far), None);
        let on_m = [0.5, 0.5, 2.0, 2.0];
        assert_eq!(f.region(&on_m), Region::TubeM);
        assert!(f.value(&on_m).unwrap().abs() < 1e-15);
        assert!(f.gradient(&on_m).unwrap().iter().all(|g| g.abs() < 1e-14));
        assert!(blend_smoothness_check(&f, &c, 40, 3).unwrap().pass);
        assert!(levi_blend_check(&f, &c, 20, 4).unwrap().pass);
        assert!(positivity_check(&f, 20_000, 5, 1e-3).pass);
    }

    #[test]
    fn overlapping_tubes_rejected() {
        let c = build_candidate(&JordanSpec::uniform(1, &qi(0)), &BivariatePoly::p21()).unwrap();
        assert!(glue(&c, 1.0, 10.0, 2).is_err());
    }

    #[test]
    fn flow_converges_for_a_zero() {
        let (_, f) = field(&JordanSpec::uniform(2, &qi(0)));
        let start = [0.1, 0.1, 0.1, 0.1];
        let trace = flow(&f, &start, &FlowOptions::default()).unwrap();
        assert!(trace.converged(), "{:?}", trace.termination);
        assert!(trace.final_distance < 1e-6);
        assert_eq!(trace.monotonicity_violations, 0);
        assert!(trace.steps.windows(2).all(|s| s[1].value < s[0].value));
        let sym = [0.1, 0.2, 0.1, 0.2];
        let t = flow(&f, &sym, &FlowOptions::default()).unwrap();
        let end = &t.last().point;
        assert!((end[0] - end[2]).abs() < 1e-9 && (end[1] - end[3]).abs() < 1e-9);
        let on_n = [0.5, 0.3, 0.0, 0.0];
        let t = flow(&f, &on_n, &FlowOptions::default()).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert!(t.converged());
        assert!(flow(&f, &[1.0, 1.0, 1.0, 1.0], &FlowOptions::default()).is_err());
        assert!(t.to_csv().starts_with("step,x1,x2,y1,y2,value,gradnorm\n"));
    }

    #[test]
    fn retraction_and_nesting() {
        let (_, f) = field(&JordanSpec::uniform(2, &q(1, 4)));
        let rep = retraction_check(&f, 20, 9, DEFAULT_TOL).unwrap();
        assert!(rep.pass, "{rep:?}");
        let mut starts = sample_omega(&f, 3, 2).unwrap();
        starts.push(vec![1.0, 1.0, 1.0, 1.0]);
        let rep = retraction_check_from(&f, &starts, 2, DEFAULT_TOL).unwrap();
        assert_eq!((rep.accepted, rep.rejected, rep.converged), (3, 1, 3));
        let nest = nesting_check(&f, &[1e-3, 1e-2], 9).unwrap();
        assert!(nest.pass && nest.in_domain > 0);
        assert!(nesting_check(&f, &[0.05], 5).unwrap().pass);
        assert!(nesting_check(&f, &[0.1, 0.01], 5).is_err());
    }
}
