//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use malachite_base::num::basic::traits::Zero;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use psh_forge::certify::{
    case1_lower_bound, certify_psh, empirical_threshold, verify_case1_identities, verify_case2_identities,
    verify_case3_identities, Family,
};
use psh_forge::levi::build_candidate;
use psh_forge::linalg::Matrix;
use psh_forge::polyalg::BivariatePoly;
use psh_forge::rational::{q, qi, Q};
use psh_forge::retract::{glue, retraction_check, DEFAULT_RADIUS};
use psh_forge::subspace::{closed_form_distance, distance_form_for, jordan_matrix, BlockSpec, JordanSpec};
use psh_forge::suite::{perturbation_decay, run_suite, SuiteConfig, SuiteSizes};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_identity_suite() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for group in ["lemma2", "char", "lemma3", "lemma3-complex"] {
        let cfg = SuiteConfig { seed: 2024, only: Some(group.into()), sizes: SuiteSizes::default(), fault: None };
        let rep = run_suite(&cfg).map_err(|e| e.to_string())?;
        let g = &rep.groups[0];
        ok &= g.pass;
        lines.push(format!("{group} {}/{}", g.checks.iter().filter(|c| c.pass).count(), g.checks.len()));
        let first = g.checks.iter().find(|c| !c.pass).map(|f| format!("first failure {}: {:?}", f.lemma, f.witness));
        lines.extend(first);
    }
    let secs = start.elapsed().as_secs_f64();
    check(ok && secs < 300.0, format!("{}; {secs:.1}s (limit 300s)", lines.join(", ")))
}

fn c2_reference_constants() -> Outcome {
    let p = BivariatePoly::p315();
    let hess = p.real_hessian_det();
    let expect = [3, 20, 94, 20, 3];
    let hess_ok = (0..5).all(|k| hess.coeff(4 - k, k) == qi(-3 * expect[k as usize])) && hess.poly().nterms() == 5;
    let rep = verify_case2_identities(11).map_err(|e| e.to_string())?;
    let named = ["Delta(P315)", "det H^R(P315)", "R", "S", "T", "discriminant at theta = 2/3"];
    let all_named = named.iter().all(|n| rep.checks.iter().any(|c| c.lemma == *n && c.pass));
    let disc = psh_forge::certify::discriminant(&p, &q(2, 3));
    let d = [45, 906, 25889, 127768, 582402, -207076, 582402, 127768, 25889, 906, 45];
    let disc_ok = (0..11).all(|k| disc.coeff(10 - k, k) * qi(-9) == qi(d[k as usize]));
    check(
        hess_ok && all_named && disc_ok && rep.pass,
        format!("det H^R coefficients {hess_ok}, R/S/T and displays {all_named}, discriminant {disc_ok}, full case report {}", rep.pass),
    )
}

fn c3_extension_identities() -> Outcome {
    let c1 = verify_case1_identities(3, 1000, 5).map_err(|e| e.to_string())?;
    let c3 = verify_case3_identities(&q(1, 16), &q(1, 16), 1000, 5).map_err(|e| e.to_string())?;
    let pol = c1.checks.iter().any(|c| c.lemma == "Psi_{r,1/4} regrouping" && c.pass);
    let fin = c3.checks.iter().any(|c| c.lemma.starts_with("det H_2 bound regrouping") && c.pass);
    let m1 = &c1.quadratics[0];
    let m2 = &c3.quadratics[0];
    let m1_ok = m1.min == q(43, 10) - q(8405, 2048) && (m1.min_f64 - 0.196).abs() < 1e-3 && m1.min > 0;
    let m2_ok = (m2.min_f64 - 2.015).abs() < 1e-3 && m2.min > 0 && (m2.argmin_f64 - 4.258).abs() < 1e-3;
    check(
        pol && fin && m1_ok && m2_ok,
        format!(
            "regrouping {pol}, complex decomposition {fin}, min1 = {} ≈ {:.6}, min2 = {} ≈ {:.6} at W = {:.4}",
            m1.min, m1.min_f64, m2.min, m2.min_f64, m2.argmin_f64
        ),
    )
}

fn random_semisimple(n: usize, rng: &mut ChaCha8Rng) -> JordanSpec {
    let mut blocks = Vec::new();
    let mut left = n;
    let small = |rng: &mut ChaCha8Rng| q(rng.random_range(-9i64..=9), rng.random_range(1i64..=7));
    while left > 0 {
        if left >= 2 && rng.random_bool(0.5) {
            let (b, c) = (small(rng), small(rng));
            blocks.push(BlockSpec::complex(b, c));
            left -= 2;
        } else {
            blocks.push(BlockSpec::real(small(rng)));
            left -= 1;
        }
    }
    JordanSpec::new(n, blocks).unwrap()
}

/// Columns `(A e_j, e_j)`.
fn m_basis(spec: &JordanSpec) -> Matrix {
    let a = jordan_matrix(spec).unwrap();
    let n = spec.n;
    let mut b = Matrix::zeros(2 * n, n);
    for i in 0..n {
        for j in 0..n {
            b[(i, j)] = a[(i, j)].clone();
        }
        b[(n + i, i)] = qi(1);
    }
    b
}

/// `|w|² − (Bᵀw)ᵀ(BᵀB)⁻¹(Bᵀw)`.
fn exact_least_squares(b: &Matrix, w: &[Q]) -> Q {
    let bt = b.transpose();
    let gram = bt.mul(b).unwrap();
    let btw = bt.mul_vec(w);
    let coef = gram.solve(&btw).unwrap();
    let norm: Q = w.iter().map(|x| x * x).sum();
    let proj: Q = btw.iter().zip(&coef).map(|(a, c)| a * c).sum();
    norm - proj
}

fn float_projection(b: &Matrix, w: &[f64]) -> f64 {
    let rows = b.to_f64_rows();
    let bm = DMatrix::from_fn(b.rows(), b.cols(), |i, j| rows[i][j]);
    let wv = DVector::from_column_slice(w);
    let coef = bm.clone().svd(true, true).solve(&wv, 1e-14).unwrap();
    (&wv - &bm * coef).norm_squared()
}

fn c4_distance_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut specs = Vec::new();
    for i in 0..40 {
        specs.push(random_semisimple(1 + i % 4, &mut rng));
    }
    let mut exact_ok = 0;
    let mut ls_ok = 0;
    let mut worst = 0.0f64;
    let mut points = 0;
    for (k, spec) in specs.iter().enumerate() {
        let closed = closed_form_distance(spec).map_err(|e| e.to_string())?;
        let general = distance_form_for(spec).map_err(|e| e.to_string())?;
        if closed.q == general.q {
            exact_ok += 1;
        }
        let b = m_basis(spec);
        let w: Vec<Q> = (0..2 * spec.n).map(|_| q(rng.random_range(-20i64..=20), rng.random_range(1i64..=5))).collect();
        if exact_least_squares(&b, &w) == closed.eval(&w) {
            ls_ok += 1;
        }
        for _ in 0..(1000 / specs.len() + usize::from(k < 1000 % specs.len())) {
            let x: Vec<f64> = (0..2 * spec.n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let oracle = float_projection(&b, &x);
            let err = (oracle - closed.eval_f64(&x)).abs() / oracle.abs().max(1.0);
            worst = worst.max(err);
            points += 1;
        }
    }
    check(
        exact_ok == specs.len() && ls_ok == specs.len() && worst <= 1e-12 && points == 1000,
        format!(
            "closed = general {exact_ok}/{}, exact least squares {ls_ok}/{}, float oracle max error {worst:.2e} on {points} points (tol 1e-12)",
            specs.len(),
            specs.len()
        ),
    )
}

fn known_bound_cases() -> Vec<(&'static str, JordanSpec, BivariatePoly, usize)> {
    vec![
        ("diag(1/4,1/4) P21", JordanSpec::uniform(2, &q(1, 4)), BivariatePoly::p21(), 100_000),
        ("diag(1/4,1/4,1/4) P21", JordanSpec::uniform(3, &q(1, 4)), BivariatePoly::p21(), 10_000),
        ("diag(4/5,4/5) P315", JordanSpec::uniform(2, &q(4, 5)), BivariatePoly::p315(), 100_000),
        ("complex(1/16,1/16) P21", JordanSpec::complex_pair(q(1, 16), q(1, 16)), BivariatePoly::p21(), 100_000),
    ]
}

fn c5_certification() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, spec, p, samples) in known_bound_cases() {
        let start = Instant::now();
        let cert = certify_psh(&spec, &p, samples, 5).map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        let all_positive = cert.reports.iter().all(|r| r.min > 0.0);
        ok &= cert.pass() && all_positive && secs < 600.0;
        let mins: Vec<String> = cert.reports.iter().map(|r| format!("{:.3e}", r.min)).collect();
        parts.push(format!("{name}: minima [{}] {secs:.1}s", mins.join(", ")));
    }
    check(ok, parts.join("; "))
}

fn c6_lower_bound() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (n, samples) in [(2, 100_000), (3, 10_000)] {
        let c = build_candidate(&JordanSpec::uniform(n, &q(1, 4)), &BivariatePoly::p21()).map_err(|e| e.to_string())?;
        let rep = case1_lower_bound(&c, samples, 6).map_err(|e| e.to_string())?;
        ok &= rep.pass;
        parts.push(format!("n = {n}: {}", if rep.pass { "holds".to_string() } else { format!("{:?}", rep.witness) }));
    }
    check(ok, format!("{} (slack 1e-12)", parts.join(", ")))
}

fn c7_thresholds() -> Outcome {
    let runs = [
        ("diag-uniform n=2 P21", Family::DiagUniform, 2, BivariatePoly::p21(), 0.258),
        ("diag-uniform n=3 P21", Family::DiagUniform, 3, BivariatePoly::p21(), 0.258),
        ("diag-uniform n=2 P315", Family::DiagUniform, 2, BivariatePoly::p315(), 0.894),
        ("complex-equal P21", Family::ComplexEqual, 2, BivariatePoly::p21(), 0.0625),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, family, n, p, bound) in runs {
        let rep = empirical_threshold(family, n, &p, 10_000, 7, 1e-3).map_err(|e| e.to_string())?;
        let t = if rep.unbounded { f64::INFINITY } else { rep.threshold.unwrap_or(0.0) };
        let width_ok = rep.unbounded || rep.bracket.is_some_and(|(lo, hi)| hi - lo <= 1e-3);
        ok &= t >= bound && width_ok;
        parts.push(format!("{name}: {t:.4} (≥ {bound}{})", if rep.monotone { "" } else { ", non-monotone" }));
    }
    check(ok, parts.join("; "))
}

fn c8_retraction() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, spec, p, _) in known_bound_cases() {
        let start = Instant::now();
        let c = build_candidate(&spec, &p).map_err(|e| e.to_string())?;
        let field = glue(&c, DEFAULT_RADIUS, 0.05, 2).map_err(|e| e.to_string())?;
        let rep = retraction_check(&field, 200, 8, 1e-6).map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        ok &= rep.pass && rep.converged == 200 && rep.monotonicity_violations == 0 && secs < 300.0;
        parts.push(format!(
            "{name}: {}/200 converged, max distance {:.1e}, {} violations, {secs:.1}s",
            rep.converged, rep.max_final_distance, rep.monotonicity_violations
        ));
    }
    check(ok, parts.join("; "))
}

fn c9_decay() -> Outcome {
    let specs = [
        ("real block size 2", JordanSpec::new(2, vec![BlockSpec::Real { a: q(1, 3), size: 2, delta: qi(1) }])),
        ("complex block pairs 2", JordanSpec::new(4, vec![BlockSpec::Complex { b: q(1, 2), c: q(1, 5), pairs: 2, delta: qi(1) }])),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, spec) in specs {
        let spec = spec.map_err(|e| e.to_string())?;
        let d = perturbation_decay(&spec).map_err(|e| e.to_string())?;
        let ratios = [d[0] / d[1], d[1] / d[2]];
        ok &= d[2] > 0.0 && ratios.iter().all(|r| *r >= 5.0);
        parts.push(format!("{name}: ratios {:.2}, {:.2}", ratios[0], ratios[1]));
    }
    let _ = Q::ZERO;
    check(ok, format!("{} (≥ 5)", parts.join("; ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("exact identity suite", c1_identity_suite),
        ("reference constants", c2_reference_constants),
        ("extension-ring identities and W-quadratic minima", c3_extension_identities),
        ("distance oracle equivalence", c4_distance_oracles),
        ("certification at known bounds", c5_certification),
        ("case 1 lower bound", c6_lower_bound),
        ("empirical thresholds", c7_thresholds),
        ("retraction experiment", c8_retraction),
        ("perturbation decay", c9_decay),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name} [{secs:.1}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name} [{secs:.1}s]: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
