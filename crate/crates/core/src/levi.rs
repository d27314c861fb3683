//! Complex Hessians of `ρ = P(d_M, d_N)`, their leading minors, and the
//! determinant identities behind them.

use malachite_base::num::basic::traits::One;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::{subsets, Matrix};
use crate::polyalg::{xy_names, BivariatePoly, ComplexPoly, GaussianRational, RationalPoly};
use crate::rational::{q, Q};
use crate::report::{poly_witness, VerificationReport};
use crate::subspace::{distance_form_for, real_distance_form, BlockSpec, JordanSpec, QuadraticForm};

/// Derivatives of `P` composed with `(d_M, d_N)`.
#[derive(Clone, Debug)]
pub struct ComposedDerivatives {
    pub pu: RationalPoly,
    pub pv: RationalPoly,
    pub puu: RationalPoly,
    pub pvv: RationalPoly,
    pub puv: RationalPoly,
    /// `det H^ℝ(P)` at `(d_M, d_N)`.
    pub hessian_det: RationalPoly,
}

#[derive(Clone, Debug)]
pub struct PshCandidate {
    pub spec: JordanSpec,
    pub p: BivariatePoly,
    pub q_m: QuadraticForm,
    pub q_n: QuadraticForm,
    pub d_m: RationalPoly,
    pub d_n: RationalPoly,
    pub rho: RationalPoly,
    /// `½(P_u + P_v)(d_M, d_N)`.
    pub delta: RationalPoly,
    pub derivs: ComposedDerivatives,
}

pub fn build_candidate(spec: &JordanSpec, p: &BivariatePoly) -> Result<PshCandidate> {
    spec.validate()?;
    let q_m = distance_form_for(spec)?;
    let q_n = real_distance_form(spec.n);
    let d_m = q_m.to_poly();
    let d_n = q_n.to_poly();
    let at = |f: &BivariatePoly| f.at(&d_m, &d_n);
    let (pu_b, pv_b) = (p.du(), p.dv());
    let derivs = ComposedDerivatives {
        pu: at(&pu_b)?,
        pv: at(&pv_b)?,
        puu: at(&pu_b.du())?,
        pvv: at(&pv_b.dv())?,
        puv: at(&pu_b.dv())?,
        hessian_det: at(&p.real_hessian_det())?,
    };
    let rho = at(p)?;
    let delta = (&derivs.pu + &derivs.pv).scale(&q(1, 2));
    Ok(PshCandidate { spec: spec.clone(), p: p.clone(), q_m, q_n, d_m, d_n, rho, delta, derivs })
}

impl PshCandidate {
    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn names(&self) -> Vec<String> {
        xy_names(self.spec.n)
    }

    /// `∂d_M/∂z_j` for `j = 1..=r`.
    pub fn dm_dz(&self, r: usize) -> Result<Vec<ComplexPoly>> {
        let c = ComplexPoly::from_real(self.d_m.clone());
        (1..=r).map(|j| c.dz(j)).collect()
    }

    /// `∂d_N/∂z_j = −i y_j` for `j = 1..=r`.
    pub fn dn_dz(&self, r: usize) -> Result<Vec<ComplexPoly>> {
        let c = ComplexPoly::from_real(self.d_n.clone());
        (1..=r).map(|j| c.dz(j)).collect()
    }

    /// `∇ρ = P_u ∇d_M + P_v ∇d_N`, both sides computed exactly.
    pub fn verify_chain_rule(&self) -> VerificationReport {
        let names = self.names();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let gm = self.d_m.gradient();
        let gn = self.d_n.gradient();
        let mut report = VerificationReport::new("chain_rule", json!({"spec": self.spec, "P": self.p.to_string()}));
        for (k, g) in self.rho.gradient().iter().enumerate() {
            let rhs = &(&self.derivs.pu * &gm[k]) + &(&self.derivs.pv * &gn[k]);
            report = report.expect_equal(&format!("component {}", names[k]), g, &rhs, &names);
        }
        report
    }
}

/// `r × r` matrix of complex polynomials, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianPolyMatrix {
    pub r: usize,
    pub entries: Vec<ComplexPoly>,
}

impl HermitianPolyMatrix {
    pub fn get(&self, j: usize, k: usize) -> &ComplexPoly {
        &self.entries[j * self.r + k]
    }

    pub fn is_hermitian(&self) -> bool {
        (0..self.r).all(|j| (0..=j).all(|k| *self.get(j, k) == self.get(k, j).conj()))
    }

    pub fn rows(&self) -> Vec<Vec<ComplexPoly>> {
        (0..self.r).map(|j| self.entries[j * self.r..(j + 1) * self.r].to_vec()).collect()
    }

    /// Top-left `s × s` block.
    pub fn leading(&self, s: usize) -> HermitianPolyMatrix {
        let entries = (0..s).flat_map(|j| (0..s).map(move |k| (j, k))).map(|(j, k)| self.get(j, k).clone()).collect();
        HermitianPolyMatrix { r: s, entries }
    }

    /// Entrywise evaluation at a real point.
    pub fn eval_f64(&self, point: &[f64]) -> Vec<(f64, f64)> {
        self.entries
            .iter()
            .map(|e| (e.re.eval_f64(point).unwrap_or(f64::NAN), e.im.eval_f64(point).unwrap_or(f64::NAN)))
            .collect()
    }
}

fn check_r(c: &PshCandidate, r: usize) -> Result<()> {
    if r == 0 || r > c.n() {
        return Err(Error::IndexOutOfRange { index: r, max: c.n() });
    }
    Ok(())
}

/// Entry `(j, k)` is `∂z_j ∂z̄_k ρ`, composed directly on `ρ`.
pub fn direct_hessian(c: &PshCandidate, r: usize) -> Result<HermitianPolyMatrix> {
    check_r(c, r)?;
    let rho = ComplexPoly::from_real(c.rho.clone());
    let bar: Vec<ComplexPoly> = (1..=r).map(|k| rho.dzbar(k)).collect::<Result<_>>()?;
    let entries = (0..r * r)
        .into_par_iter()
        .map(|idx| bar[idx % r].dz(idx / r + 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(HermitianPolyMatrix { r, entries })
}

/// The same matrix assembled from derivatives of `P`, of `d_M` and of `d_N`:
/// `P_uu m mᴴ + P_vv n nᴴ + P_uv (m nᴴ + n mᴴ) + P_u [∂²d_M] + P_v [∂²d_N]`.
pub fn structured_hessian(c: &PshCandidate, r: usize) -> Result<HermitianPolyMatrix> {
    check_r(c, r)?;
    let m = c.dm_dz(r)?;
    let nn = c.dn_dz(r)?;
    let dm = ComplexPoly::from_real(c.d_m.clone());
    let dn = ComplexPoly::from_real(c.d_n.clone());
    let d = &c.derivs;
    let entries = (0..r * r)
        .into_par_iter()
        .map(|idx| {
            let (j, k) = (idx / r, idx % r);
            let (mk, nk) = (m[k].conj(), nn[k].conj());
            let mut e = (&m[j] * &mk).mul_real(&d.puu);
            e = &e + &(&nn[j] * &nk).mul_real(&d.pvv);
            e = &e + &(&(&m[j] * &nk) + &(&nn[j] * &mk)).mul_real(&d.puv);
            e = &e + &dm.dzbar(k + 1)?.dz(j + 1)?.mul_real(&d.pu);
            e = &e + &dn.dzbar(k + 1)?.dz(j + 1)?.mul_real(&d.pv);
            Ok(e)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HermitianPolyMatrix { r, entries })
}

/// Leading `r × r` complex Hessian of `ρ`; both constructions must agree exactly.
pub fn complex_hessian(c: &PshCandidate, r: usize) -> Result<HermitianPolyMatrix> {
    let (direct, structured) = rayon::join(|| direct_hessian(c, r), || structured_hessian(c, r));
    let (direct, structured) = (direct?, structured?);
    let names = c.names();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    for idx in 0..r * r {
        let (a, b) = (&direct.entries[idx], &structured.entries[idx]);
        if a != b {
            let w = poly_witness(&a.re, &b.re, &names).or_else(|| poly_witness(&a.im, &b.im, &names));
            return Err(Error::Consistency(format!(
                "Hessian entry ({}, {}) differs between the two constructions: {}",
                idx / r + 1,
                idx % r + 1,
                w.unwrap_or_default()
            )));
        }
    }
    if !direct.is_hermitian() {
        return Err(Error::Consistency("complex Hessian is not Hermitian".into()));
    }
    Ok(direct)
}

/// Division-free determinant by Laplace expansion over column subsets:
/// `D(S ∪ {c})` on rows `0..|S|` is built from the `|S|−1` row minors.
pub fn det_laplace(rows: &[Vec<ComplexPoly>]) -> ComplexPoly {
    let r = rows.len();
    assert!(rows.iter().all(|row| row.len() == r), "square matrix required");
    assert!(r <= 16, "matrix too large for subset expansion");
    if r == 0 {
        return ComplexPoly::constant(0, &GaussianRational::one());
    }
    let nvars = rows[0][0].nvars();
    let mut prev: Vec<(u32, ComplexPoly)> = vec![(0, ComplexPoly::constant(nvars, &GaussianRational::one()))];
    for (k, row) in rows.iter().enumerate() {
        let masks: Vec<u32> = subsets(r, k + 1)
            .into_iter()
            .map(|s| s.into_iter().fold(0u32, |m, c| m | (1 << c)))
            .collect();
        let lookup: rustc_hash::FxHashMap<u32, &ComplexPoly> = prev.iter().map(|(m, p)| (*m, p)).collect();
        let next: Vec<(u32, ComplexPoly)> = masks
            .into_par_iter()
            .map(|mask| {
                let mut acc = ComplexPoly::zero(nvars);
                for (c, entry) in row.iter().enumerate() {
                    if mask & (1 << c) == 0 || entry.is_zero() {
                        continue;
                    }
                    let rest = mask & !(1 << c);
                    let minor = lookup[&rest];
                    if minor.is_zero() {
                        continue;
                    }
                    let above = (mask >> (c + 1)).count_ones();
                    let t = entry * minor;
                    acc = if above % 2 == 0 { &acc + &t } else { &acc - &t };
                }
                (mask, acc)
            })
            .collect();
        prev = next;
    }
    prev.pop().expect("full mask").1
}

/// Determinant of the leading `r × r` block; its imaginary part must vanish.
pub fn minor_det(h: &HermitianPolyMatrix, r: usize) -> Result<RationalPoly> {
    if r == 0 || r > h.r {
        return Err(Error::IndexOutOfRange { index: r, max: h.r });
    }
    let d = det_laplace(&h.leading(r).rows());
    if !d.im.is_zero() {
        return Err(Error::Consistency(format!("determinant has nonzero imaginary part {}", d.im)));
    }
    Ok(d.re)
}

/// `det H_r^ℂ(ρ)` for every `r = 1..=n`.
pub fn leading_minors(c: &PshCandidate) -> Result<Vec<RationalPoly>> {
    let h = complex_hessian(c, c.n())?;
    (1..=c.n()).map(|r| minor_det(&h, r)).collect()
}

fn names_of(c: &PshCandidate) -> Vec<String> {
    c.names()
}

fn homogeneity_check(report: VerificationReport, c: &PshCandidate, r: usize, det: &RationalPoly) -> VerificationReport {
    match c.p.homogeneous_degree() {
        Some(k) if !det.is_zero() => {
            let expected = (2 * k - 2) * r as u32;
            let ok = det.is_homogeneous() && det.degree() == expected;
            report.expect(ok, || format!("det H_{r} is not homogeneous of degree {expected}"))
        }
        _ => report,
    }
}

fn re_sum(m: &[ComplexPoly], n: &[ComplexPoly], idx: &[usize]) -> ComplexPoly {
    let nvars = m[0].nvars();
    idx.iter().fold(ComplexPoly::zero(nvars), |acc, &j| &acc + &(&m[j] * &n[j].conj()))
}

fn norm_sum(v: &[ComplexPoly], idx: &[usize]) -> RationalPoly {
    let nvars = v[0].nvars();
    idx.iter().fold(RationalPoly::zero(nvars), |acc, &j| &acc + &v[j].norm_sqr())
}

/// `Z_jk = Σ|m|² · Σ|n|² − |Σ m n̄|²` over the index pair `{j, k}`.
pub fn z_jk(m: &[ComplexPoly], n: &[ComplexPoly], j: usize, k: usize) -> RationalPoly {
    let idx = [j, k];
    &(&norm_sum(m, &idx) * &norm_sum(n, &idx)) - &re_sum(m, n, &idx).norm_sqr()
}

/// Right side of the diagonal-case minor formula (one term for `r = 1`, the
/// rank-two expansion for `r ≥ 2`).
pub fn lemma3_diag_rhs(c: &PshCandidate, r: usize) -> Result<RationalPoly> {
    check_r(c, r)?;
    let m = c.dm_dz(r)?;
    let n = c.dn_dz(r)?;
    let d = &c.derivs;
    let idx: Vec<usize> = (0..r).collect();
    let trace = &(&(&d.puu * &norm_sum(&m, &idx)) + &(&d.pvv * &norm_sum(&n, &idx)))
        + &(&d.puv * &re_sum(&m, &n, &idx).re).scale_int(2);
    if r == 1 {
        return Ok(&c.delta + &trace);
    }
    let zsum = subsets(r, 2)
        .iter()
        .fold(RationalPoly::zero(c.rho.nvars()), |acc, jk| &acc + &z_jk(&m, &n, jk[0], jk[1]));
    // Δ^{r−2} · (Δ(Δ + Tr L) + det H^ℝ(P) Σ Z_jk)
    let inner = &(&c.delta * &(&c.delta + &trace)) + &(&d.hessian_det * &zsum);
    Ok(&c.delta.pow(r as u32 - 2) * &inner)
}

/// Both sides of the diagonal-case identity: `(det H_r^ℂ(ρ), formula)`.
pub fn lemma3_diag_sides(c: &PshCandidate, r: usize) -> Result<(RationalPoly, RationalPoly)> {
    if !c.spec.is_real_diagonal() {
        return Err(Error::Contract("the diagonal formula needs a real diagonal A".into()));
    }
    let h = complex_hessian(c, r)?;
    let (lhs, rhs) = rayon::join(|| minor_det(&h, r), || lemma3_diag_rhs(c, r));
    Ok((lhs?, rhs?))
}

pub fn verify_lemma3_diag(spec: &JordanSpec, p: &BivariatePoly, r: usize) -> Result<VerificationReport> {
    let c = build_candidate(spec, p)?;
    let (lhs, rhs) = lemma3_diag_sides(&c, r)?;
    Ok(lemma3_diag_report(&c, r, &lhs, &rhs))
}

pub fn lemma3_diag_report(c: &PshCandidate, r: usize, lhs: &RationalPoly, rhs: &RationalPoly) -> VerificationReport {
    let names = names_of(c);
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let label = if r == 1 { "lemma3_r1" } else { "lemma3_diag" };
    let mut report = VerificationReport::new(label, json!({"spec": c.spec, "P": c.p.to_string(), "r": r}));
    report = report.expect_equal(&format!("det H_{r}"), lhs, rhs, &names);
    report = homogeneity_check(report, c, r, lhs);
    if c.n() == 2 && r == 2 {
        if let (Ok(m), Ok(n)) = (c.dm_dz(2), c.dn_dz(2)) {
            report = report.expect_equal("|(dd_M/dz)_2|^2 = d_M", &norm_sum(&m, &[0, 1]), &c.d_m, &names);
            report = report.expect_equal("|(dd_N/dz)_2|^2 = d_N", &norm_sum(&n, &[0, 1]), &c.d_n, &names);
        }
    }
    report
}

/// Right side for one rotation-scaling block, assembled as
/// `Δ² + Δ·Tr L₂ + det(B + L₂)` with `B = P_u([∂²d_M] − ½I)`. The last
/// determinant is expanded by the rank-one identity over the outer products
/// `(P_uu m, m̄), (P_vv n, n̄), (P_uv m, n̄), (P_uv n, m̄)` that make up `L₂`,
/// with `det L₂ = det H^ℝ(P)·(d_M d_N − |Σ m n̄|²)`.
pub fn lemma3_complex_rhs(c: &PshCandidate) -> Result<RationalPoly> {
    let m = c.dm_dz(2)?;
    let n = c.dn_dz(2)?;
    let d = &c.derivs;
    let nv = c.rho.nvars();
    let dm = ComplexPoly::from_real(c.d_m.clone());
    let half = ComplexPoly::constant(nv, &GaussianRational::real(q(1, 2)));
    let mut b = Vec::with_capacity(4);
    for j in 0..2 {
        for k in 0..2 {
            let mut e = dm.dzbar(k + 1)?.dz(j + 1)?;
            if j == k {
                e = &e - &half;
            }
            b.push(e.mul_real(&d.pu));
        }
    }
    let bu = |u: &[ComplexPoly; 2]| [&(&b[0] * &u[0]) + &(&b[1] * &u[1]), &(&b[2] * &u[0]) + &(&b[3] * &u[1])];
    let dot = |v: &[ComplexPoly; 2], u: &[ComplexPoly; 2]| &(&v[0] * &u[0]) + &(&v[1] * &u[1]);
    let real = |p: &RationalPoly| ComplexPoly::from_real(p.clone());
    let scaled = |v: &[ComplexPoly], f: &RationalPoly| [v[0].mul_real(f), v[1].mul_real(f)];
    let conj = |v: &[ComplexPoly]| [v[0].conj(), v[1].conj()];
    let pairs = [
        (scaled(&m, &d.puu), conj(&m)),
        (scaled(&n, &d.pvv), conj(&n)),
        (scaled(&m, &d.puv), conj(&n)),
        (scaled(&n, &d.puv), conj(&m)),
    ];
    let mut trace_l = ComplexPoly::zero(nv);
    let mut vbu = ComplexPoly::zero(nv);
    for (u, v) in &pairs {
        trace_l = &trace_l + &dot(v, u);
        vbu = &vbu + &dot(v, &bu(u));
    }
    let det_b = &(&b[0] * &b[3]) - &(&b[1] * &b[2]);
    let trace_b = &b[0] + &b[3];
    let cross = re_sum(&m, &n, &[0, 1]);
    let det_l = real(&(&d.hessian_det * &(&(&c.d_m * &c.d_n) - &cross.norm_sqr())));
    let det_bl = &(&(&det_b + &(&trace_b * &trace_l)) - &vbu) + &det_l;
    let delta = real(&c.delta);
    let total = &(&(&delta * &delta) + &(&delta * &trace_l)) + &det_bl;
    if !total.im.is_zero() {
        return Err(Error::Consistency("assembled determinant has a nonzero imaginary part".into()));
    }
    Ok(total.re)
}

/// Closed form `Δ(P_uu d_M + P_vv d_N + 2P_uv Re Σ m n̄) + Δ² + det H^ℝ(P)(d_M d_N − |Σ m n̄|²)
/// − ε² − 2b²/(1+b²+c²)·d_M P_uu P_u` with `ε = b P_u/(1+b²+c²)`.
///
/// It omits the `P_uv` part of `Σ vᵀBu` and a factor `1/(1+b²+c²)` in the
/// `P_uu` part, so it agrees with the Hessian only when `b = 0`.
pub fn lemma3_complex_closed_form(c: &PshCandidate, b: &Q, cc: &Q) -> Result<RationalPoly> {
    let m = c.dm_dz(2)?;
    let n = c.dn_dz(2)?;
    let d = &c.derivs;
    let denom = Q::ONE + b * b + cc * cc;
    let cross = re_sum(&m, &n, &[0, 1]);
    let trace = &(&(&d.puu * &c.d_m) + &(&d.pvv * &c.d_n)) + &(&d.puv * &cross.re).scale_int(2);
    let gram = &(&c.d_m * &c.d_n) - &cross.norm_sqr();
    let eps = d.pu.scale(&(b / &denom));
    let mut rhs = &(&c.delta * &trace) + &c.delta.pow(2);
    rhs = &rhs + &(&d.hessian_det * &gram);
    rhs = &rhs - &eps.pow(2);
    let tail = (&(&c.d_m * &d.puu) * &d.pu).scale(&(Q::from(2) * b * b / &denom));
    Ok(&rhs - &tail)
}

pub fn lemma3_complex_sides(c: &PshCandidate) -> Result<(RationalPoly, RationalPoly)> {
    if !matches!(c.spec.blocks.as_slice(), [BlockSpec::Complex { pairs: 1, .. }]) {
        return Err(Error::Contract("expected n = 2 with one complex block".into()));
    }
    let h = complex_hessian(c, 2)?;
    let (lhs, rhs) = rayon::join(|| minor_det(&h, 2), || lemma3_complex_rhs(c));
    Ok((lhs?, rhs?))
}

pub fn verify_lemma3_complex(b: &Q, cc: &Q, p: &BivariatePoly) -> Result<VerificationReport> {
    let c = build_candidate(&JordanSpec::complex_pair(b.clone(), cc.clone()), p)?;
    let (lhs, rhs) = lemma3_complex_sides(&c)?;
    Ok(lemma3_complex_report(&c, &lhs, &rhs))
}

pub fn lemma3_complex_report(c: &PshCandidate, lhs: &RationalPoly, rhs: &RationalPoly) -> VerificationReport {
    let names = names_of(c);
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let report = VerificationReport::new("lemma3_complex", json!({"spec": c.spec, "P": c.p.to_string()}));
    let report = report.expect_equal("det H_2", lhs, rhs, &names);
    homogeneity_check(report, c, 2, lhs)
}

pub type C2 = [GaussianRational; 2];

fn c2_dot(a: &C2, b: &C2) -> GaussianRational {
    &(&a[0] * &b[0]) + &(&a[1] * &b[1])
}

fn gr_str(g: &GaussianRational) -> String {
    format!("{}+{}i", g.re, g.im)
}

/// Both displayed rank-one determinant identities for one `2 × 2` complex `B`.
pub fn verify_lemma2(b: &[[GaussianRational; 2]; 2], pairs: &[(C2, C2)]) -> VerificationReport {
    let inputs = json!({
        "B": b.iter().map(|row| row.iter().map(gr_str).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "pairs": pairs.len(),
    });
    let report = VerificationReport::new("lemma2", inputs);
    if pairs.is_empty() {
        return report.fail("at least one pair is required".into());
    }
    let det2 = |m: &[[GaussianRational; 2]; 2]| &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    let mut x: [[GaussianRational; 2]; 2] = Default::default();
    for (u, v) in pairs {
        for i in 0..2 {
            for j in 0..2 {
                x[i][j] = &x[i][j] + &(&u[i] * &v[j]);
            }
        }
    }
    let mut bx = b.clone();
    for i in 0..2 {
        for j in 0..2 {
            bx[i][j] = &bx[i][j] + &x[i][j];
        }
    }
    let lhs = det2(&bx);
    let trace_b = &b[0][0] + &b[1][1];
    let mut vu = GaussianRational::zero();
    let mut vbu = GaussianRational::zero();
    for (u, v) in pairs {
        vu = &vu + &c2_dot(v, u);
        let bu = [&(&b[0][0] * &u[0]) + &(&b[0][1] * &u[1]), &(&b[1][0] * &u[0]) + &(&b[1][1] * &u[1])];
        vbu = &vbu + &c2_dot(v, &bu);
    }
    let det_x = det2(&x);
    let rhs = &(&(&det2(b) + &(&trace_b * &vu)) - &vbu) + &det_x;
    let mut half_sum = GaussianRational::zero();
    for (ul, vl) in pairs {
        for (um, vm) in pairs {
            let t = &(&c2_dot(ul, vl) * &c2_dot(um, vm)) - &(&c2_dot(ul, vm) * &c2_dot(um, vl));
            half_sum = &half_sum + &t;
        }
    }
    let half_sum = GaussianRational::new(&half_sum.re / Q::from(2), &half_sum.im / Q::from(2));
    report
        .expect(lhs == rhs, || format!("det(B + Σuvᵀ) = {} but expansion gives {}", gr_str(&lhs), gr_str(&rhs)))
        .expect(det_x == half_sum, || {
            format!("det(Σuvᵀ) = {} but pair sum gives {}", gr_str(&det_x), gr_str(&half_sum))
        })
}

/// Coefficients of `det(B + λI)` against sums of principal minors.
pub fn verify_charpoly_identity(b: &Matrix) -> VerificationReport {
    let r = b.rows();
    let inputs = json!({"B": b.to_rows().iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()});
    let report = VerificationReport::new("charpoly", inputs);
    if !b.is_square() || r > 5 {
        return report.fail(format!("expected a square matrix of order at most 5, got {}x{}", b.rows(), b.cols()));
    }
    let lambda = RationalPoly::var(1, 0);
    let rows: Vec<Vec<ComplexPoly>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let mut e = RationalPoly::constant(1, &b[(i, j)]);
                    if i == j {
                        e = &e + &lambda;
                    }
                    ComplexPoly::from_real(e)
                })
                .collect()
        })
        .collect();
    let det = det_laplace(&rows).re;
    let mut report = report;
    for k in 0..=r {
        let order = r - k;
        let minors: Q = subsets(r, order).iter().map(|s| b.select(s, s).det().expect("square")).sum();
        let coeff = det.coeff_of(&[k as u32]);
        report = report.expect(coeff == minors, || {
            format!("coefficient of λ^{k} is {coeff} but order-{order} principal minors sum to {minors}")
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn diag(vals: &[Q]) -> JordanSpec {
        JordanSpec::diagonal(vals)
    }

    #[test]
    fn candidate_examples() {
        let c = build_candidate(&diag(&[qi(0)]), &BivariatePoly::p21()).unwrap();
        let x = RationalPoly::var(2, 0);
        let y = RationalPoly::var(2, 1);
        let expected = &(&x.pow(4) * &y.pow(2)) + &(&x.pow(2) * &y.pow(4));
        assert_eq!(c.rho, expected);
        assert_eq!(c.rho.eval(&[qi(1), qi(1)]).unwrap(), qi(2));
        let (u, v) = (&c.d_m, &c.d_n);
        let delta = (&(&u.pow(2) + &(u * v).scale_int(4)) + &v.pow(2)).scale(&q(1, 2));
        assert_eq!(c.delta, delta);
        assert!(c.verify_chain_rule().pass);
    }

    #[test]
    fn hessian_examples() {
        let c = build_candidate(&JordanSpec::uniform(2, &qi(0)), &BivariatePoly::p21()).unwrap();
        let h = complex_hessian(&c, 2).unwrap();
        let pt = [qi(1), qi(0), qi(0), qi(0)];
        assert_eq!(h.get(0, 0).eval(&pt).unwrap(), GaussianRational::real(q(1, 2)));
        assert_eq!(minor_det(&h, 2).unwrap().eval(&pt).unwrap(), q(1, 4));
        assert_eq!(minor_det(&h, 1).unwrap(), h.get(0, 0).re);

        let dm = build_candidate(&diag(&[q(1, 3), q(-2, 7)]), &BivariatePoly::u()).unwrap();
        let h = complex_hessian(&dm, 2).unwrap();
        for j in 0..2 {
            for k in 0..2 {
                let e = if j == k { q(1, 2) } else { qi(0) };
                assert_eq!(*h.get(j, k), ComplexPoly::constant(4, &GaussianRational::real(e)));
            }
        }
        assert_eq!(minor_det(&h, 2).unwrap(), RationalPoly::constant(4, &q(1, 4)));
        assert!(matches!(complex_hessian(&dm, 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn complex_block_hessian_of_dm() {
        let (b, cc) = (q(1, 3), q(1, 5));
        let c = build_candidate(&JordanSpec::complex_pair(b.clone(), cc.clone()), &BivariatePoly::u()).unwrap();
        let h = complex_hessian(&c, 2).unwrap();
        let off = &b / (Q::ONE + &b * &b + &cc * &cc);
        // [[½, −ib/D], [ib/D, ½]] up to transposition: entry (j, k) is ∂z_j ∂z̄_k.
        assert_eq!(*h.get(0, 1), ComplexPoly::constant(4, &GaussianRational::new(qi(0), off.clone())));
        assert_eq!(*h.get(1, 0), ComplexPoly::constant(4, &GaussianRational::new(qi(0), -off)));
        assert_eq!(*h.get(0, 0), ComplexPoly::constant(4, &GaussianRational::real(q(1, 2))));
    }

    #[test]
    fn lemma3_small_cases() {
        let rep = verify_lemma3_diag(&diag(&[q(1, 3), q(-1, 2)]), &BivariatePoly::p21(), 2).unwrap();
        assert!(rep.pass, "{:?}", rep.witness);
        let rep = verify_lemma3_diag(&diag(&[q(2, 5)]), &BivariatePoly::p315(), 1).unwrap();
        assert!(rep.pass, "{:?}", rep.witness);
        for (b, cc) in [(q(1, 16), q(1, 16)), (q(1, 3), q(1, 5)), (qi(0), q(3, 2))] {
            let rep = verify_lemma3_complex(&b, &cc, &BivariatePoly::p21()).unwrap();
            assert!(rep.pass, "{:?}", rep.witness);
        }
    }

    #[test]
    fn closed_form_needs_b_zero() {
        for (b, agrees) in [(qi(0), true), (q(1, 3), false)] {
            let c = build_candidate(&JordanSpec::complex_pair(b.clone(), q(1, 5)), &BivariatePoly::p21()).unwrap();
            let (lhs, _) = lemma3_complex_sides(&c).unwrap();
            assert_eq!(lhs == lemma3_complex_closed_form(&c, &b, &q(1, 5)).unwrap(), agrees);
        }
    }

    #[test]
    fn lemma3_detects_corruption() {
        let c = build_candidate(&diag(&[q(1, 3), q(-1, 2)]), &BivariatePoly::p21()).unwrap();
        let (lhs, rhs) = lemma3_diag_sides(&c, 2).unwrap();
        let bad = &rhs + &RationalPoly::monomial(4, crate::polyalg::Monomial::from_exps(&[2, 0, 0, 0]), &q(1, 1000));
        let rep = lemma3_diag_report(&c, 2, &lhs, &bad);
        assert!(!rep.pass);
        assert!(rep.witness.unwrap().contains("x1^2"));
    }

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(qi(re), qi(im))
    }

    #[test]
    fn lemma2_examples() {
        let id = [[g(1, 0), g(0, 0)], [g(0, 0), g(1, 0)]];
        let e1 = [g(1, 0), g(0, 0)];
        assert!(verify_lemma2(&id, &[(e1.clone(), e1.clone())]).pass);
        let zero: [[GaussianRational; 2]; 2] = Default::default();
        let e2 = [g(0, 0), g(1, 0)];
        assert!(verify_lemma2(&zero, &[(e1.clone(), e1), (e2.clone(), e2)]).pass);
        let b = [[g(2, 1), g(-1, 3)], [g(0, -2), g(5, 0)]];
        let pairs = [([g(1, 1), g(2, 0)], [g(0, 1), g(-3, 2)]), ([g(4, 0), g(1, -1)], [g(2, 2), g(0, 5)])];
        assert!(verify_lemma2(&b, &pairs).pass);
    }

    #[test]
    fn charpoly_examples() {
        assert!(verify_charpoly_identity(&Matrix::identity(2)).pass);
        assert!(verify_charpoly_identity(&Matrix::zeros(3, 3)).pass);
        let m = Matrix::from_rows(vec![vec![q(1, 2), qi(3), qi(-1)], vec![qi(0), q(2, 3), qi(4)], vec![qi(7), qi(1), qi(-2)]]).unwrap();
        assert!(verify_charpoly_identity(&m).pass);
    }

    #[test]
    fn laplace_matches_elimination() {
        let m = Matrix::from_rows(vec![
            vec![qi(2), qi(-1), qi(0), qi(3)],
            vec![q(1, 2), qi(4), qi(1), qi(0)],
            vec![qi(0), qi(2), qi(-3), qi(1)],
            vec![qi(1), qi(0), qi(5), q(-2, 3)],
        ])
        .unwrap();
        let rows: Vec<Vec<ComplexPoly>> = m
            .to_rows()
            .into_iter()
            .map(|row| row.into_iter().map(|x| ComplexPoly::from_real(RationalPoly::constant(1, &x))).collect())
            .collect();
        let d = det_laplace(&rows);
        assert_eq!(d.re, RationalPoly::constant(1, &m.det().unwrap()));
        assert!(d.im.is_zero());
    }
}
