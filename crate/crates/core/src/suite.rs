//! The aggregated exact-identity suite behind `verify`.

use std::time::Instant;

use malachite_base::num::basic::traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certify::{verify_case1_identities, verify_case2_identities, verify_case3_identities, CaseReport};
use crate::error::{Error, Result};
use crate::levi::{
    build_candidate, lemma3_diag_report, lemma3_diag_sides, verify_charpoly_identity, verify_lemma2,
    verify_lemma3_complex, verify_lemma3_diag, C2,
};
use crate::linalg::Matrix;
use crate::polyalg::{BivariatePoly, GaussianRational, RationalPoly};
use crate::rational::{q, to_f64, Q};
use crate::report::VerificationReport;
use crate::subspace::{closed_form_distance, distance_form_for, perturbation_residual, BlockSpec, JordanSpec};

pub const GROUPS: [&str; 10] =
    ["lemma1", "lemma2", "char", "lemma3", "lemma3-complex", "chain-rule", "distance", "case1", "case2", "case3"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteSizes {
    pub lemma2: usize,
    pub charpoly: usize,
    pub lemma3: usize,
    pub lemma3_max_n: usize,
    pub lemma3_complex: usize,
    pub distance: usize,
    pub sampled: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        SuiteSizes { lemma2: 100, charpoly: 50, lemma3: 50, lemma3_max_n: 4, lemma3_complex: 20, distance: 40, sampled: 100_000 }
    }
}

impl SuiteSizes {
    pub fn quick() -> Self {
        SuiteSizes { lemma2: 10, charpoly: 6, lemma3: 6, lemma3_max_n: 3, lemma3_complex: 3, distance: 6, sampled: 2_000 }
    }
}

/// Deliberate corruption for negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Adds `x₁²` to the right side of the first `lemma3` group case.
    Lemma3Rhs,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    pub seed: u64,
    pub only: Option<String>,
    pub sizes: SuiteSizes,
    pub fault: Option<Fault>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub name: String,
    pub checks: Vec<VerificationReport>,
    pub pass: bool,
    #[serde(skip)]
    pub elapsed_secs: f64,
}

impl GroupReport {
    pub fn failures(&self) -> impl Iterator<Item = &VerificationReport> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub groups: Vec<GroupReport>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn group(&self, name: &str) -> Option<&GroupReport> {
        self.groups.iter().find(|g| g.name == name)
    }

    pub fn first_failure(&self) -> Option<&VerificationReport> {
        self.groups.iter().flat_map(|g| g.failures()).next()
    }
}

fn small_q(rng: &mut ChaCha8Rng) -> Q {
    q(rng.random_range(-5i64..=5), rng.random_range(1i64..=4))
}

fn small_g(rng: &mut ChaCha8Rng) -> GaussianRational {
    GaussianRational::new(small_q(rng), small_q(rng))
}

fn small_c2(rng: &mut ChaCha8Rng) -> C2 {
    [small_g(rng), small_g(rng)]
}

/// Per-group seed so that `--only` reproduces the same cases as a full run.
fn group_rng(seed: u64, group: &str) -> ChaCha8Rng {
    let salt = group.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x1000_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed ^ salt)
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    if let Some(only) = &cfg.only {
        if !GROUPS.contains(&only.as_str()) {
            return Err(Error::Spec(format!("unknown group {only}; expected one of {}", GROUPS.join(", "))));
        }
    }
    let mut groups = Vec::new();
    for name in GROUPS {
        if cfg.only.as_deref().is_some_and(|o| o != name) {
            continue;
        }
        let start = Instant::now();
        let checks = run_group(name, cfg)?;
        let pass = checks.iter().all(|c| c.pass);
        groups.push(GroupReport { name: name.into(), checks, pass, elapsed_secs: start.elapsed().as_secs_f64() });
    }
    let pass = groups.iter().all(|g| g.pass);
    Ok(SuiteReport { seed: cfg.seed, groups, pass })
}

fn run_group(name: &str, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut rng = group_rng(cfg.seed, name);
    let sizes = &cfg.sizes;
    match name {
        "lemma1" => lemma1_checks(),
        "lemma2" => Ok((0..sizes.lemma2)
            .map(|_| {
                let b = [[small_g(&mut rng), small_g(&mut rng)], [small_g(&mut rng), small_g(&mut rng)]];
                let s = rng.random_range(1..=4);
                let pairs: Vec<(C2, C2)> = (0..s).map(|_| (small_c2(&mut rng), small_c2(&mut rng))).collect();
                verify_lemma2(&b, &pairs)
            })
            .collect()),
        "char" => (0..sizes.charpoly)
            .map(|i| {
                let r = 3 + i % 2;
                let m = Matrix::from_rows((0..r).map(|_| (0..r).map(|_| small_q(&mut rng)).collect()).collect())?;
                Ok(verify_charpoly_identity(&m))
            })
            .collect(),
        "lemma3" => lemma3_checks(sizes.lemma3, sizes.lemma3_max_n, &mut rng, cfg.fault),
        "lemma3-complex" => {
            let mut out = Vec::new();
            for i in 0..sizes.lemma3_complex {
                let (b, c) = (small_q(&mut rng), small_q(&mut rng));
                let p = if i % 2 == 0 { BivariatePoly::p21() } else { BivariatePoly::p315() };
                out.push(verify_lemma3_complex(&b, &c, &p)?);
            }
            Ok(out)
        }
        "chain-rule" => {
            let specs = [
                JordanSpec::uniform(2, &q(1, 4)),
                JordanSpec::diagonal(&[q(1, 3), q(-2, 5), q(1, 1)]),
                JordanSpec::complex_pair(q(1, 16), q(1, 16)),
                JordanSpec::new(2, vec![BlockSpec::Real { a: q(1, 2), size: 2, delta: Q::ONE }])?,
            ];
            let mut out = Vec::new();
            for spec in &specs {
                for p in [BivariatePoly::p21(), BivariatePoly::p315()] {
                    out.push(build_candidate(spec, &p)?.verify_chain_rule());
                }
            }
            Ok(out)
        }
        "distance" => (0..sizes.distance)
            .map(|i| {
                let spec = random_semisimple(1 + i % 4, &mut rng);
                let closed = closed_form_distance(&spec)?;
                let general = distance_form_for(&spec)?;
                let names = crate::polyalg::xy_names(spec.n);
                let names: Vec<&str> = names.iter().map(String::as_str).collect();
                Ok(VerificationReport::new("distance closed form", json!({"spec": spec}))
                    .expect_equal("d_M", &closed.to_poly(), &general.to_poly(), &names))
            })
            .collect(),
        "case1" => {
            let mut out = Vec::new();
            for r in 1..=3 {
                out.extend(flatten(verify_case1_identities(r, sizes.sampled / 10, cfg.seed)?));
            }
            Ok(out)
        }
        "case2" => Ok(flatten(verify_case2_identities(cfg.seed)?)),
        "case3" => {
            let b = q(1, 16);
            Ok(flatten(verify_case3_identities(&b, &b, sizes.sampled, cfg.seed)?))
        }
        _ => unreachable!("group names are checked"),
    }
}

fn flatten(rep: CaseReport) -> Vec<VerificationReport> {
    let mut out = rep.checks;
    for m in rep.quadratics {
        out.push(
            VerificationReport::new(&format!("quadratic {}", m.name), json!({"argmin": m.argmin.to_string()}))
                .expect(m.min > 0, || format!("minimum {} is not positive", m.min)),
        );
    }
    out
}

fn random_semisimple(n: usize, rng: &mut ChaCha8Rng) -> JordanSpec {
    let mut blocks = Vec::new();
    let mut left = n;
    while left > 0 {
        if left >= 2 && rng.random_bool(0.4) {
            blocks.push(BlockSpec::complex(small_q(rng), small_q(rng)));
            left -= 2;
        } else {
            blocks.push(BlockSpec::real(small_q(rng)));
            left -= 1;
        }
    }
    JordanSpec::new(n, blocks).expect("sizes add up")
}

/// Diagonal specs with `n ∈ 1..=max_n`, `r ∈ 1..=n`, alternating `P₂₁` and `P₃₁₅` by case.
pub fn lemma3_cases(count: usize, max_n: usize, rng: &mut ChaCha8Rng) -> Vec<(JordanSpec, BivariatePoly, usize)> {
    (0..count)
        .map(|i| {
            let n = rng.random_range(1..=max_n.max(1));
            let r = rng.random_range(1..=n);
            let diag: Vec<Q> = (0..n).map(|_| small_q(rng)).collect();
            let p = if i % 2 == 0 { BivariatePoly::p21() } else { BivariatePoly::p315() };
            (JordanSpec::diagonal(&diag), p, r)
        })
        .collect()
}

fn lemma3_checks(count: usize, max_n: usize, rng: &mut ChaCha8Rng, fault: Option<Fault>) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for (i, (spec, p, r)) in lemma3_cases(count, max_n, rng).into_iter().enumerate() {
        if i == 0 && fault == Some(Fault::Lemma3Rhs) {
            let c = build_candidate(&spec, &p)?;
            let (lhs, rhs) = lemma3_diag_sides(&c, r)?;
            let x1 = RationalPoly::var(2 * c.n(), 0);
            out.push(lemma3_diag_report(&c, r, &lhs, &(&rhs + &(&x1 * &x1))));
        } else {
            out.push(verify_lemma3_diag(&spec, &p, r)?);
        }
    }
    Ok(out)
}

/// Couplings used for the decay check.
pub const LEMMA1_DELTAS: [(i64, i64); 3] = [(1, 100), (1, 1000), (1, 10000)];

/// Max entry of `q_δ` for each coupling.
pub fn perturbation_decay(spec: &JordanSpec) -> Result<Vec<f64>> {
    let deltas: Vec<Q> = LEMMA1_DELTAS.iter().map(|(a, b)| q(*a, *b)).collect();
    Ok(perturbation_residual(spec, &deltas)?.iter().map(|r| to_f64(&r.max_abs_entry())).collect())
}

pub fn lemma1_specs() -> Vec<JordanSpec> {
    vec![
        JordanSpec::new(2, vec![BlockSpec::Real { a: q(1, 3), size: 2, delta: Q::ONE }]).expect("valid"),
        JordanSpec::new(4, vec![BlockSpec::Complex { b: q(1, 2), c: q(1, 5), pairs: 2, delta: Q::ONE }])
            .expect("valid"),
    ]
}

fn lemma1_checks() -> Result<Vec<VerificationReport>> {
    lemma1_specs()
        .iter()
        .map(|spec| {
            let decay = perturbation_decay(spec)?;
            let zero = perturbation_residual(spec, &[Q::ZERO])?;
            let rep = VerificationReport::new("lemma1", json!({"spec": spec, "max_entries": decay}))
                .expect(zero[0].max_abs_entry() == 0, || "q_0 is not zero".into())
                .expect(decay.windows(2).all(|w| w[0] >= 5.0 * w[1]), || format!("decay ratios too small: {decay:?}"));
            Ok(rep)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(seed: u64) -> SuiteConfig {
        SuiteConfig { seed, sizes: SuiteSizes::quick(), ..Default::default() }
    }

    #[test]
    fn quick_suite_passes() {
        let rep = run_suite(&quick(1)).unwrap();
        assert!(rep.pass, "{:?}", rep.first_failure());
        assert_eq!(rep.groups.len(), GROUPS.len());
    }

    #[test]
    fn only_filter_and_fault() {
        let mut cfg = quick(2);
        cfg.only = Some("lemma2".into());
        let rep = run_suite(&cfg).unwrap();
        assert_eq!(rep.groups.len(), 1);
        assert_eq!(rep.groups[0].checks.len(), 10);
        cfg.only = Some("lemma3".into());
        cfg.fault = Some(Fault::Lemma3Rhs);
        let rep = run_suite(&cfg).unwrap();
        assert!(!rep.pass);
        assert!(rep.first_failure().unwrap().witness.as_ref().unwrap().contains("x1^2"));
        cfg.only = Some("nope".into());
        assert!(run_suite(&cfg).is_err());
    }

    #[test]
    fn decay_ratios() {
        for spec in lemma1_specs() {
            let d = perturbation_decay(&spec).unwrap();
            assert!(d[0] > 0.0 && d[0] / d[1] >= 5.0 && d[1] / d[2] >= 5.0, "{d:?}");
        }
    }
}
