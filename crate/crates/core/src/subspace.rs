//! Jordan specifications, the subspaces `M(A) = (A+iI)ℝⁿ` and `ℝⁿ`, and the
//! exact quadratic forms of squared distance to them.

use malachite_base::num::basic::traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::polyalg::RationalPoly;
use crate::rational::{qstr, Q};

fn default_delta() -> Q {
    Q::ONE
}

fn default_one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BlockSpec {
    Real {
        #[serde(with = "qstr")]
        a: Q,
        #[serde(default = "default_one")]
        size: usize,
        #[serde(with = "qstr", default = "default_delta")]
        delta: Q,
    },
    Complex {
        #[serde(with = "qstr")]
        b: Q,
        #[serde(with = "qstr")]
        c: Q,
        #[serde(default = "default_one")]
        pairs: usize,
        #[serde(with = "qstr", default = "default_delta")]
        delta: Q,
    },
}

impl BlockSpec {
    pub fn real(a: Q) -> Self {
        BlockSpec::Real { a, size: 1, delta: Q::ONE }
    }

    pub fn complex(b: Q, c: Q) -> Self {
        BlockSpec::Complex { b, c, pairs: 1, delta: Q::ONE }
    }

    pub fn dim(&self) -> usize {
        match self {
            BlockSpec::Real { size, .. } => *size,
            BlockSpec::Complex { pairs, .. } => 2 * pairs,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, BlockSpec::Real { size: 1, .. } | BlockSpec::Complex { pairs: 1, .. })
    }

    /// Superdiagonal coupling actually used (zero for degenerate blocks).
    pub fn effective_delta(&self) -> Q {
        match self {
            _ if self.is_degenerate() => Q::ZERO,
            BlockSpec::Real { delta, .. } | BlockSpec::Complex { delta, .. } => delta.clone(),
        }
    }

    fn with_delta(&self, d: &Q) -> Self {
        let mut out = self.clone();
        match &mut out {
            BlockSpec::Real { delta, .. } | BlockSpec::Complex { delta, .. } => *delta = d.clone(),
        }
        out
    }
}

/// Block-diagonal real Jordan form of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JordanSpec {
    pub n: usize,
    pub blocks: Vec<BlockSpec>,
}

impl JordanSpec {
    pub fn new(n: usize, blocks: Vec<BlockSpec>) -> Result<Self> {
        let spec = JordanSpec { n, blocks };
        spec.validate()?;
        Ok(spec)
    }

    /// `diag(a_1, …, a_n)`.
    pub fn diagonal(values: &[Q]) -> Self {
        JordanSpec { n: values.len(), blocks: values.iter().cloned().map(BlockSpec::real).collect() }
    }

    pub fn uniform(n: usize, a: &Q) -> Self {
        Self::diagonal(&vec![a.clone(); n])
    }

    /// One `2×2` block `[[c, −b], [b, c]]`.
    pub fn complex_pair(b: Q, c: Q) -> Self {
        JordanSpec { n: 2, blocks: vec![BlockSpec::complex(b, c)] }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: JordanSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Spec("n must be positive".into()));
        }
        if self.blocks.iter().any(|b| b.dim() == 0) {
            return Err(Error::Spec("blocks must have positive size".into()));
        }
        let total: usize = self.blocks.iter().map(BlockSpec::dim).sum();
        if total != self.n {
            return Err(Error::Spec(format!("block dimensions sum to {total}, expected n = {}", self.n)));
        }
        Ok(())
    }

    /// True when every coupling is zero, so `A` is diagonal or a direct sum of `2×2` blocks.
    pub fn is_semisimple(&self) -> bool {
        self.blocks.iter().all(|b| b.effective_delta() == 0)
    }

    /// True when `A` is diagonal with real entries.
    pub fn is_real_diagonal(&self) -> bool {
        self.is_semisimple() && self.blocks.iter().all(|b| matches!(b, BlockSpec::Real { .. }))
    }

    pub fn has_nondegenerate_block(&self) -> bool {
        self.blocks.iter().any(|b| !b.is_degenerate())
    }

    /// Same block structure with every coupling set to `delta`.
    pub fn with_delta(&self, delta: &Q) -> Self {
        JordanSpec { n: self.n, blocks: self.blocks.iter().map(|b| b.with_delta(delta)).collect() }
    }

    /// Diagonal entries when `A` is real diagonal.
    pub fn diagonal_entries(&self) -> Option<Vec<Q>> {
        if !self.is_real_diagonal() {
            return None;
        }
        let mut out = Vec::with_capacity(self.n);
        for b in &self.blocks {
            if let BlockSpec::Real { a, size, .. } = b {
                out.extend(std::iter::repeat_n(a.clone(), *size));
            }
        }
        Some(out)
    }
}

pub fn jordan_matrix(spec: &JordanSpec) -> Result<Matrix> {
    spec.validate()?;
    let mut a = Matrix::zeros(spec.n, spec.n);
    let mut p = 0;
    for block in &spec.blocks {
        let delta = block.effective_delta();
        match block {
            BlockSpec::Real { a: ev, size, .. } => {
                for i in 0..*size {
                    a[(p + i, p + i)] = ev.clone();
                    if i + 1 < *size {
                        a[(p + i, p + i + 1)] = delta.clone();
                    }
                }
            }
            BlockSpec::Complex { b, c, pairs, .. } => {
                for k in 0..*pairs {
                    let o = p + 2 * k;
                    a[(o, o)] = c.clone();
                    a[(o, o + 1)] = -b;
                    a[(o + 1, o)] = b.clone();
                    a[(o + 1, o + 1)] = c.clone();
                    if k + 1 < *pairs {
                        a[(o, o + 2)] = delta.clone();
                        a[(o + 1, o + 3)] = delta.clone();
                    }
                }
            }
        }
        p += block.dim();
    }
    Ok(a)
}

/// Linearly independent vectors in `ℝ²ⁿ`, coordinates `(x_1..x_n, y_1..y_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    pub dim: usize,
    pub vectors: Vec<Vec<Q>>,
}

impl SubspaceBasis {
    pub fn new(vectors: Vec<Vec<Q>>) -> Result<Self> {
        let basis = SubspaceBasis { dim: vectors.len(), vectors };
        if basis.dim > 0 {
            let len = basis.vectors[0].len();
            if len % 2 != 0 || basis.vectors.iter().any(|v| v.len() != len) {
                return Err(Error::Spec("basis vectors must share an even length 2n".into()));
            }
            let rank = Matrix::from_rows(basis.vectors.clone())?.rank();
            if rank < basis.dim {
                return Err(Error::Degenerate(format!("rank {rank} < {} vectors", basis.dim)));
            }
        }
        Ok(basis)
    }

    /// Ambient real dimension `2n`.
    pub fn ambient(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    pub fn is_pairwise_orthogonal(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| dot(&self.vectors[i], &self.vectors[j]) == 0))
    }
}

/// Columns of `[A; I]`: vector `j` is `(A e_j, e_j)`.
pub fn subspace_basis(a: &Matrix) -> Result<SubspaceBasis> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::Spec("A must be a nonempty square matrix".into()));
    }
    let n = a.rows();
    let vectors = (0..n)
        .map(|j| {
            let mut v = a.column(j);
            v.extend((0..n).map(|i| if i == j { Q::ONE } else { Q::ZERO }));
            v
        })
        .collect();
    SubspaceBasis::new(vectors)
}

/// `N = ℝⁿ`, spanned by `(e_j, 0)`.
pub fn real_subspace_basis(n: usize) -> SubspaceBasis {
    let vectors = (0..n)
        .map(|j| (0..2 * n).map(|i| if i == j { Q::ONE } else { Q::ZERO }).collect())
        .collect();
    SubspaceBasis { dim: n, vectors }
}

fn gram_schmidt_step(done: &[(Vec<Q>, Q)], v: &[Q]) -> Vec<Q> {
    let mut g = v.to_vec();
    for (u, uu) in done {
        let c = dot(&g, u) / uu;
        if c != 0 {
            for (gi, ui) in g.iter_mut().zip(u) {
                *gi -= &c * ui;
            }
        }
    }
    g
}

/// Orthogonal basis of the complement: Gram–Schmidt over the input vectors
/// followed by `e_1, …, e_{2n}`, keeping the nonzero survivors of the latter.
pub fn orthogonal_complement(basis: &SubspaceBasis) -> Result<SubspaceBasis> {
    let m = basis.ambient();
    if basis.dim == 0 {
        return Err(Error::Degenerate("empty basis".into()));
    }
    let mut done: Vec<(Vec<Q>, Q)> = Vec::with_capacity(m);
    for v in &basis.vectors {
        let g = gram_schmidt_step(&done, v);
        let gg = dot(&g, &g);
        if gg == 0 {
            return Err(Error::Degenerate("input vectors are dependent".into()));
        }
        done.push((g, gg));
    }
    let mut out = Vec::with_capacity(m - basis.dim);
    for i in 0..m {
        let e: Vec<Q> = (0..m).map(|k| if k == i { Q::ONE } else { Q::ZERO }).collect();
        let g = gram_schmidt_step(&done, &e);
        let gg = dot(&g, &g);
        if gg != 0 {
            out.push(g.clone());
            done.push((g, gg));
        }
    }
    Ok(SubspaceBasis { dim: out.len(), vectors: out })
}

/// `d(w) = wᵀ Q w` on `ℝ²ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    pub n: usize,
    pub q: Matrix,
}

impl QuadraticForm {
    /// `Σ g gᵀ / |g|²` over pairwise orthogonal `g`.
    pub fn from_orthogonal(n: usize, vectors: &[Vec<Q>]) -> Self {
        let mut q = Matrix::zeros(2 * n, 2 * n);
        for g in vectors {
            let gg = dot(g, g);
            for i in 0..2 * n {
                if g[i] == 0 {
                    continue;
                }
                let gi = &g[i] / &gg;
                for j in 0..2 * n {
                    if g[j] != 0 {
                        q[(i, j)] += &gi * &g[j];
                    }
                }
            }
        }
        QuadraticForm { n, q }
    }

    pub fn eval(&self, w: &[Q]) -> Q {
        self.q.quadratic(w)
    }

    pub fn eval_f64(&self, w: &[f64]) -> f64 {
        let m = 2 * self.n;
        let mut s = 0.0;
        for i in 0..m {
            let row = self.q.row(i);
            let mut t = 0.0;
            for j in 0..m {
                if row[j] != 0 {
                    t += crate::rational::to_f64(&row[j]) * w[j];
                }
            }
            s += w[i] * t;
        }
        s
    }

    /// Entries as doubles, for hot evaluation loops.
    pub fn to_f64_matrix(&self) -> Vec<Vec<f64>> {
        self.q.to_f64_rows()
    }

    pub fn to_poly(&self) -> RationalPoly {
        let m = 2 * self.n;
        let mut acc = RationalPoly::zero(m);
        for i in 0..m {
            for j in 0..m {
                if self.q[(i, j)] != 0 {
                    let t = &RationalPoly::var(m, i) * &RationalPoly::var(m, j);
                    acc = &acc + &t.scale(&self.q[(i, j)]);
                }
            }
        }
        acc
    }

    pub fn sub(&self, other: &Self) -> Self {
        QuadraticForm { n: self.n, q: self.q.sub(&other.q) }
    }

    pub fn max_abs_entry(&self) -> Q {
        self.q.max_abs_entry()
    }

    /// Symmetric, idempotent and of trace `n`, all exactly.
    pub fn check_projector(&self) -> Result<()> {
        if !self.q.is_symmetric() {
            return Err(Error::Consistency("Q is not symmetric".into()));
        }
        if self.q.mul(&self.q)? != self.q {
            return Err(Error::Consistency("Q² ≠ Q".into()));
        }
        if self.q.trace() != Q::from(self.n as u64) {
            return Err(Error::Consistency(format!("trace(Q) = {} ≠ n", self.q.trace())));
        }
        Ok(())
    }

    pub fn vanishes_on(&self, basis: &SubspaceBasis) -> bool {
        basis.vectors.iter().all(|v| self.q.mul_vec(v).iter().all(|x| *x == 0))
    }
}

/// Squared Euclidean distance to the span of `basis`.
pub fn distance_form(basis: &SubspaceBasis) -> Result<QuadraticForm> {
    let ambient = basis.ambient();
    if ambient == 0 || basis.dim * 2 != ambient {
        return Err(Error::Degenerate("expected an n-dimensional subspace of ℝ²ⁿ".into()));
    }
    let comp = orthogonal_complement(basis)?;
    Ok(QuadraticForm::from_orthogonal(ambient / 2, &comp.vectors))
}

/// `d_M` for `M = M(A)` with `A` built from `spec`.
pub fn distance_form_for(spec: &JordanSpec) -> Result<QuadraticForm> {
    distance_form(&subspace_basis(&jordan_matrix(spec)?)?)
}

/// `d_N = Σ y_j²`.
pub fn real_distance_form(n: usize) -> QuadraticForm {
    let mut q = Matrix::zeros(2 * n, 2 * n);
    for j in n..2 * n {
        q[(j, j)] = Q::ONE;
    }
    QuadraticForm { n, q }
}

/// Closed-form `d_M` for semisimple `A`, summed block by block from the
/// linear forms `x_j − a y_j` and the pair `x_p − c y_p + b y_{p+1}`,
/// `x_{p+1} − c y_{p+1} − b y_p`.
pub fn closed_form_distance(spec: &JordanSpec) -> Result<QuadraticForm> {
    spec.validate()?;
    if !spec.is_semisimple() {
        return Err(Error::Unsupported("closed form needs all couplings zero; use distance_form".into()));
    }
    let n = spec.n;
    let mut q = Matrix::zeros(2 * n, 2 * n);
    let mut add = |form: &[(usize, Q)], scale: &Q| {
        for (i, ci) in form {
            for (j, cj) in form {
                q[(*i, *j)] += ci * cj / scale;
            }
        }
    };
    let mut p = 0;
    for block in &spec.blocks {
        match block {
            BlockSpec::Real { a, size, .. } => {
                let denom = Q::ONE + a * a;
                for j in p..p + size {
                    add(&[(j, Q::ONE), (n + j, -a)], &denom);
                }
            }
            BlockSpec::Complex { b, c, pairs, .. } => {
                let denom = Q::ONE + b * b + c * c;
                for k in 0..*pairs {
                    let o = p + 2 * k;
                    add(&[(o, Q::ONE), (n + o, -c), (n + o + 1, b.clone())], &denom);
                    add(&[(o + 1, Q::ONE), (n + o + 1, -c), (n + o, -b)], &denom);
                }
            }
        }
        p += block.dim();
    }
    Ok(QuadraticForm { n, q })
}

/// `q_δ = Q_{A_δ} − Q_{A_0}` for each coupling value.
pub fn perturbation_residual(spec: &JordanSpec, deltas: &[Q]) -> Result<Vec<QuadraticForm>> {
    spec.validate()?;
    if !spec.has_nondegenerate_block() {
        return Err(Error::Spec("no block carries a coupling".into()));
    }
    let base = distance_form_for(&spec.with_delta(&Q::ZERO))?;
    deltas.iter().map(|d| Ok(distance_form_for(&spec.with_delta(d))?.sub(&base))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use proptest::prelude::*;

    fn mat(rows: &[&[Q]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn jordan_examples() {
        let s = JordanSpec::from_json(r#"{"n":2,"blocks":[{"type":"real","a":"0","size":2,"delta":"1"}]}"#).unwrap();
        assert_eq!(jordan_matrix(&s).unwrap(), mat(&[&[qi(0), qi(1)], &[qi(0), qi(0)]]));
        let c = JordanSpec::from_json(r#"{"n":2,"blocks":[{"type":"complex","c":"1","b":"1","pairs":1}]}"#).unwrap();
        assert_eq!(jordan_matrix(&c).unwrap(), mat(&[&[qi(1), qi(-1)], &[qi(1), qi(1)]]));
        let z = JordanSpec::diagonal(&[qi(0)]);
        assert_eq!(jordan_matrix(&z).unwrap(), mat(&[&[qi(0)]]));
        assert!(JordanSpec::from_json(r#"{"n":3,"blocks":[{"type":"real","a":"0","size":2}]}"#).is_err());
    }

    #[test]
    fn complex_block_coupling() {
        let s = JordanSpec::new(4, vec![BlockSpec::Complex { b: qi(2), c: qi(3), pairs: 2, delta: q(1, 2) }]).unwrap();
        let a = jordan_matrix(&s).unwrap();
        assert_eq!(a[(0, 2)], q(1, 2));
        assert_eq!(a[(1, 3)], q(1, 2));
        assert_eq!(a[(0, 3)], qi(0));
        assert_eq!(a[(3, 2)], qi(2));
    }

    #[test]
    fn basis_examples() {
        let b = subspace_basis(&Matrix::zeros(2, 2)).unwrap();
        assert_eq!(b.vectors, vec![vec![qi(0), qi(0), qi(1), qi(0)], vec![qi(0), qi(0), qi(0), qi(1)]]);
        let a = q(2, 3);
        let d = q(1, 5);
        let jb = subspace_basis(&mat(&[&[a.clone(), d.clone()], &[qi(0), a.clone()]])).unwrap();
        assert_eq!(jb.vectors[0], vec![a.clone(), qi(0), qi(1), qi(0)]);
        assert_eq!(jb.vectors[1], vec![d, a, qi(0), qi(1)]);
    }

    #[test]
    fn complement_examples() {
        let b = subspace_basis(&mat(&[&[qi(1)]])).unwrap();
        let c = orthogonal_complement(&b).unwrap();
        assert_eq!(c.dim, 1);
        assert_eq!(&c.vectors[0][0] + &c.vectors[0][1], qi(0));
        let a = q(-3, 7);
        let comp = orthogonal_complement(&subspace_basis(&jordan_matrix(&JordanSpec::uniform(3, &a)).unwrap()).unwrap()).unwrap();
        for (j, g) in comp.vectors.iter().enumerate() {
            // proportional to e_j − a f_j
            assert_eq!(&g[3 + j], &(-&a * &g[j]));
            assert_eq!(g.iter().filter(|x| **x != 0).count(), 2);
        }
        let dep = SubspaceBasis { dim: 2, vectors: vec![vec![qi(1), qi(0)], vec![qi(2), qi(0)]] };
        assert!(orthogonal_complement(&dep).is_err());
    }

    #[test]
    fn distance_examples() {
        let f = distance_form_for(&JordanSpec::diagonal(&[qi(1)])).unwrap();
        assert_eq!(f.q, mat(&[&[q(1, 2), q(-1, 2)], &[q(-1, 2), q(1, 2)]]));
        assert_eq!(f.eval(&[qi(3), qi(1)]), qi(2));
        let n = distance_form(&real_subspace_basis(2)).unwrap();
        assert_eq!(n, real_distance_form(2));
        let z = distance_form_for(&JordanSpec::uniform(2, &qi(0))).unwrap();
        assert_eq!(z.eval(&[qi(2), qi(3), qi(5), qi(7)]), qi(13));
    }

    #[test]
    fn closed_form_matches_complex_block() {
        let (b, c) = (q(1, 3), q(-2, 5));
        let s = JordanSpec::complex_pair(b.clone(), c.clone());
        let cf = closed_form_distance(&s).unwrap();
        assert_eq!(cf, distance_form_for(&s).unwrap());
        let zero = closed_form_distance(&JordanSpec::complex_pair(qi(0), qi(0))).unwrap();
        assert_eq!(zero.to_poly(), distance_form_for(&JordanSpec::uniform(2, &qi(0))).unwrap().to_poly());
        let jordan = JordanSpec::new(2, vec![BlockSpec::Real { a: qi(0), size: 2, delta: qi(1) }]).unwrap();
        assert!(matches!(closed_form_distance(&jordan), Err(Error::Unsupported(_))));
    }

    #[test]
    fn perturbation_vanishes_at_zero() {
        let s = JordanSpec::new(2, vec![BlockSpec::Real { a: qi(0), size: 2, delta: qi(1) }]).unwrap();
        let r = perturbation_residual(&s, &[qi(0), q(1, 1000), q(1, 10000)]).unwrap();
        assert!(r[0].q.is_zero());
        let ratio = crate::rational::to_f64(&(r[1].max_abs_entry() / r[2].max_abs_entry()));
        assert!((ratio - 10.0).abs() < 0.1, "ratio {ratio}");
        assert!(perturbation_residual(&JordanSpec::diagonal(&[qi(1)]), &[qi(1)]).is_err());
    }

    fn small_q() -> impl Strategy<Value = Q> {
        (-9i64..=9, 1i64..=6).prop_map(|(a, b)| q(a, b))
    }

    fn real_block() -> impl Strategy<Value = BlockSpec> {
        (small_q(), 1usize..=2, small_q()).prop_map(|(a, size, delta)| BlockSpec::Real { a, size, delta })
    }

    fn complex_block() -> impl Strategy<Value = BlockSpec> {
        (small_q(), small_q(), small_q()).prop_map(|(b, c, delta)| BlockSpec::Complex { b, c, pairs: 1, delta })
    }

    fn spec() -> impl Strategy<Value = JordanSpec> {
        prop::collection::vec(prop_oneof![real_block(), complex_block()], 1..=2).prop_map(|blocks| {
            let n = blocks.iter().map(BlockSpec::dim).sum();
            JordanSpec { n, blocks }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn distance_form_is_projector(s in spec()) {
            let basis = subspace_basis(&jordan_matrix(&s).unwrap()).unwrap();
            let comp = orthogonal_complement(&basis).unwrap();
            prop_assert_eq!(comp.dim, s.n);
            prop_assert!(comp.is_pairwise_orthogonal());
            for g in &comp.vectors {
                for m in &basis.vectors {
                    prop_assert_eq!(dot(g, m), qi(0));
                }
            }
            let f = distance_form(&basis).unwrap();
            prop_assert!(f.check_projector().is_ok());
            prop_assert!(f.vanishes_on(&basis));
        }

        #[test]
        fn closed_form_agrees(s in spec()) {
            let s = s.with_delta(&qi(0));
            prop_assert_eq!(closed_form_distance(&s).unwrap(), distance_form_for(&s).unwrap());
        }

        #[test]
        fn spec_json_round_trip(s in spec()) {
            prop_assert_eq!(JordanSpec::from_json(&s.to_json()).unwrap(), s);
        }
    }
}
