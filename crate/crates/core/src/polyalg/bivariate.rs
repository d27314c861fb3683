use super::poly::RationalPoly;
use crate::error::{Error, Result};
use crate::rational::{qi, Q};

/// Polynomial `P(u, v)` in two abstract variables, later composed with `(d_M, d_N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BivariatePoly(RationalPoly);

impl BivariatePoly {
    pub fn new(p: RationalPoly) -> Result<Self> {
        if p.nvars() != 2 {
            return Err(Error::VarMismatch { expected: 2, got: p.nvars() });
        }
        Ok(BivariatePoly(p))
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, u32, Q)>>(terms: I) -> Self {
        BivariatePoly(RationalPoly::from_exps_terms(2, terms.into_iter().map(|(a, b, c)| (vec![a, b], c))))
    }

    pub fn u() -> Self {
        BivariatePoly(RationalPoly::var(2, 0))
    }

    pub fn v() -> Self {
        BivariatePoly(RationalPoly::var(2, 1))
    }

    /// `u²v + uv²`.
    pub fn p21() -> Self {
        Self::from_terms([(2, 1, qi(1)), (1, 2, qi(1))])
    }

    /// `u³v + 5u²v² + uv³`.
    pub fn p315() -> Self {
        Self::from_terms([(3, 1, qi(1)), (2, 2, qi(5)), (1, 3, qi(1))])
    }

    pub fn poly(&self) -> &RationalPoly {
        &self.0
    }

    pub fn du(&self) -> Self {
        BivariatePoly(self.0.derivative(0))
    }

    pub fn dv(&self) -> Self {
        BivariatePoly(self.0.derivative(1))
    }

    /// `det H^ℝ(P) = P_uu P_vv − P_uv²`.
    pub fn real_hessian_det(&self) -> Self {
        let uu = self.du().du();
        let vv = self.dv().dv();
        let uv = self.du().dv();
        BivariatePoly(&(&uu.0 * &vv.0) - &(&uv.0 * &uv.0))
    }

    /// Degree when homogeneous, `None` otherwise (or for the zero polynomial).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        if self.0.is_zero() || !self.0.is_homogeneous() {
            None
        } else {
            Some(self.0.degree())
        }
    }

    /// `P(u_img, v_img)`.
    pub fn at(&self, u_img: &RationalPoly, v_img: &RationalPoly) -> Result<RationalPoly> {
        self.0.compose(&[u_img.clone(), v_img.clone()])
    }

    pub fn coeff(&self, i: u32, j: u32) -> Q {
        self.0.coeff_of(&[i, j])
    }

    pub fn eval_f64(&self, u: f64, v: f64) -> f64 {
        self.0.eval_f64(&[u, v]).expect("bivariate evaluation")
    }
}

impl std::fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0.display_with(&["u", "v"]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hessian_determinants_of_builtins() {
        // −4(u² + uv + v²)
        let h21 = BivariatePoly::p21().real_hessian_det();
        assert_eq!(h21, BivariatePoly::from_terms([(2, 0, qi(-4)), (1, 1, qi(-4)), (0, 2, qi(-4))]));
        // −3(3u⁴ + 20u³v + 94u²v² + 20uv³ + 3v⁴)
        let h315 = BivariatePoly::p315().real_hessian_det();
        let expected = BivariatePoly::from_terms([
            (4, 0, qi(-9)),
            (3, 1, qi(-60)),
            (2, 2, qi(-282)),
            (1, 3, qi(-60)),
            (0, 4, qi(-9)),
        ]);
        assert_eq!(h315, expected);
        assert_eq!(BivariatePoly::p315().homogeneous_degree(), Some(4));
        assert_eq!(BivariatePoly::from_terms([(1, 0, qi(1)), (0, 0, qi(1))]).homogeneous_degree(), None);
    }
}
