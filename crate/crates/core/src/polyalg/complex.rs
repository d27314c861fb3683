use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use malachite_base::num::basic::traits::Zero;

use super::poly::RationalPoly;
use crate::error::{Error, Result};
use crate::rational::{Rational, Q};

/// Exact Gaussian rational `re + i·im`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Q,
    pub im: Q,
}

impl GaussianRational {
    pub fn new(re: Q, im: Q) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Q) -> Self {
        GaussianRational { re, im: Rational::ZERO }
    }

    pub fn zero() -> Self {
        Self::real(Rational::ZERO)
    }

    pub fn one() -> Self {
        Self::real(Rational::from(1))
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -&self.im }
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, r: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &r.re, im: &self.im + &r.im }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, r: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &r.re, im: &self.im - &r.im }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, r: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &r.re - &self.im * &r.im,
            im: &self.re * &r.im + &self.im * &r.re,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}

/// Polynomial with Gaussian-rational coefficients, stored as real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ComplexPoly {
    pub re: RationalPoly,
    pub im: RationalPoly,
}

impl ComplexPoly {
    pub fn new(re: RationalPoly, im: RationalPoly) -> Self {
        assert_eq!(re.nvars(), im.nvars(), "real and imaginary parts live in different rings");
        ComplexPoly { re, im }
    }

    pub fn from_real(re: RationalPoly) -> Self {
        let im = RationalPoly::zero(re.nvars());
        ComplexPoly { re, im }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_real(RationalPoly::zero(nvars))
    }

    pub fn constant(nvars: usize, c: &GaussianRational) -> Self {
        ComplexPoly { re: RationalPoly::constant(nvars, &c.re), im: RationalPoly::constant(nvars, &c.im) }
    }

    pub fn nvars(&self) -> usize {
        self.re.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ComplexPoly { re: self.re.clone(), im: -&self.im }
    }

    /// Multiplication by `i`.
    pub fn times_i(&self) -> Self {
        ComplexPoly { re: -&self.im, im: self.re.clone() }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        ComplexPoly {
            re: &self.re.scale(&c.re) - &self.im.scale(&c.im),
            im: &self.re.scale(&c.im) + &self.im.scale(&c.re),
        }
    }

    pub fn scale_real(&self, c: &Q) -> Self {
        ComplexPoly { re: self.re.scale(c), im: self.im.scale(c) }
    }

    pub fn mul_real(&self, p: &RationalPoly) -> Self {
        ComplexPoly { re: &self.re * p, im: &self.im * p }
    }

    /// `|self|² = self · conj(self)`, which is real.
    pub fn norm_sqr(&self) -> RationalPoly {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn degree(&self) -> u32 {
        self.re.degree().max(self.im.degree())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.nvars() != other.nvars() {
            return Err(Error::VarMismatch { expected: self.nvars(), got: other.nvars() });
        }
        Ok(self * other)
    }

    fn check_index(&self, j: usize) -> Result<(usize, usize)> {
        let n = self.nvars() / 2;
        if j == 0 || j > n {
            return Err(Error::IndexOutOfRange { index: j, max: n });
        }
        Ok((j - 1, n + j - 1))
    }

    /// `∂/∂z_j = ½(∂/∂x_j − i ∂/∂y_j)` with 1-based `j`, variables ordered `x_1..x_n, y_1..y_n`.
    pub fn dz(&self, j: usize) -> Result<Self> {
        let (xj, yj) = self.check_index(j)?;
        let half = Rational::from_signeds(1, 2);
        let re = &self.re.derivative(xj) + &self.im.derivative(yj);
        let im = &self.im.derivative(xj) - &self.re.derivative(yj);
        Ok(ComplexPoly { re: re.scale(&half), im: im.scale(&half) })
    }

    /// `∂/∂z̄_j = ½(∂/∂x_j + i ∂/∂y_j)`.
    pub fn dzbar(&self, j: usize) -> Result<Self> {
        let (xj, yj) = self.check_index(j)?;
        let half = Rational::from_signeds(1, 2);
        let re = &self.re.derivative(xj) - &self.im.derivative(yj);
        let im = &self.im.derivative(xj) + &self.re.derivative(yj);
        Ok(ComplexPoly { re: re.scale(&half), im: im.scale(&half) })
    }

    pub fn eval(&self, point: &[Q]) -> Result<GaussianRational> {
        Ok(GaussianRational { re: self.re.eval(point)?, im: self.im.eval(point)? })
    }
}

impl fmt::Debug for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexPoly {{ re: {}, im: {} }}", self.re, self.im)
    }
}

impl<'a> Add<&'a ComplexPoly> for &'a ComplexPoly {
    type Output = ComplexPoly;
    fn add(self, r: &ComplexPoly) -> ComplexPoly {
        ComplexPoly { re: &self.re + &r.re, im: &self.im + &r.im }
    }
}

impl<'a> Sub<&'a ComplexPoly> for &'a ComplexPoly {
    type Output = ComplexPoly;
    fn sub(self, r: &ComplexPoly) -> ComplexPoly {
        ComplexPoly { re: &self.re - &r.re, im: &self.im - &r.im }
    }
}

impl<'a> Mul<&'a ComplexPoly> for &'a ComplexPoly {
    type Output = ComplexPoly;
    fn mul(self, r: &ComplexPoly) -> ComplexPoly {
        if self.im.is_zero() && r.im.is_zero() {
            return ComplexPoly::from_real(&self.re * &r.re);
        }
        if self.im.is_zero() {
            return r.mul_real(&self.re);
        }
        if r.im.is_zero() {
            return self.mul_real(&r.re);
        }
        let (ac, bd) = rayon::join(|| &self.re * &r.re, || &self.im * &r.im);
        let (ad, bc) = rayon::join(|| &self.re * &r.im, || &self.im * &r.re);
        ComplexPoly { re: &ac - &bd, im: &ad + &bc }
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;
    fn neg(self) -> ComplexPoly {
        ComplexPoly { re: -&self.re, im: -&self.im }
    }
}

/// Wirtinger derivative of a real polynomial in `x_1..x_n, y_1..y_n`.
pub fn wirtinger(p: &RationalPoly, j: usize, kind: WirtingerKind) -> Result<ComplexPoly> {
    if p.nvars() % 2 != 0 {
        return Err(Error::Contract(format!("{} variables is not an (x, y) ring", p.nvars())));
    }
    let c = ComplexPoly::from_real(p.clone());
    match kind {
        WirtingerKind::Dz => c.dz(j),
        WirtingerKind::Dzbar => c.dzbar(j),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WirtingerKind {
    Dz,
    Dzbar,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    // n = 1: variables x1, y1
    fn x() -> RationalPoly {
        RationalPoly::var(2, 0)
    }
    fn y() -> RationalPoly {
        RationalPoly::var(2, 1)
    }

    #[test]
    fn dz_of_dn_is_minus_i_y() {
        let d_n = y().pow(2);
        let d = wirtinger(&d_n, 1, WirtingerKind::Dz).unwrap();
        assert!(d.re.is_zero());
        assert_eq!(d.im, -&y());
    }

    #[test]
    fn dzbar_is_conjugate_of_dz_for_real_input() {
        let p = &(&x().pow(3) * &y()) + &y().pow(2).scale(&q(3, 2));
        let dz = wirtinger(&p, 1, WirtingerKind::Dz).unwrap();
        let dzb = wirtinger(&p, 1, WirtingerKind::Dzbar).unwrap();
        assert_eq!(dz.conj(), dzb);
        let zz = ComplexPoly::from_real(p.clone()).dz(1).unwrap().dzbar(1).unwrap();
        // 4 ∂²/∂z∂z̄ is the Laplacian
        let lap = &p.derivative(0).derivative(0) + &p.derivative(1).derivative(1);
        assert_eq!(zz.re.scale_int(4), lap);
        assert!(zz.im.is_zero());
    }

    #[test]
    fn constants_and_bad_indices() {
        let c = RationalPoly::constant(2, &qi(5));
        assert!(wirtinger(&c, 1, WirtingerKind::Dz).unwrap().is_zero());
        assert!(matches!(wirtinger(&c, 2, WirtingerKind::Dz), Err(Error::IndexOutOfRange { .. })));
        assert!(wirtinger(&c, 0, WirtingerKind::Dzbar).is_err());
    }

    #[test]
    fn product_with_conjugate_is_real() {
        let p = ComplexPoly::new(&x() + &y(), &x() - &y().scale(&qi(2)));
        let prod = &p * &p.conj();
        assert!(prod.is_real());
        assert_eq!(prod.re, p.norm_sqr());
    }
}
