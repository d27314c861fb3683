use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use malachite_base::num::arithmetic::traits::{AddMulAssign, DivExact, Gcd, Lcm};
use malachite_base::num::basic::traits::{One, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::monomial::{Monomial, MAX_VARS};
use crate::error::{Error, Result};
use crate::rational::{Integer, Natural, Rational, Q};

/// Products with more coefficient multiplications than this run on the rayon pool.
const PAR_PRODUCT_THRESHOLD: usize = 1 << 14;

/// Exact multivariate polynomial over the rationals.
///
/// Stored as integer coefficients over one positive common denominator, with
/// terms in descending graded-lex order and no zero coefficients. The
/// denominator is coprime to the content of the numerators, so two equal
/// polynomials have identical representations and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalPoly {
    nvars: usize,
    terms: Vec<(Monomial, Integer)>,
    denom: Natural,
}

impl RationalPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables supported");
        RationalPoly { nvars, terms: Vec::new(), denom: Natural::ONE }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, &Rational::ONE)
    }

    pub fn constant(nvars: usize, c: &Q) -> Self {
        Self::monomial(nvars, Monomial::ONE, c)
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable {index} out of range for {nvars} variables");
        Self::monomial(nvars, Monomial::var(index), &Rational::ONE)
    }

    pub fn monomial(nvars: usize, m: Monomial, c: &Q) -> Self {
        let mut p = Self::zero(nvars);
        if *c != 0 {
            let (num, den) = split(c);
            p.terms.push((m, num));
            p.denom = den;
        }
        p
    }

    /// Builds a polynomial from (exponents, coefficient) pairs; duplicates are summed.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Q)>,
    {
        let mut acc: FxHashMap<Monomial, Q> = FxHashMap::default();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(|| Rational::ZERO) += c;
        }
        let mut denom = Natural::ONE;
        for c in acc.values() {
            if *c != 0 {
                denom = denom.lcm(c.to_denominator());
            }
        }
        let mut out: Vec<(Monomial, Integer)> = acc
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(m, c)| {
                let (num, den) = split(&c);
                let factor = (&denom).div_exact(&den);
                (m, num * Integer::from(factor))
            })
            .collect();
        out.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Self::from_parts(nvars, out, denom)
    }

    pub fn from_exps_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Q)>,
    {
        Self::from_terms(
            nvars,
            terms.into_iter().map(|(e, c)| {
                assert_eq!(e.len(), nvars, "exponent vector length");
                (Monomial::from_exps(&e), c)
            }),
        )
    }

    /// `terms` must be sorted descending with distinct monomials; zero numerators are dropped.
    fn from_parts(nvars: usize, mut terms: Vec<(Monomial, Integer)>, denom: Natural) -> Self {
        terms.retain(|(_, c)| *c != 0);
        let mut p = RationalPoly { nvars, terms, denom };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        if self.terms.is_empty() {
            self.denom = Natural::ONE;
            return;
        }
        if self.denom == 1u32 {
            return;
        }
        let mut g = self.denom.clone();
        for (_, c) in &self.terms {
            g = g.gcd(c.unsigned_abs_ref());
            if g == 1u32 {
                return;
            }
        }
        let gi = Integer::from(g.clone());
        for (_, c) in &mut self.terms {
            *c = (&*c).div_exact(&gi);
        }
        self.denom = (&self.denom).div_exact(&g);
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn denominator(&self) -> &Natural {
        &self.denom
    }

    /// Terms with their rational coefficients in canonical (descending) order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Q)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, Rational::from_integers_ref(c, &Integer::from(&self.denom))))
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(m, _)| *m)
    }

    pub fn coeff(&self, m: Monomial) -> Q {
        match self.terms.binary_search_by(|probe| m.cmp(&probe.0)) {
            Ok(i) => Rational::from_integers_ref(&self.terms[i].1, &Integer::from(&self.denom)),
            Err(_) => Rational::ZERO,
        }
    }

    pub fn coeff_of(&self, exps: &[u32]) -> Q {
        self.coeff(Monomial::from_exps(exps))
    }

    /// Maximum total degree; zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.first().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    pub fn min_degree(&self) -> u32 {
        self.terms.last().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    /// True when every term has the same total degree (the zero polynomial qualifies).
    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    pub fn max_abs_coeff(&self) -> Q {
        let top = self.terms.iter().map(|(_, c)| c.unsigned_abs_ref()).max().cloned().unwrap_or(Natural::ZERO);
        Rational::from_naturals(top, self.denom.clone())
    }

    pub fn var_degree(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(var)).max().unwrap_or(0)
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VarMismatch { expected: self.nvars, got: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        Ok(self.combine(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        Ok(self.combine(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        Ok(self.product(other))
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if subtract { -other } else { other.clone() };
        }
        let denom = (&self.denom).lcm(&other.denom);
        let fa = Integer::from((&denom).div_exact(&self.denom));
        let fb = Integer::from((&denom).div_exact(&other.denom));
        let fb = if subtract { -fb } else { fb };
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push((a[i].0, &a[i].1 * &fa));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0, &b[j].1 * &fb));
                    j += 1;
                }
                Ordering::Equal => {
                    let mut c = &a[i].1 * &fa;
                    c.add_mul_assign(&b[j].1, &fb);
                    if c != 0 {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().map(|(m, c)| (*m, c * &fa)));
        out.extend(b[j..].iter().map(|(m, c)| (*m, c * &fb)));
        Self::from_parts(self.nvars, out, denom)
    }

    fn product(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        let (small, large) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        let denom = &self.denom * &other.denom;
        if small.terms.len() == 1 {
            let (m0, c0) = &small.terms[0];
            let terms = large.terms.iter().map(|(m, c)| (m.mul(*m0), c * c0)).collect();
            return Self::from_parts(self.nvars, terms, denom);
        }
        let work = small.terms.len() * large.terms.len();
        let terms = if work < PAR_PRODUCT_THRESHOLD {
            mul_chunk(&small.terms, &large.terms)
        } else {
            let threads = rayon::current_num_threads().max(1);
            let chunk = small.terms.len().div_ceil(threads * 2).max(1);
            small
                .terms
                .par_chunks(chunk)
                .map(|part| mul_chunk(part, &large.terms))
                .reduce(Vec::new, merge_sum)
        };
        Self::from_parts(self.nvars, terms, denom)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if *c == 0 || self.is_zero() {
            return Self::zero(self.nvars);
        }
        let (num, den) = split(c);
        let terms = self.terms.iter().map(|(m, k)| (*m, k * &num)).collect();
        Self::from_parts(self.nvars, terms, &self.denom * den)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&Rational::from(k))
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to variable `var` (0-based).
    pub fn derivative(&self, var: usize) -> Self {
        assert!(var < self.nvars, "variable {var} out of range");
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(var) > 0)
            .map(|(m, c)| (m.lower(var), c * Integer::from(m.exp(var))))
            .collect();
        Self::from_parts(self.nvars, terms, self.denom.clone())
    }

    /// Real gradient: one partial derivative per variable.
    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|v| self.derivative(v)).collect()
    }

    /// Substitutes `images[i]` for variable `i`; all images must share one variable count.
    pub fn compose(&self, images: &[RationalPoly]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::VarMismatch { expected: self.nvars, got: images.len() });
        }
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        if let Some(bad) = images.iter().find(|p| p.nvars != target) {
            return Err(Error::VarMismatch { expected: target, got: bad.nvars });
        }
        let mut powers: Vec<Vec<RationalPoly>> = Vec::with_capacity(self.nvars);
        for (v, img) in images.iter().enumerate() {
            let top = self.var_degree(v);
            let mut row = vec![Self::one(target)];
            for e in 1..=top {
                let next = &row[e as usize - 1] * img;
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = Self::zero(target);
        for (m, c) in self.terms() {
            let mut t = Self::constant(target, &c);
            for (v, row) in powers.iter().enumerate() {
                let e = m.exp(v) as usize;
                if e > 0 {
                    t = &t * &row[e];
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Re-indexes variables into a ring with `nvars` variables: variable `i` becomes `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars, "remap length");
        Self::from_terms(
            nvars,
            self.terms().map(|(m, c)| {
                let mut e = vec![0u32; nvars];
                for (i, &target) in map.iter().enumerate() {
                    e[target] += m.exp(i);
                }
                (Monomial::from_exps(&e), c)
            }),
        )
    }

    pub fn eval(&self, point: &[Q]) -> Result<Q> {
        if point.len() != self.nvars {
            return Err(Error::VarMismatch { expected: self.nvars, got: point.len() });
        }
        let mut powers: Vec<Vec<Q>> = Vec::with_capacity(self.nvars);
        for (v, x) in point.iter().enumerate() {
            let mut row = vec![Rational::ONE];
            for e in 1..=self.var_degree(v) as usize {
                let next = &row[e - 1] * x;
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = Rational::ZERO;
        for (m, c) in &self.terms {
            let mut t = Rational::from(c);
            for (v, row) in powers.iter().enumerate() {
                let e = m.exp(v) as usize;
                if e > 0 {
                    t *= &row[e];
                }
            }
            acc += t;
        }
        Ok(acc / Rational::from(&self.denom))
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.nvars {
            return Err(Error::VarMismatch { expected: self.nvars, got: point.len() });
        }
        Ok(super::float::FloatPoly::from_poly(self).eval(point))
    }

    pub fn to_f64_terms(&self) -> Vec<(Monomial, f64)> {
        self.terms().map(|(m, c)| (m, crate::rational::to_f64(&c))).collect()
    }

    /// First monomial where `self` and `other` differ, with both coefficients.
    pub fn first_difference(&self, other: &Self) -> Option<(Monomial, Q, Q)> {
        let diff = self - other;
        diff.terms.first().map(|(m, _)| (*m, self.coeff(*m), other.coeff(*m)))
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c < 0;
            let mag = if negative { -c } else { c };
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono: Vec<String> = (0..self.nvars)
                .filter(|&v| m.exp(v) > 0)
                .map(|v| {
                    let name = names.get(v).map(|s| s.to_string()).unwrap_or_else(|| format!("t{v}"));
                    if m.exp(v) == 1 { name } else { format!("{name}^{}", m.exp(v)) }
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag == 1 {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{}*{}", mag, mono.join("*")));
            }
        }
        out
    }
}

fn split(c: &Q) -> (Integer, Natural) {
    let (n, d) = c.to_numerator_and_denominator();
    let n = if *c < 0 { -Integer::from(n) } else { Integer::from(n) };
    (n, d)
}

fn mul_chunk(part: &[(Monomial, Integer)], other: &[(Monomial, Integer)]) -> Vec<(Monomial, Integer)> {
    let mut acc: FxHashMap<Monomial, Integer> =
        FxHashMap::with_capacity_and_hasher((part.len() * other.len()).min(1 << 20), Default::default());
    for (ma, ca) in part {
        for (mb, cb) in other {
            acc.entry(ma.mul(*mb)).or_insert(Integer::ZERO).add_mul_assign(ca, cb);
        }
    }
    let mut out: Vec<(Monomial, Integer)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
    out.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    out
}

fn merge_sum(a: Vec<(Monomial, Integer)>, b: Vec<(Monomial, Integer)>) -> Vec<(Monomial, Integer)> {
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.into_iter().peekable();
    let mut ib = b.into_iter().peekable();
    loop {
        let ord = match (ia.peek(), ib.peek()) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (None, None) => break,
        };
        match ord {
            Ordering::Greater => out.push(ia.next().unwrap()),
            Ordering::Less => out.push(ib.next().unwrap()),
            Ordering::Equal => {
                let (m, x) = ia.next().unwrap();
                let (_, y) = ib.next().unwrap();
                let s = x + y;
                if s != 0 {
                    out.push((m, s));
                }
            }
        }
    }
    out
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPoly[{}]({})", self.nvars, self.display_with(&[]))
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

impl<'a> Add<&'a RationalPoly> for &'a RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        self.combine(rhs, false)
    }
}

impl<'a> Sub<&'a RationalPoly> for &'a RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        self.combine(rhs, true)
    }
}

impl<'a> Mul<&'a RationalPoly> for &'a RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        self.product(rhs)
    }
}

impl Add for RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: RationalPoly) -> RationalPoly {
        self.combine(&rhs, false)
    }
}

impl Sub for RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: RationalPoly) -> RationalPoly {
        self.combine(&rhs, true)
    }
}

impl Mul for RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: RationalPoly) -> RationalPoly {
        self.product(&rhs)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
            denom: self.denom.clone(),
        }
    }
}

impl Neg for RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        -&self
    }
}

impl std::iter::Sum for RationalPoly {
    fn sum<I: Iterator<Item = RationalPoly>>(mut iter: I) -> RationalPoly {
        let first = iter.next().expect("sum of an empty polynomial sequence needs a variable count");
        iter.fold(first, |acc, p| &acc + &p)
    }
}
