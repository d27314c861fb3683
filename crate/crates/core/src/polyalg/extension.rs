use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::monomial::Monomial;
use super::poly::RationalPoly;
use crate::error::{Error, Result};
use crate::rational::Q;

/// Ring `ℚ[vars] / (r_k² − value_k)` adjoining square roots of ring elements.
///
/// A root variable may not occur in any relation value, so a single pass of
/// `r^e → value^(e div 2) · r^(e mod 2)` reaches the reduced form.
#[derive(Debug, PartialEq, Eq)]
pub struct ExtensionRing {
    names: Vec<String>,
    relations: Vec<(usize, RationalPoly)>,
}

impl ExtensionRing {
    pub fn new<S: AsRef<str>>(names: &[S], relations: &[(&str, RationalPoly)]) -> Result<Arc<Self>> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut rels = Vec::new();
        for (root, value) in relations {
            let idx = names
                .iter()
                .position(|n| n == root)
                .ok_or_else(|| Error::Spec(format!("unknown root variable {root}")))?;
            if value.nvars() != names.len() {
                return Err(Error::VarMismatch { expected: names.len(), got: value.nvars() });
            }
            rels.push((idx, value.clone()));
        }
        for (_, value) in &rels {
            for (root, _) in &rels {
                if value.var_degree(*root) > 0 {
                    return Err(Error::Spec(format!("relation value mentions root {}", names[*root])));
                }
            }
        }
        Ok(Arc::new(ExtensionRing { names, relations: rels }))
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.names.iter().map(|s| s.as_str()).collect()
    }

    /// Reduces every root exponent to 0 or 1.
    pub fn reduce(&self, p: &RationalPoly) -> RationalPoly {
        if self.relations.iter().all(|(r, _)| p.var_degree(*r) < 2) {
            return p.clone();
        }
        let nv = self.nvars();
        let mut acc = RationalPoly::zero(nv);
        for (m, c) in p.terms() {
            let mut exps = m.exps(nv);
            let mut factor = RationalPoly::one(nv);
            for (root, value) in &self.relations {
                let e = exps[*root];
                if e >= 2 {
                    factor = &factor * &value.pow(e / 2);
                    exps[*root] = e % 2;
                }
            }
            let t = RationalPoly::monomial(nv, Monomial::from_exps(&exps), &c);
            acc = &acc + &(&t * &factor);
        }
        acc
    }
}

/// Element of an [`ExtensionRing`], always kept reduced.
#[derive(Clone)]
pub struct ExtensionPoly {
    ring: Arc<ExtensionRing>,
    poly: RationalPoly,
}

impl ExtensionPoly {
    pub fn from_poly(ring: &Arc<ExtensionRing>, p: RationalPoly) -> Self {
        assert_eq!(p.nvars(), ring.nvars(), "ring variable count");
        let poly = ring.reduce(&p);
        ExtensionPoly { ring: ring.clone(), poly }
    }

    pub fn var(ring: &Arc<ExtensionRing>, name: &str) -> Self {
        let idx = ring.index(name).unwrap_or_else(|| panic!("unknown variable {name}"));
        Self::from_poly(ring, RationalPoly::var(ring.nvars(), idx))
    }

    pub fn constant(ring: &Arc<ExtensionRing>, c: &Q) -> Self {
        Self::from_poly(ring, RationalPoly::constant(ring.nvars(), c))
    }

    pub fn poly(&self) -> &RationalPoly {
        &self.poly
    }

    pub fn ring(&self) -> &Arc<ExtensionRing> {
        &self.ring
    }

    pub fn scale(&self, c: &Q) -> Self {
        ExtensionPoly { ring: self.ring.clone(), poly: self.poly.scale(c) }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(&self.ring, &Q::from(1));
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn same_ring(&self, other: &Self) {
        assert!(Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring, "mixed extension rings");
    }
}

impl PartialEq for ExtensionPoly {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly && *self.ring == *other.ring
    }
}

impl fmt::Debug for ExtensionPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.poly.display_with(&self.ring.names()))
    }
}

impl fmt::Display for ExtensionPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.poly.display_with(&self.ring.names()))
    }
}

impl<'a> Add<&'a ExtensionPoly> for &'a ExtensionPoly {
    type Output = ExtensionPoly;
    fn add(self, r: &ExtensionPoly) -> ExtensionPoly {
        self.same_ring(r);
        ExtensionPoly { ring: self.ring.clone(), poly: &self.poly + &r.poly }
    }
}

impl<'a> Sub<&'a ExtensionPoly> for &'a ExtensionPoly {
    type Output = ExtensionPoly;
    fn sub(self, r: &ExtensionPoly) -> ExtensionPoly {
        self.same_ring(r);
        ExtensionPoly { ring: self.ring.clone(), poly: &self.poly - &r.poly }
    }
}

impl<'a> Mul<&'a ExtensionPoly> for &'a ExtensionPoly {
    type Output = ExtensionPoly;
    fn mul(self, r: &ExtensionPoly) -> ExtensionPoly {
        self.same_ring(r);
        ExtensionPoly::from_poly(&self.ring, &self.poly * &r.poly)
    }
}

impl Neg for &ExtensionPoly {
    type Output = ExtensionPoly;
    fn neg(self) -> ExtensionPoly {
        ExtensionPoly { ring: self.ring.clone(), poly: -&self.poly }
    }
}
