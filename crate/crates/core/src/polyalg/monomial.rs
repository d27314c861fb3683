use std::fmt;

/// Largest supported number of variables in one polynomial ring.
pub const MAX_VARS: usize = 14;

const DEG_SHIFT: u32 = 120;
const FIELD: u128 = 0xff;

/// Exponent vector packed into a `u128`: the top byte holds the total degree and
/// byte `i` below it holds the exponent of variable `i`. Integer order on the
/// packed word is graded lexicographic order with `var 0 > var 1 > ...`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(u128);

#[inline]
fn shift(var: usize) -> u32 {
    112 - 8 * var as u32
}

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(index: usize) -> Self {
        assert!(index < MAX_VARS, "variable index {index} exceeds {MAX_VARS}");
        Monomial((1u128 << DEG_SHIFT) | (1u128 << shift(index)))
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let total: u32 = exps.iter().sum();
        assert!(total <= 255, "total degree {total} exceeds 255");
        let mut word = (total as u128) << DEG_SHIFT;
        for (i, &e) in exps.iter().enumerate() {
            word |= (e as u128) << shift(i);
        }
        Monomial(word)
    }

    #[inline]
    pub fn degree(self) -> u32 {
        (self.0 >> DEG_SHIFT) as u32
    }

    #[inline]
    pub fn exp(self, var: usize) -> u32 {
        ((self.0 >> shift(var)) & FIELD) as u32
    }

    pub fn exps(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exp(i)).collect()
    }

    /// Product of monomials; exponent fields never carry because the total degree
    /// bounds every field.
    #[inline]
    pub fn mul(self, other: Monomial) -> Monomial {
        debug_assert!(self.degree() + other.degree() <= 255, "degree overflow");
        Monomial(self.0 + other.0)
    }

    #[inline]
    pub fn divides(self, other: Monomial, nvars: usize) -> bool {
        (0..nvars).all(|i| self.exp(i) <= other.exp(i))
    }

    /// `other / self`, assuming divisibility.
    #[inline]
    pub fn quotient_of(self, other: Monomial) -> Monomial {
        Monomial(other.0 - self.0)
    }

    #[inline]
    pub fn lower(self, var: usize) -> Monomial {
        debug_assert!(self.exp(var) > 0);
        Monomial(self.0 - ((1u128 << DEG_SHIFT) | (1u128 << shift(var))))
    }

    pub fn pow(self, k: u32) -> Monomial {
        debug_assert!(self.degree() * k <= 255);
        Monomial(self.0 * k as u128)
    }

    pub fn raw(self) -> u128 {
        self.0
    }

    /// Sum of exponents over a subset of variables.
    pub fn partial_degree(self, vars: &[usize]) -> u32 {
        vars.iter().map(|&v| self.exp(v)).sum()
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps(MAX_VARS))
    }
}
