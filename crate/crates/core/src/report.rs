//! Pass/fail reports for exact identity checks.

use serde::{Deserialize, Serialize};

use crate::polyalg::{ComplexPoly, RationalPoly};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub lemma: String,
    pub inputs: serde_json::Value,
    pub pass: bool,
    pub witness: Option<String>,
}

impl VerificationReport {
    pub fn new(lemma: &str, inputs: serde_json::Value) -> Self {
        VerificationReport { lemma: lemma.to_string(), inputs, pass: true, witness: None }
    }

    pub fn fail(mut self, witness: String) -> Self {
        self.pass = false;
        self.witness.get_or_insert(witness);
        self
    }

    /// Records the outcome of `lhs == rhs`, naming the first differing monomial.
    pub fn expect_equal(self, label: &str, lhs: &RationalPoly, rhs: &RationalPoly, names: &[&str]) -> Self {
        match poly_witness(lhs, rhs, names) {
            None => self,
            Some(w) => self.fail(format!("{label}: {w}")),
        }
    }

    pub fn expect_equal_complex(self, label: &str, lhs: &ComplexPoly, rhs: &ComplexPoly, names: &[&str]) -> Self {
        let re = poly_witness(&lhs.re, &rhs.re, names).map(|w| format!("{label} (real part): {w}"));
        let im = poly_witness(&lhs.im, &rhs.im, names).map(|w| format!("{label} (imaginary part): {w}"));
        match re.or(im) {
            None => self,
            Some(w) => self.fail(w),
        }
    }

    pub fn expect(self, condition: bool, what: impl FnOnce() -> String) -> Self {
        if condition {
            self
        } else {
            self.fail(what())
        }
    }

    pub fn and(mut self, other: VerificationReport) -> Self {
        if !other.pass {
            self.pass = false;
            if self.witness.is_none() {
                self.witness = other.witness.map(|w| format!("{}: {w}", other.lemma));
            }
        }
        self
    }
}

/// Description of the first monomial where the two sides differ.
pub fn poly_witness(lhs: &RationalPoly, rhs: &RationalPoly, names: &[&str]) -> Option<String> {
    if lhs.nvars() != rhs.nvars() {
        return Some(format!("variable counts differ ({} vs {})", lhs.nvars(), rhs.nvars()));
    }
    lhs.first_difference(rhs).map(|(m, a, b)| {
        let mono = RationalPoly::monomial(lhs.nvars(), m, &crate::rational::Q::from(1));
        format!("monomial {} has coefficient {a} on the left and {b} on the right", mono.display_with(names))
    })
}
