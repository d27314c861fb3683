use super::poly::RationalPoly;
use crate::rational::to_f64;

/// Double-precision evaluator compiled from an exact polynomial.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    nvars: usize,
    coeffs: Vec<f64>,
    exps: Vec<u8>,
    max_exp: Vec<usize>,
    stride: usize,
}

impl FloatPoly {
    pub fn from_poly(p: &RationalPoly) -> Self {
        let nvars = p.nvars();
        let mut coeffs = Vec::with_capacity(p.nterms());
        let mut exps = Vec::with_capacity(p.nterms() * nvars);
        let mut max_exp = vec![0usize; nvars];
        for (m, c) in p.terms() {
            coeffs.push(to_f64(&c));
            for v in 0..nvars {
                let e = m.exp(v) as usize;
                max_exp[v] = max_exp[v].max(e);
                exps.push(e as u8);
            }
        }
        let stride = max_exp.iter().copied().max().unwrap_or(0) + 1;
        FloatPoly { nvars, coeffs, exps, max_exp, stride }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        let mut scratch = Vec::new();
        self.eval_with(point, &mut scratch)
    }

    /// Evaluation reusing a caller-owned power table.
    pub fn eval_with(&self, point: &[f64], scratch: &mut Vec<f64>) -> f64 {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let stride = self.stride;
        scratch.clear();
        scratch.resize(self.nvars * stride, 0.0);
        for (v, &x) in point.iter().enumerate() {
            let row = &mut scratch[v * stride..(v + 1) * stride];
            row[0] = 1.0;
            for e in 1..=self.max_exp[v] {
                row[e] = row[e - 1] * x;
            }
        }
        let mut acc = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate() {
            let e = &self.exps[k * self.nvars..(k + 1) * self.nvars];
            let mut t = c;
            for (v, &ev) in e.iter().enumerate() {
                if ev > 0 {
                    t *= scratch[v * stride + ev as usize];
                }
            }
            acc += t;
        }
        acc
    }
}
