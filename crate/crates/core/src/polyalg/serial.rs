use serde::{Deserialize, Serialize};

use super::complex::ComplexPoly;
use super::monomial::Monomial;
use super::poly::RationalPoly;
use crate::error::{Error, Result};
use crate::rational::parse_q;

/// One term of the JSON polynomial encoding.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exps: Vec<u32>,
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0".into()
}

pub fn complex_to_records(p: &ComplexPoly) -> Vec<TermRecord> {
    let nv = p.nvars();
    let mut monos: Vec<Monomial> = p.re.monomials().chain(p.im.monomials()).collect();
    monos.sort_unstable_by(|a, b| b.cmp(a));
    monos.dedup();
    monos
        .into_iter()
        .map(|m| TermRecord { exps: m.exps(nv), re: p.re.coeff(m).to_string(), im: p.im.coeff(m).to_string() })
        .collect()
}

pub fn real_to_records(p: &RationalPoly) -> Vec<TermRecord> {
    complex_to_records(&ComplexPoly::from_real(p.clone()))
}

pub fn complex_from_records(nvars: usize, records: &[TermRecord]) -> Result<ComplexPoly> {
    let mut re = Vec::new();
    let mut im = Vec::new();
    for r in records {
        if r.exps.len() != nvars {
            return Err(Error::VarMismatch { expected: nvars, got: r.exps.len() });
        }
        let m = Monomial::from_exps(&r.exps);
        re.push((m, parse_q(&r.re)?));
        im.push((m, parse_q(&r.im)?));
    }
    Ok(ComplexPoly::new(RationalPoly::from_terms(nvars, re), RationalPoly::from_terms(nvars, im)))
}

/// Decodes a real polynomial; a nonzero imaginary coefficient is an error.
pub fn real_from_records(nvars: usize, records: &[TermRecord]) -> Result<RationalPoly> {
    let c = complex_from_records(nvars, records)?;
    if !c.is_real() {
        return Err(Error::Parse("expected real coefficients".into()));
    }
    Ok(c.re)
}

pub fn complex_to_json(p: &ComplexPoly) -> String {
    serde_json::to_string(&complex_to_records(p)).expect("term records serialize")
}

pub fn complex_from_json(nvars: usize, text: &str) -> Result<ComplexPoly> {
    let records: Vec<TermRecord> = serde_json::from_str(text)?;
    complex_from_records(nvars, &records)
}

/// Infers the variable count from the first record.
pub fn real_from_json_infer(text: &str) -> Result<RationalPoly> {
    let records: Vec<TermRecord> = serde_json::from_str(text)?;
    let nvars = records.first().map(|r| r.exps.len()).unwrap_or(0);
    real_from_records(nvars, &records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn json_layout() {
        let p = ComplexPoly::new(
            RationalPoly::from_exps_terms(2, vec![(vec![1, 0], q(1, 2))]),
            RationalPoly::from_exps_terms(2, vec![(vec![0, 1], q(-3, 1))]),
        );
        let text = complex_to_json(&p);
        assert_eq!(text, r#"[{"exps":[1,0],"re":"1/2","im":"0"},{"exps":[0,1],"re":"0","im":"-3"}]"#);
        assert_eq!(complex_from_json(2, &text).unwrap(), p);
        assert!(complex_from_json(3, &text).is_err());
    }
}
