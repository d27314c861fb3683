//! Exact rational scalars and their string form (`"p/q"`).

use std::str::FromStr;

use malachite_base::num::conversion::traits::RoundingFrom;
use malachite_base::rounding_modes::RoundingMode;
pub use malachite_nz::integer::Integer;
pub use malachite_nz::natural::Natural;
pub use malachite_q::Rational;

use crate::error::{Error, Result};

pub type Q = Rational;

/// `num/den` as an exact rational. Panics on a zero denominator.
pub fn q(num: i64, den: i64) -> Q {
    assert!(den != 0, "zero denominator");
    Rational::from_signeds(num, den)
}

pub fn qi(num: i64) -> Q {
    Rational::from(num)
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"-0.125"`.
pub fn parse_q(text: &str) -> Result<Q> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        if t.contains('/') {
            return Err(Error::Parse(format!("malformed rational {t:?}")));
        }
        let negative = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::Parse(format!("malformed decimal {t:?}")));
        }
        let num = Integer::from_str(&digits)
            .map_err(|_| Error::Parse(format!("malformed decimal {t:?}")))?;
        let den = Integer::from(10u32).pow_u64(frac_part.len() as u64);
        let value = Rational::from_integers(num, den);
        return Ok(if negative { -value } else { value });
    }
    let value = Rational::from_str(t).map_err(|_| Error::Parse(format!("malformed rational {t:?}")))?;
    Ok(value)
}

pub fn to_f64(value: &Q) -> f64 {
    f64::rounding_from(value, RoundingMode::Nearest).0
}

/// Exact conversion of a finite double.
pub fn from_f64(value: f64) -> Result<Q> {
    Rational::try_from(value).map_err(|_| Error::Parse(format!("non-finite float {value}")))
}

pub fn fmt_q(value: &Q) -> String {
    value.to_string()
}

trait PowU64 {
    fn pow_u64(self, exp: u64) -> Self;
}

impl PowU64 for Integer {
    fn pow_u64(self, exp: u64) -> Self {
        use malachite_base::num::arithmetic::traits::Pow;
        self.pow(exp)
    }
}

/// Serde adapter storing a rational as its `"p/q"` string.
pub mod qstr {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => parse_q(&t).map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(Rational::from(i)),
        }
    }
}

/// Same as [`qstr`] for optional fields.
pub mod qstr_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_str(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Q>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Option::<Raw>::deserialize(d)? {
            None => Ok(None),
            Some(Raw::Text(t)) => parse_q(&t).map(Some).map_err(serde::de::Error::custom),
            Some(Raw::Int(i)) => Ok(Some(Rational::from(i))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_q("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_q("-7").unwrap(), qi(-7));
        assert_eq!(parse_q("-0.125").unwrap(), q(-1, 8));
        assert_eq!(parse_q("0.25").unwrap(), q(1, 4));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
        assert!(parse_q("").is_err());
    }

    #[test]
    fn float_round_trip_is_exact() {
        let x = 0.1f64;
        let r = from_f64(x).unwrap();
        assert_eq!(to_f64(&r), x);
        assert!(from_f64(f64::NAN).is_err());
    }
}
