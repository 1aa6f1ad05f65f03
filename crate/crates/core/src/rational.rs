//! Exact rational numbers and their text form.
//!
//! Rationals are written as reduced `"p/q"` strings, or `"p"` when the denominator is one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p"`, `"p/q"` or `"-p/q"` (surrounding whitespace allowed).
pub fn parse(input: &str) -> Result<Rational> {
    let bad = |reason| Error::InvalidRational {
        input: input.to_string(),
        reason,
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(bad("empty string"));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None if s.contains('.') => return parse_decimal(s).ok_or_else(|| bad("not a decimal number")),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("numerator is not an integer"))?;
    let den: BigInt = den.parse().map_err(|_| bad("denominator is not an integer"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Exact value of a plain decimal such as `-0.125`.
fn parse_decimal(s: &str) -> Option<Rational> {
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.')?;
    let digits_only = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    if (int_part.is_empty() && frac_part.is_empty()) || !digits_only(int_part) || !digits_only(frac_part) {
        return None;
    }
    let digits: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = Rational::new(digits, den);
    Some(if negative { -value } else { value })
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn format(value: &Rational) -> String {
    value.to_string()
}

pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

/// Least common multiple of all denominators (1 for an empty slice).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| {
        num_integer::Integer::lcm(&acc, v.denom())
    })
}

/// Serde adapter storing a rational as its string form.
pub mod serde_str {
    use super::Rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(D::Error::custom)
    }
}

pub mod serde_opt_str {
    use super::Rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_str(&super::format(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| super::parse(&s).map_err(D::Error::custom))
            .transpose()
    }
}

pub mod serde_vec_str {
    use super::Rational;
    use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&super::format(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| super::parse(s).map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse("4/5").unwrap(), rat(4, 5));
        assert_eq!(parse(" -1/10 ").unwrap(), rat(-1, 10));
        assert_eq!(parse("3").unwrap(), int(3));
        assert_eq!(parse("6/8").unwrap(), rat(3, 4));
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse("0.04").unwrap(), rat(1, 25));
        assert_eq!(parse(".125").unwrap(), rat(1, 8));
        assert_eq!(parse("+2.").unwrap(), int(2));
        assert_eq!(parse("0.1").unwrap(), rat(1, 10));
        assert!(parse(".").is_err());
        assert!(parse("1.2.3").is_err());
        assert!(parse("-.-5").is_err());
        assert!(parse("1e.5").is_err());
    }

    #[test]
    fn rejects_zero_denominator_and_garbage() {
        assert!(matches!(parse("1/0"), Err(Error::InvalidRational { .. })));
        assert!(parse("").is_err());
        assert!(parse("x/2").is_err());
        assert!(parse("1/2/3").is_err());
    }

    #[test]
    fn format_is_reduced() {
        assert_eq!(format(&rat(6, 8)), "3/4");
        assert_eq!(format(&rat(4, 2)), "2");
        assert_eq!(format(&rat(-1, 10)), "-1/10");
    }

    #[test]
    fn lcm_of_denominators() {
        let v = [rat(1, 4), rat(1, 6), int(2)];
        assert_eq!(common_denominator(&v), BigInt::from(12));
    }
}
