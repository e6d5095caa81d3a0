//! Rational helpers shared by every module.

use num_integer::Integer;
use num_rational::Ratio;

/// Exact rational used for exponents, inner products and energies.
pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {0:?} (expected an integer or a/b)")]
pub struct ParseRationalError(pub String);

/// Parses `"a"`, `"-a"` or `"a/b"`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num: i64 = num.parse().map_err(|_| err())?;
    let den: i64 = den.parse().map_err(|_| err())?;
    if den == 0 {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Renders `a/b` in lowest terms, or a bare integer when `b = 1`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

pub fn floor_int(r: &Rational) -> i64 {
    Integer::div_floor(r.numer(), r.denom())
}

pub fn ceil_int(r: &Rational) -> i64 {
    Integer::div_ceil(r.numer(), r.denom())
}

/// Serde adapter storing a rational as its `a/b` string.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/2").unwrap(), frac(3, 2));
        assert_eq!(parse_rational("-4/6").unwrap(), frac(-2, 3));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.5").is_err());
        assert_eq!(format_rational(&frac(6, 4)), "3/2");
        assert_eq!(format_rational(&int(-2)), "-2");
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(floor_int(&frac(-1, 2)), -1);
        assert_eq!(ceil_int(&frac(-1, 2)), 0);
        assert_eq!(floor_int(&frac(7, 3)), 2);
        assert_eq!(ceil_int(&frac(7, 3)), 3);
        assert_eq!(floor_int(&int(4)), 4);
    }
}
