//! Exact rationals and their string form.
//!
//! Every quantity in the crate is a `BigRational`; these helpers cover the
//! "p/q" text encoding (denominator dropped when it is 1) and a few integer
//! predicates used throughout.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn is_integral(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Integer value of `x`, if it is integral.
pub fn to_integer(x: &Rational) -> Option<BigInt> {
    is_integral(x).then(|| x.numer().clone())
}

pub fn to_i64(x: &Rational) -> Option<i64> {
    to_integer(x).and_then(|n| n.to_i64())
}

pub fn format(x: &Rational) -> String {
    if is_integral(x) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses "p", "p/q" or a terminating decimal such as "-0.5".
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, fraction)) = s.split_once('.') {
        if fraction.is_empty() || !fraction.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let whole: BigInt = match whole.trim() {
            "" | "-" | "+" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let digits: BigInt = fraction.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), fraction.len());
        let mut value = Rational::from_integer(whole.abs()) + Rational::new(digits, scale);
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    s.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad())
}

pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

/// Decimal approximation for display only.
pub fn approx(x: &Rational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter: a rational as its "p/q" string.
pub mod as_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: an integer as a JSON number when it fits in `i64`,
/// otherwise as a decimal string. Both forms are accepted on input.
pub mod integer {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Small(i64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        match n.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&n.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Small(v) => Ok(BigInt::from(v)),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_drops_unit_denominator() {
        assert_eq!(format(&frac(6, 3)), "2");
        assert_eq!(format(&frac(-1, 2)), "-1/2");
        assert_eq!(format(&frac(2, -6)), "-1/3");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse("-4/6").unwrap(), frac(-2, 3));
        assert_eq!(parse(" 7 ").unwrap(), int(7));
        assert_eq!(parse("-0.25").unwrap(), frac(-1, 4));
        assert_eq!(parse("1.5").unwrap(), frac(3, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn floor_of_negative() {
        assert_eq!(floor(&frac(-1, 3)), BigInt::from(-1));
        assert_eq!(floor(&frac(7, 3)), BigInt::from(2));
        assert_eq!(floor(&int(-2)), BigInt::from(-2));
    }
}
