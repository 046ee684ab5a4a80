//! Exact rational scalars and their text/JSON encodings.
//!
//! Rationals travel as strings `"p/q"` (or `"p"` for integers) so that no
//! value is ever squeezed through a float.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`; whitespace around the tokens is ignored.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let d = BigInt::from_str(den).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Comma separated list of rationals, e.g. `"1/3,-2,5/7"`.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(parse_rational).collect()
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    // numer/denom may overflow f64 individually; fall back on a scaled division
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = r.denom().bits().max(r.numer().bits()).saturating_sub(900);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Lowest common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub(crate) mod serde_q {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => parse_rational(&s).map_err(de::Error::custom),
            serde_json::Value::Number(n) if n.is_i64() => Ok(int(n.as_i64().unwrap())),
            other => Err(de::Error::custom(format!("expected \"p/q\", got {other}"))),
        }
    }
}

/// Integers go out as JSON numbers when they fit in an `i64`, as strings otherwise.
pub(crate) mod serde_int {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        match n.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&n.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        from_value(&v).map_err(de::Error::custom)
    }

    pub fn from_value(v: &serde_json::Value) -> std::result::Result<BigInt, String> {
        match v {
            serde_json::Value::Number(n) if n.is_i64() => Ok(BigInt::from(n.as_i64().unwrap())),
            serde_json::Value::Number(n) if n.is_u64() => Ok(BigInt::from(n.as_u64().unwrap())),
            serde_json::Value::String(s) => {
                BigInt::from_str(s.trim()).map_err(|_| format!("bad integer {s:?}"))
            }
            other => Err(format!("expected integer, got {other}")),
        }
    }

    pub fn to_value(n: &BigInt) -> serde_json::Value {
        match n.to_i64() {
            Some(v) => serde_json::Value::from(v),
            None => serde_json::Value::from(n.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("2/6").unwrap(), q(1, 3));
        assert_eq!(parse_rational(" -4 ").unwrap(), int(-4));
        assert_eq!(fmt_rational(&q(-6, 4)), "-3/2");
        assert_eq!(fmt_rational(&int(7)), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn huge_to_f64() {
        let big = Rational::new(BigInt::from(3) << 2000usize, BigInt::from(1) << 2000usize);
        assert!((to_f64(&big) - 3.0).abs() < 1e-12);
    }
}
