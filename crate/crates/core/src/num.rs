//! Exact rational scalars and their `p/q` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

/// Arbitrary-precision rational. Always reduced, denominator positive.
pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}` (expected integer or p/q)")]
pub struct ScalarParseError(pub String);

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    assert!(d != 0, "zero denominator");
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Parses `p` or `p/q`. Decimal points and exponents are rejected.
pub fn parse_scalar(text: &str) -> Result<Scalar, ScalarParseError> {
    let s = text.trim();
    let err = || ScalarParseError(text.to_string());
    let valid_int = |t: &str| {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        !digits.is_empty() && digits.bytes().all(|c| c.is_ascii_digit())
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (p.trim(), q.trim());
            if !valid_int(p) || !valid_int(q) {
                return Err(err());
            }
            let num = BigInt::from_str(p).map_err(|_| err())?;
            let den = BigInt::from_str(q).map_err(|_| err())?;
            if den.is_zero() {
                return Err(err());
            }
            Ok(Scalar::new(num, den))
        }
        None => {
            if !valid_int(s) {
                return Err(err());
            }
            Ok(Scalar::from_integer(BigInt::from_str(s).map_err(|_| err())?))
        }
    }
}

/// Canonical text form, always `p/q` (integers get `/1`).
pub fn fmt_scalar(x: &Scalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational from a finite f64 (used only when rendering oracle grids).
pub fn from_f64(x: f64) -> Option<Scalar> {
    Scalar::from_float(x)
}

pub fn min(a: &Scalar, b: &Scalar) -> Scalar {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Scalar, b: &Scalar) -> Scalar {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn abs(a: &Scalar) -> Scalar {
    a.abs()
}

/// Minimum of an optional bound and a value; `None` stands for +inf.
pub fn min_opt(a: Option<Scalar>, b: Option<Scalar>) -> Option<Scalar> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if x <= y { x } else { y }),
    }
}

/// Largest power of two 2^-k (k >= 0) that is strictly below `x`, for x > 0.
pub fn pow2_below(x: &Scalar) -> Scalar {
    let mut p = one();
    while p >= *x {
        p /= int(2);
    }
    p
}

pub mod serde_scalar {
    //! `#[serde(with = ...)]` helpers for scalars as `p/q` strings.
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_scalar(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let text = String::deserialize(d)?;
        parse_scalar(&text).map_err(serde::de::Error::custom)
    }
}

pub mod serde_vector {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(fmt_scalar))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Scalar>, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        items.iter().map(|t| parse_scalar(t).map_err(serde::de::Error::custom)).collect()
    }
}

pub mod serde_vectors {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Scalar>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|row| row.iter().map(fmt_scalar).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Scalar>>, D::Error> {
        let items = Vec::<Vec<String>>::deserialize(d)?;
        items
            .iter()
            .map(|row| row.iter().map(|t| parse_scalar(t).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

pub mod serde_opt_scalar {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Scalar>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_some(&fmt_scalar(x)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Scalar>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| parse_scalar(&t).map_err(serde::de::Error::custom)).transpose()
    }
}

pub mod serde_opt_vector {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Vec<Scalar>>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&v.iter().map(fmt_scalar).collect::<Vec<_>>()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Scalar>>, D::Error> {
        let items = Option::<Vec<String>>::deserialize(d)?;
        items
            .map(|v| v.iter().map(|t| parse_scalar(t).map_err(serde::de::Error::custom)).collect())
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_scalar("3").unwrap(), int(3));
        assert_eq!(parse_scalar("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(parse_scalar(" 2/-4 ").unwrap(), frac(-1, 2));
    }

    #[test]
    fn rejects_decimals_and_garbage() {
        for bad in ["1.5", "1e3", "", "/2", "1/0", "a/b", "1/2/3"] {
            assert!(parse_scalar(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn format_is_canonical() {
        assert_eq!(fmt_scalar(&frac(4, -6)), "-2/3");
        assert_eq!(fmt_scalar(&int(5)), "5/1");
        assert_eq!(parse_scalar(&fmt_scalar(&frac(7, 9))).unwrap(), frac(7, 9));
    }

    #[test]
    fn pow2_below_is_strict() {
        assert_eq!(pow2_below(&int(1)), frac(1, 2));
        assert_eq!(pow2_below(&frac(3, 10)), frac(1, 4));
        assert_eq!(pow2_below(&int(5)), int(1));
    }
}
