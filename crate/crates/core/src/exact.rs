//! Exact rational helpers and the `"p/q"` text form used in every file format.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a plain decimal integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Renders as `"p/q"` (always with a denominator, so the column type is uniform).
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn ceil_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

pub fn floor_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

/// `floor(r)` as `i64`, saturating for huge values.
pub fn floor_i64(r: &Rational) -> i64 {
    floor_int(r).to_i64().unwrap_or(if r.is_negative() { i64::MIN } else { i64::MAX })
}

/// Numerator and denominator as `i128` (denominator positive).
pub fn to_i128_pair(r: &Rational) -> Result<(i128, i128)> {
    let n = r.numer().to_i128();
    let d = r.denom().to_i128();
    match (n, d) {
        (Some(n), Some(d)) => Ok((n, d)),
        _ => Err(Error::invalid(format!("rational {r} too large for lattice arithmetic"))),
    }
}

pub fn lcm_i128(a: i128, b: i128) -> i128 {
    a.lcm(&b)
}

/// Smallest `n ≥ 0` with `n² ≥ s`.
pub fn ceil_sqrt(s: i128) -> i128 {
    if s <= 0 {
        return 0;
    }
    let r = isqrt(s);
    if r * r == s {
        r
    } else {
        r + 1
    }
}

/// Largest `n ≥ 0` with `n² ≤ s`.
pub fn isqrt(s: i128) -> i128 {
    if s <= 0 {
        return 0;
    }
    let mut r = (s as f64).sqrt() as i128;
    while r * r > s {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= s {
        r += 1;
    }
    r
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}

/// Either a JSON integer or a `"p/q"` string.
#[derive(Deserialize)]
#[serde(untagged)]
enum RatLit {
    Int(i64),
    Str(String),
}

impl RatLit {
    fn into_rational(self) -> Result<Rational> {
        match self {
            RatLit::Int(i) => Ok(int(i)),
            RatLit::Str(s) => parse_rational(&s),
        }
    }
}

/// `#[serde(with = "crate::exact::serde_rat")]`
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        RatLit::deserialize(d)?.into_rational().map_err(serde::de::Error::custom)
    }
}

pub mod serde_rat_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&fmt_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<RatLit>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_rat_opt {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&fmt_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<RatLit>::deserialize(d)?.map(|r| r.into_rational().map_err(serde::de::Error::custom)).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -7 ").unwrap(), int(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(fmt_rational(&int(4)), "4/1");
        assert_eq!(fmt_rational(&rat(-2, 6)), "-1/3");
    }

    #[test]
    fn integer_square_roots() {
        for s in 0..2000i128 {
            let r = isqrt(s);
            assert!(r * r <= s && (r + 1) * (r + 1) > s);
            let c = ceil_sqrt(s);
            assert!(c * c >= s && (c == 0 || (c - 1) * (c - 1) < s));
        }
    }
}
