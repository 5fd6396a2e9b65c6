//! Exact rationals and their `"p/q"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRatError(pub String);

impl fmt::Display for ParseRatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse rational {:?}", self.0)
    }
}

impl std::error::Error for ParseRatError {}

/// Accepts `"3"`, `"-3/4"`, and surrounding whitespace.
pub fn parse_q(s: &str) -> Result<Q, ParseRatError> {
    let t = s.trim();
    let err = || ParseRatError(s.to_string());
    match t.split_once('/') {
        None => BigInt::from_str(t).map(Q::from_integer).map_err(|_| err()),
        Some((a, b)) => {
            let n = BigInt::from_str(a.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(b.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Q::new(n, d))
        }
    }
}

/// Always `p/q`, even for integers, so the format is uniform.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_vec(s: &str) -> Result<Vec<Q>, ParseRatError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_q).collect()
}

/// Serde wrapper that reads and writes a rational as a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QStr(pub Q);

impl Serialize for QStr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for QStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map(QStr).map_err(serde::de::Error::custom)
    }
}

/// Random rational with numerator in `[-num, num]` and denominator in `[1, den]`.
pub fn random_q<R: Rng>(rng: &mut R, num: i64, den: i64) -> Q {
    let n = rng.gen_range(-num..=num);
    let d = rng.gen_range(1..=den);
    qf(n, d)
}

pub fn random_nonzero_q<R: Rng>(rng: &mut R, num: i64, den: i64) -> Q {
    loop {
        let x = random_q(rng, num, den);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn sum(xs: impl IntoIterator<Item = Q>) -> Q {
    xs.into_iter().fold(Q::zero(), |a, b| a + b)
}

pub fn is_pos(x: &Q) -> bool {
    x.is_positive()
}

pub fn one() -> Q {
    Q::one()
}
