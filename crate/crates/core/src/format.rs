//! Text formats shared with the command line.
//!
//! Sequence files are a single JSON object
//! `{"values":[1,36,120],"tail":"constant"}` with `tail` one of
//! `constant`, `zero`, `unspecified`. Values are plain JSON integers of any
//! size. Writing a parsed canonical file reproduces it byte for byte.
//!
//! Point-set files are a JSON array of coordinate arrays whose entries are
//! exact rationals written as `"p/q"` strings (`"p"` is accepted on input).

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Number;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailTag {
    Constant,
    Zero,
    Unspecified,
}

/// Wire form of a sequence file, before it is interpreted as a Hilbert
/// function or as a first difference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceFile {
    #[serde(with = "big_int_vec")]
    pub values: Vec<BigInt>,
    pub tail: TailTag,
}

impl SequenceFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text.trim()).map_err(|e| Error::parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sequence serialization is infallible")
    }
}

fn number(text: String) -> Number {
    Number::from_str(&text).expect("decimal integer is a JSON number")
}

pub(crate) mod big_int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(values: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(|v| number(v.to_string())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<Number>::deserialize(d)?;
        raw.iter()
            .map(|n| {
                let text = n.to_string();
                BigInt::from_str(&text)
                    .map_err(|_| D::Error::custom(format!("expected an integer, got {text}")))
            })
            .collect()
    }
}

pub(crate) mod big_uint_opt {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => number(v.to_string()).serialize(s),
            None => s.serialize_none(),
        }
    }
}

pub(crate) mod big_uint {
    use super::*;

    pub fn serialize<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        number(value.to_string()).serialize(s)
    }
}

pub(crate) mod big_int {
    use super::*;

    pub fn serialize<S: Serializer>(value: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        number(value.to_string()).serialize(s)
    }
}

pub(crate) mod big_uint_seq {
    use super::*;

    pub fn serialize<S: Serializer>(values: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(|v| number(v.to_string())))
    }
}

/// `p/q` with `q >= 1`, always written with the slash.
pub fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| Error::parse(format!("bad numerator in {text:?}")))?;
    let den = BigInt::from_str(den).map_err(|_| Error::parse(format!("bad denominator in {text:?}")))?;
    if den.is_zero() {
        return Err(Error::parse(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Raw coordinate lists; projective normalization happens in
/// [`crate::realization::PointSet`].
pub fn parse_point_rows(text: &str) -> Result<Vec<Vec<BigRational>>> {
    let raw: Vec<Vec<String>> =
        serde_json::from_str(text.trim()).map_err(|e| Error::parse(e.to_string()))?;
    raw.iter()
        .map(|row| row.iter().map(|c| parse_rational(c)).collect())
        .collect()
}

pub fn point_rows_to_json(rows: &[Vec<BigRational>]) -> String {
    let raw: Vec<Vec<String>> = rows
        .iter()
        .map(|row| row.iter().map(rational_to_string).collect())
        .collect();
    serde_json::to_string(&raw).expect("point serialization is infallible")
}
