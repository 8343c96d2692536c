//! Serde adapters that write big integers and exact fractions as decimal
//! strings, so JSON consumers never truncate them to 53 bits.

use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Rational64;
use serde::{de::Error, Deserialize, Deserializer, Serializer};

pub mod big {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        BigUint::from_str(&text).map_err(D::Error::custom)
    }
}

pub mod big_opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| BigUint::from_str(&t).map_err(D::Error::custom))
            .transpose()
    }
}

/// `p/q`, or just `p` when the fraction is integral.
pub mod ratio {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        let text = String::deserialize(d)?;
        Rational64::from_str(&text).map_err(D::Error::custom)
    }
}
