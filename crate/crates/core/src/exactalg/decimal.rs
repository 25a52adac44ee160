//! Serde adapter writing big integers as decimal strings.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
    let raw = Vec::<String>::deserialize(d)?;
    super::poly::parse_decimals(&raw).map_err(serde::de::Error::custom)
}
