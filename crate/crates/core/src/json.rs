//! Shared JSON conventions: exact values travel as strings.

use num_bigint::BigInt;
use serde::Serializer;

pub const SCHEMA: &str = "mcrs-approx/1";

pub fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Fixed-format decimal so output bytes do not depend on float printing heuristics.
pub fn decimal(x: f64) -> String {
    format!("{x:.6e}")
}
