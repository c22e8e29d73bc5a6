use motive_core::elliptic::Point;
use motive_core::field::Unit;
use motive_core::groups::{FgAbGroup, IntMatrix};
use motive_core::motive::{GPrimePoint, KummerMorphism};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "motive-report/1";

#[derive(Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input_sha256: String,
    pub seed: u64,
    pub verified: bool,
    pub results: Value,
}

impl Report {
    pub fn new(command: String, input: &[u8], seed: u64, verified: bool, results: Value) -> Self {
        Report {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command,
            input_sha256: sha256_hex(input),
            seed,
            verified,
            results,
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Integers that fit in `i64` become JSON numbers, larger ones decimal strings.
pub fn int(n: &BigInt) -> Value {
    i64::try_from(n).map_or_else(|_| Value::String(n.to_string()), Value::from)
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| ints(&m.row(i))).collect())
}

pub fn units(v: &[Unit]) -> Value {
    Value::Array(v.iter().map(|u| Value::from(u.value())).collect())
}

pub fn group(g: &FgAbGroup) -> Value {
    json!({ "display": g.to_string(), "torsion": ints(g.torsion()), "free_rank": g.free_rank() })
}

pub fn point(p: &Point) -> Value {
    match p {
        Point::Infinity => Value::from("O"),
        Point::Affine { x, y } => json!([x, y]),
    }
}

pub fn gprime_point(g: &GPrimePoint) -> Value {
    json!({ "base": point(&g.base), "fibers": units(&g.fibers) })
}

pub fn morphism(m: &KummerMorphism) -> Value {
    json!({ "lattice": matrix(&m.lattice), "torus": matrix(&m.torus) })
}
