//! JSON encoding of exact integers and line keys.
//!
//! Integers within `±2^53` travel as JSON numbers, larger ones as decimal
//! strings. Both forms are accepted on input.

use gbg_core::geometry::{LineKey, Point};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::Value;

const SAFE: i64 = 1 << 53;

pub fn int(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) if (-SAFE..=SAFE).contains(&x) => Value::from(x),
        _ => Value::String(v.to_string()),
    }
}

pub fn point(p: &Point) -> Value {
    Value::Array(vec![int(&p.x), int(&p.y)])
}

pub fn key(k: &LineKey) -> Value {
    Value::Array(vec![int(&k.a), int(&k.b), int(&k.c)])
}

pub fn parse_int(v: &Value) -> Result<BigInt, String> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| format!("{n} is not an integer")),
        Value::String(s) => s.parse().map_err(|_| format!("{s:?} is not an integer")),
        other => Err(format!("expected an integer, got {other}")),
    }
}

fn parse_tuple<const N: usize>(v: &Value, what: &str) -> Result<[BigInt; N], String> {
    let items = v
        .as_array()
        .filter(|a| a.len() == N)
        .ok_or_else(|| format!("{what} must be an array of {N} integers"))?;
    let parsed: Vec<BigInt> = items.iter().map(parse_int).collect::<Result<_, _>>()?;
    Ok(parsed.try_into().expect("length checked"))
}

pub fn parse_point(v: &Value) -> Result<Point, String> {
    let [x, y] = parse_tuple::<2>(v, "point")?;
    Ok(Point { x, y })
}

/// Reads `[a, b, c]` as given; a non-canonical triple simply matches no line.
pub fn parse_key(v: &Value) -> Result<LineKey, String> {
    let [a, b, c] = parse_tuple::<3>(v, "line")?;
    Ok(LineKey { a, b, c })
}
