//! Text formats.
//!
//! Point set: the point count on the first line, then one `x y w` line per
//! point with `w` one of `1`, `+1`, `-1`. `#` starts a comment; blank lines
//! are ignored.
//!
//! Certificate: `GBG-CERT v1`, a point-set block holding the initial weights,
//! one `a b c` line per switch, and `CLAIM <kind> <value>`.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::board::{BoundKind, SwitchCertificate};
use crate::error::{Error, Result};
use crate::geometry::{LineKey, Point};

pub const CERT_HEADER: &str = "GBG-CERT v1";

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_int(line: usize, field: &str, what: &str) -> Result<BigInt> {
    field
        .parse::<BigInt>()
        .map_err(|_| parse_err(line, format!("{what} is not an integer: {field:?}")))
}

fn parse_weight(line: usize, field: &str) -> Result<i8> {
    match field {
        "1" | "+1" => Ok(1),
        "-1" => Ok(-1),
        other => Err(parse_err(line, format!("weight must be +1 or -1, got {other:?}"))),
    }
}

/// Reads a point-set block from `lines`, consuming exactly its lines.
fn read_points<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<(Vec<Point>, Vec<i8>)> {
    let (ln, head) = lines.next().ok_or_else(|| parse_err(0, "missing point count"))?;
    let n: usize = head
        .parse()
        .map_err(|_| parse_err(ln, format!("point count is not a non-negative integer: {head:?}")))?;
    let mut points = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut seen: HashMap<Point, usize> = HashMap::with_capacity(n);
    for k in 0..n {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("expected {n} points, found {k}")))?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [x, y, w] = fields[..] else {
            return Err(parse_err(ln, format!("expected \"x y w\", got {line:?}")));
        };
        let p = Point {
            x: parse_int(ln, x, "x coordinate")?,
            y: parse_int(ln, y, "y coordinate")?,
        };
        weights.push(parse_weight(ln, w)?);
        if let Some(&first) = seen.get(&p) {
            return Err(Error::DuplicatePoint {
                point: p,
                first,
                second: k,
            });
        }
        seen.insert(p.clone(), k);
        points.push(p);
    }
    Ok((points, weights))
}

fn write_points(out: &mut String, points: &[Point], weights: &[i8]) {
    writeln!(out, "{}", points.len()).unwrap();
    for (p, w) in points.iter().zip(weights) {
        writeln!(out, "{} {} {}", p.x, p.y, if *w < 0 { "-1" } else { "1" }).unwrap();
    }
}

/// Parses a point-set file.
pub fn parse_point_set(text: &str) -> Result<(Vec<Point>, Vec<i8>)> {
    let mut lines = content_lines(text);
    let parsed = read_points(&mut lines)?;
    if let Some((ln, line)) = lines.next() {
        return Err(parse_err(ln, format!("unexpected trailing line {line:?}")));
    }
    Ok(parsed)
}

/// Canonical text of a point set: no comments, weights as `1` and `-1`.
pub fn serialize_point_set(points: &[Point], weights: &[i8]) -> String {
    let mut out = String::new();
    write_points(&mut out, points, weights);
    out
}

pub fn serialize_certificate(points: &[Point], cert: &SwitchCertificate) -> String {
    let mut out = String::new();
    writeln!(out, "{CERT_HEADER}").unwrap();
    write_points(&mut out, points, &cert.initial_weights);
    for k in &cert.switches {
        writeln!(out, "{} {} {}", k.a, k.b, k.c).unwrap();
    }
    writeln!(out, "CLAIM {} {}", cert.kind, cert.claimed_discrepancy).unwrap();
    out
}

/// Parses a certificate file into its points and certificate. Switch lines
/// must be canonical line keys; whether they connect two points is left to
/// verification.
pub fn parse_certificate(text: &str) -> Result<(Vec<Point>, SwitchCertificate)> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, CERT_HEADER)) => {}
        Some((ln, other)) => {
            return Err(parse_err(ln, format!("expected {CERT_HEADER:?}, got {other:?}")))
        }
        None => return Err(parse_err(0, "empty certificate")),
    }
    let (points, initial_weights) = read_points(&mut lines)?;
    let mut switches = Vec::new();
    let mut claim = None;
    for (ln, line) in lines {
        if claim.is_some() {
            return Err(parse_err(ln, format!("unexpected line after CLAIM: {line:?}")));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[..] {
            ["CLAIM", kind, value] => {
                let kind: BoundKind = kind.parse().map_err(|_| parse_err(ln, format!("unknown bound kind {kind:?}")))?;
                let value: i64 = value
                    .parse()
                    .map_err(|_| parse_err(ln, format!("claimed value is not an integer: {value:?}")))?;
                claim = Some((kind, value));
            }
            [a, b, c] => {
                let key = LineKey {
                    a: parse_int(ln, a, "a")?,
                    b: parse_int(ln, b, "b")?,
                    c: parse_int(ln, c, "c")?,
                };
                let canonical = LineKey::canonical(key.a.clone(), key.b.clone(), key.c.clone())
                    .map_err(|_| parse_err(ln, "degenerate line (a = b = 0)"))?;
                if canonical != key {
                    return Err(parse_err(ln, format!("line key {key} is not canonical ({canonical})")));
                }
                switches.push(key);
            }
            _ => return Err(parse_err(ln, format!("expected \"a b c\" or CLAIM, got {line:?}"))),
        }
    }
    let (kind, claimed_discrepancy) = claim.ok_or_else(|| parse_err(0, "missing CLAIM line"))?;
    Ok((
        points,
        SwitchCertificate {
            initial_weights,
            switches,
            claimed_discrepancy,
            kind,
        },
    ))
}
