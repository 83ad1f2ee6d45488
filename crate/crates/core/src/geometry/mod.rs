//! Exact planar incidence geometry over arbitrary-precision integers.
//!
//! Nothing in here touches floating point. Lines are identified by a
//! canonical primitive triple `(a, b, c)` for `ax + by + c = 0`, so two
//! coincident lines always compare equal no matter which point pair
//! produced them.

mod graph;
mod incidence;
mod subset;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub use graph::{Component, OrdinaryLineGraph};
pub use subset::Subset;
pub use incidence::{
    check_incidence_inequalities, IncidenceStructure, InequalityOutcome, InequalityReport, Line,
    TkProfile,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: BigInt,
    pub y: BigInt,
}

impl Point {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        Point {
            x: x.into(),
            y: y.into(),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Canonical name of the line `a x + b y + c = 0`.
///
/// `(a, b) != (0, 0)`, `gcd(|a|, |b|, |c|) = 1` and the first nonzero of
/// `(a, b)` is positive. Ordering is lexicographic on `(a, b, c)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineKey {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl LineKey {
    /// Normalizes an arbitrary nonzero-direction triple.
    pub fn canonical(a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::Precondition(
                "line coefficients (a, b) must not both be zero".into(),
            ));
        }
        let g = a.gcd(&b).gcd(&c);
        let (mut a, mut b, mut c) = (a / &g, b / &g, c / &g);
        if a.is_negative() || (a.is_zero() && b.is_negative()) {
            a = -a;
            b = -b;
            c = -c;
        }
        Ok(LineKey { a, b, c })
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::canonical(a.into(), b.into(), c.into())
    }

    /// Whether `p` satisfies the line equation.
    pub fn contains(&self, p: &Point) -> bool {
        (&self.a * &p.x + &self.b * &p.y + &self.c).is_zero()
    }
}

impl fmt::Display for LineKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// The canonical key of the unique line through `p` and `q`.
pub fn line_key(p: &Point, q: &Point) -> Result<LineKey> {
    if p == q {
        return Err(Error::IdenticalPoints(p.clone()));
    }
    let a = &q.y - &p.y;
    let b = &p.x - &q.x;
    let c = &q.x * &p.y - &p.x * &q.y;
    LineKey::canonical(a, b, c)
}

/// Exact orientation test: the determinant of `(q - p, r - p)` vanishes.
pub fn collinear(p: &Point, q: &Point, r: &Point) -> bool {
    let det = (&q.x - &p.x) * (&r.y - &p.y) - (&q.y - &p.y) * (&r.x - &p.x);
    det.is_zero()
}

/// Whether the whole set lies on one line. Sets of at most two points count
/// as collinear.
pub fn all_collinear(points: &[Point]) -> bool {
    match points {
        [] | [_] | [_, _] => true,
        [p, rest @ ..] => match rest.iter().find(|q| *q != p) {
            None => true,
            Some(q) => points.iter().all(|r| collinear(p, q, r)),
        },
    }
}

/// Line key over machine integers, valid while every coordinate has
/// magnitude below 2^62 so that the cross term fits in an `i128`.
pub(crate) fn small_line_key(p: (i64, i64), q: (i64, i64)) -> (i128, i128, i128) {
    let (x1, y1) = (p.0 as i128, p.1 as i128);
    let (x2, y2) = (q.0 as i128, q.1 as i128);
    let (mut a, mut b, mut c) = (y2 - y1, x1 - x2, x2 * y1 - x1 * y2);
    let g = a.gcd(&b).gcd(&c);
    a /= g;
    b /= g;
    c /= g;
    if a < 0 || (a == 0 && b < 0) {
        a = -a;
        b = -b;
        c = -c;
    }
    (a, b, c)
}
