//! Deterministic instance generators.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{IncidenceStructure, Point};
use crate::oracle::{exact_f_board, switch_code, DEFAULT_CAP};

/// Radius of the circle used by `circle_plus_line`; `1105 = 5 * 13 * 17`
/// gives 108 lattice points.
pub const CIRCLE_RADIUS: i64 = 1105;

/// Candidate draws per point before `random_gp` gives up.
pub const GP_RETRIES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    /// `n - 1` points on a line and one off it.
    NearPencil,
    /// `cols x rows` lattice.
    Grid,
    /// No three points collinear.
    RandomGp,
    /// Points `(x, x^3)`.
    Cubic,
    /// Lattice points of a circle plus points on a secant line.
    CirclePlusLine,
    /// `n - k` points on a line and `k` on a parabola above it.
    CollinearPlusK,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 6] = [
        InstanceKind::NearPencil,
        InstanceKind::Grid,
        InstanceKind::RandomGp,
        InstanceKind::Cubic,
        InstanceKind::CirclePlusLine,
        InstanceKind::CollinearPlusK,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            InstanceKind::NearPencil => "near_pencil",
            InstanceKind::Grid => "grid",
            InstanceKind::RandomGp => "random_gp",
            InstanceKind::Cubic => "cubic",
            InstanceKind::CirclePlusLine => "circle_plus_line",
            InstanceKind::CollinearPlusK => "collinear_plus_k",
        }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InstanceKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown instance kind {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightMode {
    AllMinus,
    AllPlus,
    Random,
    /// A starting vector whose optimum equals the board optimum (needs the oracle).
    WorstCaseSearch,
}

impl WeightMode {
    pub const ALL: [WeightMode; 4] = [
        WeightMode::AllMinus,
        WeightMode::AllPlus,
        WeightMode::Random,
        WeightMode::WorstCaseSearch,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            WeightMode::AllMinus => "all_minus",
            WeightMode::AllPlus => "all_plus",
            WeightMode::Random => "random",
            WeightMode::WorstCaseSearch => "worst_case_search",
        }
    }
}

impl fmt::Display for WeightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WeightMode::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown weight mode {s:?}")))
    }
}

/// Everything needed to reproduce an instance.
///
/// `n` is the total point count for every kind except `grid`, which uses
/// `cols x rows`. `k` is the off-line count for `collinear_plus_k` and the
/// line count for `circle_plus_line` (default `n / 2`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: InstanceKind,
    pub n: usize,
    pub rows: usize,
    pub cols: usize,
    pub k: Option<usize>,
    pub seed: u64,
    pub weight_mode: WeightMode,
}

impl GeneratorSpec {
    pub fn new(kind: InstanceKind, n: usize) -> Self {
        GeneratorSpec {
            kind,
            n,
            rows: 0,
            cols: 0,
            k: None,
            seed: 0,
            weight_mode: WeightMode::Random,
        }
    }

    pub fn grid(cols: usize, rows: usize) -> Self {
        GeneratorSpec {
            rows,
            cols,
            ..GeneratorSpec::new(InstanceKind::Grid, cols * rows)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_weights(mut self, mode: WeightMode) -> Self {
        self.weight_mode = mode;
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    /// Number of points the spec produces.
    pub fn size(&self) -> usize {
        match self.kind {
            InstanceKind::Grid => self.rows * self.cols,
            _ => self.n,
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "kind={}", self.kind)?;
        match self.kind {
            InstanceKind::Grid => write!(f, " cols={} rows={}", self.cols, self.rows)?,
            _ => write!(f, " n={}", self.n)?,
        }
        if let Some(k) = self.k {
            write!(f, " k={k}")?;
        }
        write!(f, " seed={} weights={}", self.seed, self.weight_mode)
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    /// Parses `key=value` pairs separated by spaces or commas.
    fn from_str(s: &str) -> Result<Self> {
        let mut fields = BTreeMap::new();
        for token in s.split([' ', ',', '\t']).filter(|t| !t.is_empty()) {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::Precondition(format!("expected key=value, got {token:?}")))?;
            if fields.insert(key, value).is_some() {
                return Err(Error::Precondition(format!("duplicate key {key:?}")));
            }
        }
        let number = |key: &str| -> Result<Option<u64>> {
            fields
                .get(key)
                .map(|v| {
                    v.parse::<u64>()
                        .map_err(|_| Error::Precondition(format!("{key} must be a non-negative integer, got {v:?}")))
                })
                .transpose()
        };
        let kind: InstanceKind = fields
            .get("kind")
            .ok_or_else(|| Error::Precondition("missing kind".into()))?
            .parse()?;
        let mut spec = GeneratorSpec::new(kind, number("n")?.unwrap_or(0) as usize);
        spec.rows = number("rows")?.unwrap_or(0) as usize;
        spec.cols = number("cols")?.unwrap_or(0) as usize;
        spec.k = number("k")?.map(|k| k as usize);
        spec.seed = number("seed")?.unwrap_or(0);
        if let Some(w) = fields.get("weights") {
            spec.weight_mode = w.parse()?;
        }
        for key in fields.keys() {
            if !["kind", "n", "rows", "cols", "k", "seed", "weights"].contains(key) {
                return Err(Error::Precondition(format!("unknown key {key:?}")));
            }
        }
        if kind == InstanceKind::Grid && spec.n == 0 {
            spec.n = spec.rows * spec.cols;
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub points: Vec<Point>,
    pub weights: Vec<i8>,
}

/// Builds the instance described by `spec`; identical specs give identical output.
pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    generate_with_cap(spec, DEFAULT_CAP)
}

/// As [`generate`], with an explicit oracle cap for `worst_case_search`.
pub fn generate_with_cap(spec: &GeneratorSpec, cap: usize) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let coords = match spec.kind {
        InstanceKind::NearPencil => near_pencil(spec.n)?,
        InstanceKind::Grid => grid(spec.cols, spec.rows)?,
        InstanceKind::RandomGp => random_gp(spec.n, &mut rng)?,
        InstanceKind::Cubic => cubic(spec.n)?,
        InstanceKind::CirclePlusLine => {
            circle_plus_line(spec.n, spec.k.unwrap_or(spec.n / 2), &mut rng)?
        }
        InstanceKind::CollinearPlusK => collinear_plus_k(spec.n, spec.k.unwrap_or(1))?,
    };
    let points: Vec<Point> = coords.into_iter().map(|(x, y)| Point::new(x, y)).collect();
    let n = points.len();
    let weights = match spec.weight_mode {
        WeightMode::AllMinus => vec![-1; n],
        WeightMode::AllPlus => vec![1; n],
        WeightMode::Random => (0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect(),
        WeightMode::WorstCaseSearch => {
            let inc = IncidenceStructure::new(points.clone())?;
            exact_f_board(&switch_code(&inc)?, cap)?.worst_weights
        }
    };
    Ok(Instance { points, weights })
}

fn infeasible(msg: impl Into<String>) -> Error {
    Error::Infeasible(msg.into())
}

fn near_pencil(n: usize) -> Result<Vec<(i64, i64)>> {
    if n < 3 {
        return Err(infeasible(format!("near_pencil needs n >= 3, got {n}")));
    }
    let mut c: Vec<(i64, i64)> = (0..n as i64 - 1).map(|x| (x, 0)).collect();
    c.push((0, 1));
    Ok(c)
}

fn grid(cols: usize, rows: usize) -> Result<Vec<(i64, i64)>> {
    if cols < 2 || rows < 2 {
        return Err(infeasible(format!("grid needs at least 2x2, got {cols}x{rows}")));
    }
    Ok((0..rows as i64)
        .flat_map(|y| (0..cols as i64).map(move |x| (x, y)))
        .collect())
}

fn cubic(n: usize) -> Result<Vec<(i64, i64)>> {
    if n < 3 {
        return Err(infeasible(format!("cubic needs n >= 3, got {n}")));
    }
    // (a, a^3), (b, b^3), (c, c^3) are collinear iff a + b + c = 0
    let start = if n == 3 { 0 } else { -(n as i64 / 2) };
    let limit = 2_000_000i64;
    if start.abs() > limit || start + n as i64 > limit {
        return Err(infeasible(format!("cubic n = {n} overflows 64-bit coordinates")));
    }
    Ok((start..start + n as i64).map(|x| (x, x * x * x)).collect())
}

fn collinear_plus_k(n: usize, k: usize) -> Result<Vec<(i64, i64)>> {
    if n < 2 || k > n {
        return Err(infeasible(format!("collinear_plus_k needs 2 <= n and k <= n, got n={n} k={k}")));
    }
    let on_line = n - k;
    let mut c: Vec<(i64, i64)> = (0..on_line as i64).map(|x| (x, 0)).collect();
    c.extend((0..k as i64).map(|j| (j, 1 + j * j)));
    Ok(c)
}

fn cross(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i128 {
    (b.0 - a.0) as i128 * (c.1 - a.1) as i128 - (b.1 - a.1) as i128 * (c.0 - a.0) as i128
}

fn random_gp(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(i64, i64)>> {
    if n < 3 {
        return Err(infeasible(format!("random_gp needs n >= 3, got {n}")));
    }
    let side = (4 * n * n).max(16) as i64;
    let mut pts: Vec<(i64, i64)> = Vec::with_capacity(n);
    let mut seen = HashSet::new();
    while pts.len() < n {
        let mut placed = false;
        for _ in 0..GP_RETRIES {
            let p = (rng.random_range(0..side), rng.random_range(0..side));
            if seen.contains(&p) {
                continue;
            }
            let clash = (0..pts.len())
                .any(|i| (i + 1..pts.len()).any(|j| cross(pts[i], pts[j], p) == 0));
            if !clash {
                seen.insert(p);
                pts.push(p);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(infeasible(format!(
                "no point in general position after {GP_RETRIES} draws ({} of {n} placed)",
                pts.len()
            )));
        }
    }
    Ok(pts)
}

/// All lattice points on the circle of radius [`CIRCLE_RADIUS`].
pub fn circle_lattice_points() -> Vec<(i64, i64)> {
    let r = CIRCLE_RADIUS;
    let mut out = Vec::new();
    for x in -r..=r {
        let rest = r * r - x * x;
        let y = (rest as f64).sqrt().round() as i64;
        for y in [y - 1, y, y + 1] {
            if y >= 0 && y * y == rest {
                out.push((x, y));
                if y != 0 {
                    out.push((x, -y));
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Circle points chosen by `rng`, plus points on `y = 0` where the most
/// chords cross it at an integer abscissa.
fn circle_plus_line(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(i64, i64)>> {
    let all = circle_lattice_points();
    if k > n || n - k < 3 || n - k > all.len() {
        return Err(infeasible(format!(
            "circle_plus_line needs 3..={} circle points, got n={n} k={k}",
            all.len()
        )));
    }
    let mut circle = all;
    circle.shuffle(rng);
    circle.truncate(n - k);
    circle.sort_unstable();

    // chord through a and b meets y = 0 at x = (a.x b.y - b.x a.y) / (b.y - a.y)
    let mut hits: BTreeMap<i64, usize> = BTreeMap::new();
    for (i, &a) in circle.iter().enumerate() {
        for &b in &circle[i + 1..] {
            let dy = b.1 - a.1;
            if dy == 0 {
                continue;
            }
            let num = a.0 * b.1 - b.0 * a.1;
            if num % dy == 0 {
                *hits.entry(num / dy).or_default() += 1;
            }
        }
    }
    let taken: HashSet<(i64, i64)> = circle.iter().copied().collect();
    let mut ranked: Vec<(usize, i64)> = hits
        .into_iter()
        .filter(|&(x, _)| !taken.contains(&(x, 0)))
        .map(|(x, h)| (h, x))
        .collect();
    ranked.sort_unstable_by_key(|&(h, x)| (std::cmp::Reverse(h), x.abs(), x));
    let mut line: Vec<i64> = ranked.into_iter().take(k).map(|(_, x)| x).collect();
    let mut extra = 2 * CIRCLE_RADIUS;
    while line.len() < k {
        if !line.contains(&extra) {
            line.push(extra);
        }
        extra += 1;
    }
    line.sort_unstable();
    let mut out = circle;
    out.extend(line.into_iter().map(|x| (x, 0)));
    Ok(out)
}

/// Coordinates as `i64` pairs, for generators' callers that need them.
pub fn small_coords(points: &[Point]) -> Option<Vec<(i64, i64)>> {
    use num_traits::ToPrimitive;
    points
        .iter()
        .map(|p| Some((BigInt::to_i64(&p.x)?, BigInt::to_i64(&p.y)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::exact_f;
    use std::collections::BTreeMap;

    fn inc(i: &Instance) -> IncidenceStructure {
        IncidenceStructure::new(i.points.clone()).unwrap()
    }

    #[test]
    fn near_pencil_layout() {
        let i = generate(&GeneratorSpec::new(InstanceKind::NearPencil, 5)).unwrap();
        assert_eq!(
            small_coords(&i.points).unwrap(),
            vec![(0, 0), (1, 0), (2, 0), (3, 0), (0, 1)]
        );
        assert_eq!(inc(&i).profile().unwrap().t(4), 1);
    }

    #[test]
    fn grid_profile() {
        let i = generate(&GeneratorSpec::grid(3, 3)).unwrap();
        let p = inc(&i).profile().unwrap();
        assert_eq!(p.t, BTreeMap::from([(2, 12), (3, 8)]));
        assert_eq!(small_coords(&i.points).unwrap()[..3], [(0, 0), (1, 0), (2, 0)]);
    }

    #[test]
    fn cubic_has_no_heavy_line() {
        let i = generate(&GeneratorSpec::new(InstanceKind::Cubic, 7)).unwrap();
        assert_eq!(small_coords(&i.points).unwrap()[0], (-3, -27));
        assert!(inc(&i).heavy_lines(3).is_empty());
        let three = generate(&GeneratorSpec::new(InstanceKind::Cubic, 3)).unwrap();
        assert!(!inc(&three).is_collinear());
    }

    #[test]
    fn random_gp_is_general() {
        let i = generate(&GeneratorSpec::new(InstanceKind::RandomGp, 25).with_seed(3)).unwrap();
        let p = inc(&i).profile().unwrap();
        assert_eq!(p.t, BTreeMap::from([(2, 25 * 24 / 2)]));
    }

    #[test]
    fn circle_has_many_triples() {
        assert_eq!(circle_lattice_points().len(), 108);
        let i = generate(&GeneratorSpec::new(InstanceKind::CirclePlusLine, 30).with_seed(1)).unwrap();
        let s = inc(&i);
        assert!(!s.is_collinear());
        assert_eq!(s.n(), 30);
        assert!(s.profile().unwrap().t(3) > 0);
        assert!(s.heavy_lines(3).len() <= 1);
    }

    #[test]
    fn collinear_plus_k_shape() {
        let i = generate(&GeneratorSpec::new(InstanceKind::CollinearPlusK, 9).with_k(2)).unwrap();
        assert_eq!(inc(&i).max_incidence_line().len(), 7);
        let flat = generate(&GeneratorSpec::new(InstanceKind::CollinearPlusK, 4).with_k(0)).unwrap();
        assert!(inc(&flat).is_collinear());
    }

    #[test]
    fn deterministic() {
        for kind in InstanceKind::ALL {
            let spec = if kind == InstanceKind::Grid {
                GeneratorSpec::grid(4, 3)
            } else {
                GeneratorSpec::new(kind, 12)
            }
            .with_seed(99);
            assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        }
        let a = generate(&GeneratorSpec::new(InstanceKind::RandomGp, 10).with_seed(1)).unwrap();
        let b = generate(&GeneratorSpec::new(InstanceKind::RandomGp, 10).with_seed(2)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn worst_case_matches_board_optimum() {
        let spec = GeneratorSpec::grid(3, 3).with_weights(WeightMode::WorstCaseSearch);
        let i = generate(&spec).unwrap();
        let code = switch_code(&inc(&i)).unwrap();
        let board = exact_f_board(&code, DEFAULT_CAP).unwrap();
        assert_eq!(exact_f(&code, &i.weights, DEFAULT_CAP).unwrap().value, board.value);
    }

    #[test]
    fn infeasible_specs() {
        assert!(matches!(
            generate(&GeneratorSpec::new(InstanceKind::NearPencil, 2)),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(generate(&GeneratorSpec::grid(1, 5)), Err(Error::Infeasible(_))));
        assert!(matches!(
            generate(&GeneratorSpec::new(InstanceKind::CirclePlusLine, 300)),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn spec_strings() {
        let s: GeneratorSpec = "kind=grid cols=4 rows=3 seed=7 weights=all_minus".parse().unwrap();
        assert_eq!(s, GeneratorSpec::grid(4, 3).with_seed(7).with_weights(WeightMode::AllMinus));
        assert_eq!(s.to_string().parse::<GeneratorSpec>().unwrap(), s);
        let c: GeneratorSpec = "kind=circle_plus_line,n=20,k=6".parse().unwrap();
        assert_eq!((c.n, c.k, c.seed), (20, Some(6), 0));
        assert!("kind=grid bogus=1".parse::<GeneratorSpec>().is_err());
        assert!("n=4".parse::<GeneratorSpec>().is_err());
        assert!("kind=cubic n=x".parse::<GeneratorSpec>().is_err());
    }
}
