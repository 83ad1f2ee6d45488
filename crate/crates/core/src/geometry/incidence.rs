use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{line_key, small_line_key, LineKey, Point};
use crate::error::{Error, Result};

/// A connecting line together with the sorted indices of its points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub key: LineKey,
    pub points: Vec<usize>,
}

impl Line {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, point: usize) -> bool {
        self.points.binary_search(&point).is_ok()
    }
}

/// All connecting lines of a point set.
///
/// Lines are stored sorted by key, so a line index order is the same as
/// lexicographic key order.
#[derive(Debug, Clone)]
pub struct IncidenceStructure {
    points: Vec<Point>,
    lines: Vec<Line>,
    index: HashMap<LineKey, usize>,
    point_lines: Vec<Vec<usize>>,
    pair_line: Vec<u32>,
}

const NO_LINE: u32 = u32::MAX;

impl IncidenceStructure {
    /// Groups all `C(n, 2)` point pairs by the line they span.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let n = points.len();
        if n < 2 {
            return Err(Error::TooFewPoints { required: 2, got: n });
        }
        check_distinct(&points)?;

        let pair_groups = group_pairs(&points);
        let mut groups: Vec<(LineKey, Vec<usize>)> = Vec::new();
        let mut pair_group = vec![NO_LINE; n * n];
        for (key, pairs) in pair_groups {
            let gid = groups.len() as u32;
            let mut pts = Vec::with_capacity(pairs.len() + 1);
            for &(i, j) in &pairs {
                pair_group[i * n + j] = gid;
                pair_group[j * n + i] = gid;
                pts.push(i);
                pts.push(j);
            }
            pts.sort_unstable();
            pts.dedup();
            groups.push((key, pts));
        }

        let mut order: Vec<usize> = (0..groups.len()).collect();
        order.sort_by(|&x, &y| groups[x].0.cmp(&groups[y].0));
        let mut remap = vec![0u32; groups.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new as u32;
        }
        for slot in pair_group.iter_mut().filter(|s| **s != NO_LINE) {
            *slot = remap[*slot as usize];
        }
        let mut slots: Vec<Option<(LineKey, Vec<usize>)>> = groups.into_iter().map(Some).collect();
        let lines: Vec<Line> = order
            .iter()
            .map(|&old| {
                let (key, points) = slots[old].take().expect("each group moved once");
                Line { key, points }
            })
            .collect();

        let mut point_lines = vec![Vec::new(); n];
        let mut index = HashMap::with_capacity(lines.len());
        for (li, line) in lines.iter().enumerate() {
            index.insert(line.key.clone(), li);
            for &p in &line.points {
                point_lines[p].push(li);
            }
        }

        Ok(IncidenceStructure {
            points,
            lines,
            index,
            point_lines,
            pair_line: pair_group,
        })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn line(&self, index: usize) -> &Line {
        &self.lines[index]
    }

    pub fn line_index(&self, key: &LineKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Index of the line through points `i != j`.
    pub fn line_between(&self, i: usize, j: usize) -> usize {
        let slot = self.pair_line[i * self.n() + j];
        assert!(slot != NO_LINE, "no line between {i} and itself");
        slot as usize
    }

    /// Indices of the lines through point `p`, in key order.
    pub fn lines_through(&self, p: usize) -> &[usize] {
        &self.point_lines[p]
    }

    pub fn is_collinear(&self) -> bool {
        self.lines.len() == 1
    }

    /// The `t_k` profile, checked against the pair-counting identity.
    pub fn profile(&self) -> Result<TkProfile> {
        let mut t = BTreeMap::new();
        for line in &self.lines {
            *t.entry(line.len()).or_insert(0) += 1;
        }
        let profile = TkProfile { n: self.n(), t };
        if !profile.pair_identity_holds() {
            return Err(Error::Internal(format!(
                "pair-counting identity fails for profile {profile}"
            )));
        }
        Ok(profile)
    }

    /// A line with the most points; ties go to the smallest key.
    pub fn max_incidence_line(&self) -> &Line {
        let mut best = &self.lines[0];
        for line in &self.lines[1..] {
            if line.len() > best.len() {
                best = line;
            }
        }
        best
    }

    /// Keys of all lines with more than `threshold` points, sorted.
    pub fn heavy_lines(&self, threshold: usize) -> Vec<LineKey> {
        self.lines
            .iter()
            .filter(|l| l.len() > threshold)
            .map(|l| l.key.clone())
            .collect()
    }
}

fn check_distinct(points: &[Point]) -> Result<()> {
    let mut seen: HashMap<&Point, usize> = HashMap::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if let Some(&first) = seen.get(p) {
            return Err(Error::DuplicatePoint {
                point: p.clone(),
                first,
                second: i,
            });
        }
        seen.insert(p, i);
    }
    Ok(())
}

/// Maps each line key to the pairs spanning it, pairs in lexicographic order.
fn group_pairs(points: &[Point]) -> Vec<(LineKey, Vec<(usize, usize)>)> {
    let limit = BigInt::from(1i64 << 62);
    let small: Option<Vec<(i64, i64)>> = points
        .iter()
        .map(|p| {
            if p.x.magnitude() < limit.magnitude() && p.y.magnitude() < limit.magnitude() {
                Some((p.x.to_i64()?, p.y.to_i64()?))
            } else {
                None
            }
        })
        .collect();

    let n = points.len();
    match small {
        Some(coords) => {
            let mut groups: HashMap<(i128, i128, i128), Vec<(usize, usize)>> = HashMap::new();
            for i in 0..n {
                for j in i + 1..n {
                    groups
                        .entry(small_line_key(coords[i], coords[j]))
                        .or_default()
                        .push((i, j));
                }
            }
            groups
                .into_iter()
                .map(|((a, b, c), pairs)| {
                    (
                        LineKey {
                            a: a.into(),
                            b: b.into(),
                            c: c.into(),
                        },
                        pairs,
                    )
                })
                .collect()
        }
        None => {
            let mut groups: HashMap<LineKey, Vec<(usize, usize)>> = HashMap::new();
            for i in 0..n {
                for j in i + 1..n {
                    let key = line_key(&points[i], &points[j]).expect("points are distinct");
                    groups.entry(key).or_default().push((i, j));
                }
            }
            groups.into_iter().collect()
        }
    }
}

/// Number of connecting lines with exactly `k` points, for each `k >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TkProfile {
    pub n: usize,
    pub t: BTreeMap<usize, usize>,
}

impl TkProfile {
    pub fn t(&self, k: usize) -> usize {
        self.t.get(&k).copied().unwrap_or(0)
    }

    pub fn line_count(&self) -> usize {
        self.t.values().sum()
    }

    /// `sum_k C(k,2) t_k == C(n,2)`.
    pub fn pair_identity_holds(&self) -> bool {
        let pairs: u128 = self
            .t
            .iter()
            .map(|(&k, &tk)| choose2(k) * tk as u128)
            .sum();
        pairs == choose2(self.n)
    }
}

impl fmt::Display for TkProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} {{", self.n)?;
        for (i, (k, tk)) in self.t.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}:{tk}")?;
        }
        write!(f, "}}")
    }
}

fn choose2(k: usize) -> u128 {
    let k = k as u128;
    k * k.saturating_sub(1) / 2
}

/// Result of evaluating one incidence inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InequalityOutcome {
    NotApplicable,
    Holds { lhs: i128, rhs: i128 },
    /// Hypothesis true but the inequality fails. Both inequalities are
    /// theorems, so this always means a bug in the incidence code.
    Violated { lhs: i128, rhs: i128 },
}

impl InequalityOutcome {
    fn evaluate(hypothesis: bool, lhs: i128, rhs: i128) -> Self {
        match (hypothesis, lhs >= rhs) {
            (false, _) => InequalityOutcome::NotApplicable,
            (true, true) => InequalityOutcome::Holds { lhs, rhs },
            (true, false) => InequalityOutcome::Violated { lhs, rhs },
        }
    }

    pub fn is_applicable(&self) -> bool {
        !matches!(self, InequalityOutcome::NotApplicable)
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, InequalityOutcome::Violated { .. })
    }
}

/// Erdős–Purdy and Hirzebruch checks for one `t_k` profile.
///
/// `erdos_purdy` compares `max(t2, t3)` against `n - 1` and applies when
/// `n >= 25` and `t_n = 0`. `hirzebruch` compares `4 t2 + 3 t3` against
/// `4 n + 4 sum_{k>=5} (2k - 9) t_k` (both sides scaled by four to stay
/// integral) and applies when `t_n = t_{n-1} = t_{n-2} = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InequalityReport {
    pub erdos_purdy: InequalityOutcome,
    pub hirzebruch: InequalityOutcome,
}

impl InequalityReport {
    pub fn has_violation(&self) -> bool {
        self.erdos_purdy.is_violated() || self.hirzebruch.is_violated()
    }
}

pub fn check_incidence_inequalities(profile: &TkProfile) -> InequalityReport {
    let n = profile.n;
    let t = |k: usize| profile.t(k) as i128;

    let ep_hyp = n >= 25 && t(n) == 0;
    let erdos_purdy = InequalityOutcome::evaluate(ep_hyp, t(2).max(t(3)), n as i128 - 1);

    let hz_hyp = n >= 3 && t(n) == 0 && t(n - 1) == 0 && t(n - 2) == 0;
    let tail: i128 = profile
        .t
        .iter()
        .filter(|(&k, _)| k >= 5)
        .map(|(&k, &tk)| (2 * k as i128 - 9) * tk as i128)
        .sum();
    let hirzebruch =
        InequalityOutcome::evaluate(hz_hyp, 4 * t(2) + 3 * t(3), 4 * n as i128 + 4 * tail);

    InequalityReport {
        erdos_purdy,
        hirzebruch,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(coords: &[(i64, i64)]) -> Vec<Point> {
        coords.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    fn grid(k: i64) -> Vec<Point> {
        let mut v = Vec::new();
        for y in 0..k {
            for x in 0..k {
                v.push(Point::new(x, y));
            }
        }
        v
    }

    /// Brute-force t_k: for each pair, count points on its line, then divide
    /// each line's contribution by its number of pairs.
    fn brute_profile(points: &[Point]) -> BTreeMap<usize, usize> {
        let n = points.len();
        let mut pair_counts: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let k = (0..n)
                    .filter(|&r| super::super::collinear(&points[i], &points[j], &points[r]))
                    .count();
                *pair_counts.entry(k).or_insert(0) += 1;
            }
        }
        pair_counts
            .into_iter()
            .map(|(k, pairs)| (k, pairs / (k * (k - 1) / 2)))
            .collect()
    }

    #[test]
    fn grid3_profile() {
        let inc = IncidenceStructure::new(grid(3)).unwrap();
        assert_eq!(inc.lines().len(), 20);
        let prof = inc.profile().unwrap();
        assert_eq!(prof.t, BTreeMap::from([(2, 12), (3, 8)]));
        assert_eq!(prof.t, brute_profile(&grid(3)));
    }

    #[test]
    fn near_pencil_profile() {
        let inc = IncidenceStructure::new(pts(&[(0, 0), (1, 0), (2, 0), (3, 0), (0, 1)])).unwrap();
        let prof = inc.profile().unwrap();
        assert_eq!(prof.t, BTreeMap::from([(2, 4), (4, 1)]));
        assert_eq!(inc.max_incidence_line().key, LineKey::from_i64(0, 1, 0).unwrap());
        assert_eq!(inc.heavy_lines(3), vec![LineKey::from_i64(0, 1, 0).unwrap()]);
    }

    #[test]
    fn two_points_one_line() {
        let inc = IncidenceStructure::new(pts(&[(0, 0), (5, 1)])).unwrap();
        assert_eq!(inc.lines().len(), 1);
        assert_eq!(inc.lines()[0].points, vec![0, 1]);
        assert!(inc.is_collinear());
    }

    #[test]
    fn collinear_and_triangle_profiles() {
        let inc = IncidenceStructure::new(pts(&[(0, 0), (1, 1), (2, 2), (3, 3)])).unwrap();
        assert_eq!(inc.profile().unwrap().t, BTreeMap::from([(4, 1)]));
        let tri = IncidenceStructure::new(pts(&[(0, 0), (1, 0), (0, 1)])).unwrap();
        assert_eq!(tri.profile().unwrap().t, BTreeMap::from([(2, 3)]));
        // tie-break: smallest key among the three sides
        let smallest = tri.lines().iter().map(|l| &l.key).min().unwrap();
        assert_eq!(&tri.max_incidence_line().key, smallest);
    }

    #[test]
    fn duplicate_point_rejected() {
        let err = IncidenceStructure::new(pts(&[(0, 0), (1, 2), (0, 0)])).unwrap_err();
        assert!(matches!(err, Error::DuplicatePoint { first: 0, second: 2, .. }));
        assert!(matches!(
            IncidenceStructure::new(pts(&[(0, 0)])),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn heavy_lines_examples() {
        let inc = IncidenceStructure::new(grid(3)).unwrap();
        assert!(inc.heavy_lines(3).is_empty());
        assert!(inc.heavy_lines(9).is_empty());
    }

    #[test]
    fn lines_sorted_and_pairs_indexed() {
        let inc = IncidenceStructure::new(grid(4)).unwrap();
        assert!(inc.lines().windows(2).all(|w| w[0].key < w[1].key));
        for i in 0..16 {
            for j in 0..16 {
                if i != j {
                    let l = inc.line(inc.line_between(i, j));
                    assert!(l.contains(i) && l.contains(j));
                }
            }
        }
    }

    #[test]
    fn inequality_examples() {
        let g3 = IncidenceStructure::new(grid(3)).unwrap().profile().unwrap();
        let rep = check_incidence_inequalities(&g3);
        assert_eq!(rep.erdos_purdy, InequalityOutcome::NotApplicable);
        // 12 + 0.75 * 8 = 18 >= 9, scaled by four
        assert_eq!(rep.hirzebruch, InequalityOutcome::Holds { lhs: 72, rhs: 36 });

        let col = IncidenceStructure::new(pts(&[(0, 0), (1, 0), (2, 0)]))
            .unwrap()
            .profile()
            .unwrap();
        let rep = check_incidence_inequalities(&col);
        assert!(!rep.erdos_purdy.is_applicable() && !rep.hirzebruch.is_applicable());

        let g5 = IncidenceStructure::new(grid(5)).unwrap().profile().unwrap();
        assert_eq!(g5.t, brute_profile(&grid(5)));
        let rep = check_incidence_inequalities(&g5);
        assert!(matches!(rep.hirzebruch, InequalityOutcome::Holds { .. }));
        // 5x5 grid: n = 25, t_25 = 0, so Erdős–Purdy applies too
        assert!(matches!(rep.erdos_purdy, InequalityOutcome::Holds { .. }));
    }

    #[test]
    fn violated_flag() {
        let fake = TkProfile {
            n: 10,
            t: BTreeMap::from([(3, 10)]),
        };
        assert!(check_incidence_inequalities(&fake).has_violation());
    }
}
