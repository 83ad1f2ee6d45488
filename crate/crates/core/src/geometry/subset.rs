use super::IncidenceStructure;
use crate::error::{Error, Result};

/// A subset of a board's points, kept both as a sorted index list and a mask.
///
/// Sub-boards never get their own incidence structure: a connecting line of
/// the subset is a line of the full board restricted to the subset, so it
/// keeps the full board's key and index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subset {
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl Subset {
    pub fn full(n: usize) -> Self {
        Subset {
            members: (0..n).collect(),
            mask: vec![true; n],
        }
    }

    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut mask = vec![false; n];
        for &i in indices {
            if i >= n {
                return Err(Error::Precondition(format!(
                    "point index {i} out of range for {n} points"
                )));
            }
            mask[i] = true;
        }
        let members = (0..n).filter(|&i| mask[i]).collect();
        Ok(Subset { members, mask })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask.get(i).copied().unwrap_or(false)
    }

    /// The subset with `removed` taken out.
    pub fn without(&self, removed: &[usize]) -> Subset {
        let mut mask = self.mask.clone();
        for &r in removed {
            if let Some(m) = mask.get_mut(r) {
                *m = false;
            }
        }
        let members = self.members.iter().copied().filter(|&i| mask[i]).collect();
        Subset { members, mask }
    }
}

impl IncidenceStructure {
    /// Number of points of `line` inside `subset`.
    pub fn active_count(&self, line: usize, subset: &Subset) -> usize {
        self.line(line)
            .points
            .iter()
            .filter(|&&p| subset.contains(p))
            .count()
    }

    pub fn active_points(&self, line: usize, subset: &Subset) -> Vec<usize> {
        self.line(line)
            .points
            .iter()
            .copied()
            .filter(|&p| subset.contains(p))
            .collect()
    }

    /// Connecting lines of the sub-board (at least two points in `subset`),
    /// in key order, with their active points.
    pub fn active_lines(&self, subset: &Subset) -> Vec<(usize, Vec<usize>)> {
        if subset.len() == self.n() {
            return self
                .lines()
                .iter()
                .enumerate()
                .map(|(i, l)| (i, l.points.clone()))
                .collect();
        }
        let mut seen = vec![false; self.lines().len()];
        let mut out = Vec::new();
        let members = subset.members();
        for (k, &p) in members.iter().enumerate() {
            for &q in &members[k + 1..] {
                let li = self.line_between(p, q);
                if !seen[li] {
                    seen[li] = true;
                    out.push((li, self.active_points(li, subset)));
                }
            }
        }
        out.sort_unstable_by_key(|(li, _)| *li);
        out
    }

    /// Whether the points of `subset` lie on one line (true for at most two points).
    pub fn subset_collinear(&self, subset: &Subset) -> bool {
        match subset.members() {
            [] | [_] | [_, _] => true,
            [p, q, ..] => self.active_count(self.line_between(*p, *q), subset) == subset.len(),
        }
    }

    /// The line of `subset` with the most active points, smallest key on ties.
    pub fn active_max_line(&self, subset: &Subset) -> Option<(usize, Vec<usize>)> {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for (li, pts) in self.active_lines(subset) {
            if best.as_ref().is_none_or(|(_, b)| pts.len() > b.len()) {
                best = Some((li, pts));
            }
        }
        best
    }
}
