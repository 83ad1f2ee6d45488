//! Exact optimum by linear algebra over GF(2).
//!
//! A weight vector is identified with the 0/1 vector of its `-1` positions.
//! Switching adds a line's indicator vector, so the states reachable from
//! `w0` form the coset `off(w0) + C` of the code `C` spanned by the lines,
//! and the best discrepancy is `n - 2 * dist(off(w0), C)`.
//!
//! Distances are found either by sweeping all `2^d` codewords in Gray-code
//! order or by breadth-first search over the `2^(n-d)` cosets, whichever is
//! smaller. Vectors are packed into `u64`, so boards are limited to 64 points.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::geometry::IncidenceStructure;

/// Default limit on `min(d, n - d)`, the base-2 log of the enumeration size.
pub const DEFAULT_CAP: usize = 24;

/// Largest board `reachable_bfs` accepts.
pub const BFS_MAX_POINTS: usize = 16;

/// The binary code spanned by the line indicator vectors of a board.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchCode {
    pub n: usize,
    /// Rows in reduced row-echelon form; bit `j` is point `j`.
    pub basis: Vec<u64>,
    /// `pivots[i]` is the leading column of `basis[i]`, increasing.
    pub pivots: Vec<usize>,
    pub rank: usize,
    /// `combos[i]` lists the lines whose indicators sum to `basis[i]`.
    combos: Vec<LineSet>,
    line_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct LineSet(Vec<u64>);

impl LineSet {
    fn single(len: usize, i: usize) -> Self {
        let mut words = vec![0u64; len.div_ceil(64).max(1)];
        words[i / 64] |= 1 << (i % 64);
        LineSet(words)
    }

    fn empty(len: usize) -> Self {
        LineSet(vec![0u64; len.div_ceil(64).max(1)])
    }

    fn xor(&mut self, other: &LineSet) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    fn indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.0.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                out.push(w * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }
}

/// Packs the `-1` positions of a weight vector.
pub fn off_vector(weights: &[i8]) -> u64 {
    weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w < 0)
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

fn check_size(n: usize) -> Result<()> {
    if n > 64 {
        return Err(Error::CapExceeded { n, rank: 0, cap: 64 });
    }
    Ok(())
}

/// Row-reduces the line indicator matrix of `inc`.
pub fn switch_code(inc: &IncidenceStructure) -> Result<SwitchCode> {
    let n = inc.n();
    check_size(n)?;
    let m = inc.lines().len();
    let mut rows: Vec<(u64, LineSet)> = inc
        .lines()
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let v = l.points.iter().fold(0u64, |acc, &p| acc | 1 << p);
            (v, LineSet::single(m, i))
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(found) = (rank..rows.len()).find(|&r| rows[r].0 >> col & 1 == 1) else {
            continue;
        };
        rows.swap(rank, found);
        let (pivot_vec, pivot_combo) = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.0 >> col & 1 == 1 {
                row.0 ^= pivot_vec;
                row.1.xor(&pivot_combo);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    let (basis, combos) = rows.into_iter().unzip();
    Ok(SwitchCode {
        n,
        basis,
        pivots,
        rank,
        combos,
        line_count: m,
    })
}

impl SwitchCode {
    /// Codeword combining the basis rows selected by the bits of `rows`.
    fn codeword(&self, rows: u64) -> u64 {
        (0..self.rank)
            .filter(|i| rows >> i & 1 == 1)
            .fold(0, |acc, i| acc ^ self.basis[i])
    }

    /// Basis rows making up the codeword `c`, read off its pivot bits.
    fn rows_of(&self, c: u64) -> u64 {
        self.pivots
            .iter()
            .enumerate()
            .filter(|(_, &p)| c >> p & 1 == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// Lines whose switches add up to the codeword `c`, sorted.
    pub fn witness_lines(&self, c: u64) -> Vec<usize> {
        let rows = self.rows_of(c);
        let mut set = LineSet::empty(self.line_count);
        for i in (0..self.rank).filter(|i| rows >> i & 1 == 1) {
            set.xor(&self.combos[i]);
        }
        set.indices()
    }

    pub fn contains(&self, v: u64) -> bool {
        self.codeword(self.rows_of(v)) == v
    }

    /// Enumeration size exponent `min(d, n - d)`.
    pub fn work_exponent(&self) -> usize {
        self.rank.min(self.n - self.rank)
    }

    fn check_cap(&self, cap: usize) -> Result<()> {
        if self.work_exponent() > cap {
            return Err(Error::CapExceeded {
                n: self.n,
                rank: self.rank,
                cap,
            });
        }
        Ok(())
    }

    fn non_pivots(&self) -> Vec<usize> {
        (0..self.n).filter(|c| self.pivots.binary_search(c).is_err()).collect()
    }

    /// Index of the coset of `v`: its reduction, compressed to non-pivot bits.
    fn syndrome(&self, v: u64, non_pivots: &[usize]) -> usize {
        let mut r = v;
        for (i, &p) in self.pivots.iter().enumerate() {
            if r >> p & 1 == 1 {
                r ^= self.basis[i];
            }
        }
        non_pivots
            .iter()
            .enumerate()
            .filter(|(_, &c)| r >> c & 1 == 1)
            .fold(0, |acc, (k, _)| acc | 1 << k)
    }

    /// Breadth-first search over all cosets from the code itself. Returns
    /// distances and, per coset, the unit vector used to reach it.
    fn coset_bfs(&self) -> (Vec<u8>, Vec<u8>, Vec<usize>) {
        let non_pivots = self.non_pivots();
        let units: Vec<usize> = (0..self.n).map(|j| self.syndrome(1 << j, &non_pivots)).collect();
        let size = 1usize << non_pivots.len();
        let mut dist = vec![u8::MAX; size];
        let mut via = vec![u8::MAX; size];
        dist[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (j, &u) in units.iter().enumerate() {
                let y = x ^ u;
                if dist[y] == u8::MAX {
                    dist[y] = dist[x] + 1;
                    via[y] = j as u8;
                    queue.push_back(y);
                }
            }
        }
        (dist, via, units)
    }

    /// Minimum-weight vector of the coset with index `s`.
    fn leader(via: &[u8], units: &[usize], mut s: usize) -> u64 {
        let mut e = 0u64;
        while s != 0 {
            let j = via[s] as usize;
            e |= 1 << j;
            s ^= units[j];
        }
        e
    }
}

/// Exact optimum for one starting configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub value: i64,
    /// Line indices whose switches reach `value` from the starting weights.
    pub witness: Vec<usize>,
}

/// `F(P, w0)`: the best discrepancy reachable from `w0`.
pub fn exact_f(code: &SwitchCode, w0: &[i8], cap: usize) -> Result<OracleResult> {
    if w0.len() != code.n {
        return Err(Error::LengthMismatch {
            points: code.n,
            weights: w0.len(),
        });
    }
    code.check_cap(cap)?;
    let s = off_vector(w0);
    let n = code.n as i64;
    let best_codeword = if code.rank <= code.n - code.rank {
        // Gray-code sweep: consecutive codewords differ by one basis row
        let mut c = 0u64;
        let mut best = (s.count_ones(), 0u64);
        for g in 1u64..1 << code.rank {
            c ^= code.basis[g.trailing_zeros() as usize];
            let weight = (s ^ c).count_ones();
            if weight < best.0 {
                best = (weight, c);
            }
        }
        best.1
    } else {
        let (_, via, units) = code.coset_bfs();
        let e = SwitchCode::leader(&via, &units, code.syndrome(s, &code.non_pivots()));
        s ^ e
    };
    Ok(OracleResult {
        value: n - 2 * (s ^ best_codeword).count_ones() as i64,
        witness: code.witness_lines(best_codeword),
    })
}

/// `F(P)` over all starting weights, with one starting vector attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoardOptimum {
    pub value: i64,
    pub covering_radius: usize,
    pub worst_weights: Vec<i8>,
}

/// `F(P) = n - 2 * covering radius`, by search over all `2^(n-d)` cosets.
pub fn exact_f_board(code: &SwitchCode, cap: usize) -> Result<BoardOptimum> {
    if code.n - code.rank > cap {
        return Err(Error::CapExceeded {
            n: code.n,
            rank: code.rank,
            cap,
        });
    }
    let (dist, via, units) = code.coset_bfs();
    let (worst, &radius) = dist
        .iter()
        .enumerate()
        .max_by_key(|&(i, d)| (*d, std::cmp::Reverse(i)))
        .expect("at least one coset");
    let leader = SwitchCode::leader(&via, &units, worst);
    let worst_weights = (0..code.n)
        .map(|j| if leader >> j & 1 == 1 { -1 } else { 1 })
        .collect();
    Ok(BoardOptimum {
        value: code.n as i64 - 2 * radius as i64,
        covering_radius: radius as usize,
        worst_weights,
    })
}

/// Closure of a starting vector under single-line switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reachable {
    pub states: usize,
    pub max_discrepancy: i64,
}

/// Independent check of [`exact_f`] by exploring every reachable state.
pub fn reachable_bfs(inc: &IncidenceStructure, w0: &[i8]) -> Result<Reachable> {
    let n = inc.n();
    if n > BFS_MAX_POINTS {
        return Err(Error::CapExceeded {
            n,
            rank: 0,
            cap: BFS_MAX_POINTS,
        });
    }
    if w0.len() != n {
        return Err(Error::LengthMismatch {
            points: n,
            weights: w0.len(),
        });
    }
    let lines: Vec<u64> = inc
        .lines()
        .iter()
        .map(|l| l.points.iter().fold(0u64, |acc, &p| acc | 1 << p))
        .collect();
    let start = off_vector(w0);
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    let mut fewest = start.count_ones();
    while let Some(x) = queue.pop_front() {
        fewest = fewest.min(x.count_ones());
        for &l in &lines {
            if seen.insert(x ^ l) {
                queue.push_back(x ^ l);
            }
        }
    }
    Ok(Reachable {
        states: seen.len(),
        max_discrepancy: n as i64 - 2 * fewest as i64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Configuration;
    use crate::geometry::Point;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn inc(coords: &[(i64, i64)]) -> IncidenceStructure {
        IncidenceStructure::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    fn near_pencil(n: i64) -> IncidenceStructure {
        let mut c: Vec<(i64, i64)> = (0..n - 1).map(|x| (x, 0)).collect();
        c.push((0, 1));
        inc(&c)
    }

    const TRIANGLE: [(i64, i64); 3] = [(0, 0), (1, 0), (0, 1)];

    #[test]
    fn ranks() {
        let t = switch_code(&inc(&TRIANGLE)).unwrap();
        assert_eq!(t.rank, 2);
        for v in 0u64..8 {
            assert_eq!(t.contains(v), v.count_ones() % 2 == 0);
        }
        assert_eq!(switch_code(&near_pencil(4)).unwrap().rank, 4);
        let np5 = switch_code(&near_pencil(5)).unwrap();
        assert_eq!(np5.rank, 4);
        assert!((0u64..32).all(|v| np5.contains(v) == (v.count_ones() % 2 == 0)));
    }

    #[test]
    fn rref_shape() {
        let code = switch_code(&near_pencil(7)).unwrap();
        for (i, (&row, &p)) in code.basis.iter().zip(&code.pivots).enumerate() {
            assert_eq!(row.trailing_zeros() as usize, p);
            for (j, &other) in code.basis.iter().enumerate() {
                assert_eq!(other >> p & 1 == 1, i == j);
            }
        }
        for l in near_pencil(7).lines() {
            assert!(code.contains(l.points.iter().fold(0, |a, &p| a | 1 << p)));
        }
    }

    #[test]
    fn exact_values() {
        let t = switch_code(&inc(&TRIANGLE)).unwrap();
        assert_eq!(exact_f(&t, &[-1, 1, 1], DEFAULT_CAP).unwrap().value, 1);
        let np4 = switch_code(&near_pencil(4)).unwrap();
        for m in 0u32..16 {
            let w: Vec<i8> = (0..4).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect();
            assert_eq!(exact_f(&np4, &w, DEFAULT_CAP).unwrap().value, 4);
        }
        let np5 = switch_code(&near_pencil(5)).unwrap();
        assert_eq!(exact_f(&np5, &[1, 1, -1, 1, 1], DEFAULT_CAP).unwrap().value, 3);
    }

    #[test]
    fn board_values() {
        let b = exact_f_board(&switch_code(&near_pencil(5)).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!((b.value, b.covering_radius), (3, 1));
        let b = exact_f_board(&switch_code(&near_pencil(4)).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!((b.value, b.covering_radius), (4, 0));
        let t = switch_code(&inc(&TRIANGLE)).unwrap();
        let b = exact_f_board(&t, DEFAULT_CAP).unwrap();
        assert_eq!(b.value, 1);
        assert_eq!(exact_f(&t, &b.worst_weights, DEFAULT_CAP).unwrap().value, 1);
    }

    #[test]
    fn reachable_counts() {
        let r = reachable_bfs(&inc(&TRIANGLE), &[1, 1, -1]).unwrap();
        assert_eq!((r.states, r.max_discrepancy), (4, 1));
        assert_eq!(reachable_bfs(&near_pencil(4), &[-1; 4]).unwrap().states, 16);
    }

    #[test]
    fn cap_exceeded() {
        let t = switch_code(&inc(&TRIANGLE)).unwrap();
        assert!(matches!(
            exact_f(&t, &[1, 1, 1], 0),
            Err(Error::CapExceeded { n: 3, rank: 2, cap: 0 })
        ));
        assert!(matches!(exact_f_board(&t, 0), Err(Error::CapExceeded { .. })));
        let big: Vec<(i64, i64)> = (0..17).map(|x| (x, x * x)).collect();
        assert!(matches!(
            reachable_bfs(&inc(&big), &[1; 17]),
            Err(Error::CapExceeded { cap: 16, .. })
        ));
    }

    fn arb_board() -> impl Strategy<Value = (Vec<(i64, i64)>, u64)> {
        (
            proptest::collection::btree_set((-4i64..4, -4i64..4), 3..11),
            any::<u64>(),
        )
            .prop_map(|(s, m)| (s.into_iter().collect(), m))
    }

    proptest! {
        #[test]
        fn oracle_agrees_with_bfs((coords, mask) in arb_board()) {
            let i = inc(&coords);
            let n = coords.len();
            let w: Vec<i8> = (0..n).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
            let code = switch_code(&i).unwrap();
            let exact = exact_f(&code, &w, DEFAULT_CAP).unwrap();
            let bfs = reachable_bfs(&i, &w).unwrap();
            prop_assert_eq!(bfs.states, 1usize << code.rank);
            prop_assert_eq!(exact.value, bfs.max_discrepancy);
            prop_assert_eq!((exact.value - n as i64).rem_euclid(2), 0);

            let mut c = Configuration::from_incidence(Arc::new(i.clone()), w.clone()).unwrap();
            for &li in &exact.witness {
                c.switch_index(li);
            }
            prop_assert_eq!(c.discrepancy(), exact.value);

            let board = exact_f_board(&code, DEFAULT_CAP).unwrap();
            prop_assert!(board.value <= exact.value);
            prop_assert_eq!(exact_f(&code, &board.worst_weights, DEFAULT_CAP).unwrap().value, board.value);
        }
    }
}
