//! The `n/3` induction: peel off three points at a time until at most six
//! remain (or a line through all but one point is left), solve that base,
//! then fix each removed triple with at most two switches that avoid the
//! points beneath it.

use super::procedure::run_procedure_n;
use super::{ensure_bound, require_noncollinear, resolve_subset, Engine, Rule, SolverOutcome};
use crate::board::{BoundKind, Configuration};
use crate::error::{Error, Result};
use crate::geometry::{IncidenceStructure, Subset};

/// How a removed triple is fixed after the rest has been solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionCase {
    /// The three points span a line carrying exactly these three active points.
    CollinearTriple,
    /// `line(p, q)` and `line(p, r)` are ordinary lines sharing `p`.
    OrdinaryPair,
}

#[derive(Debug, Clone)]
struct Reduction {
    case: ReductionCase,
    rule: Rule,
    /// `[p, q, r]`; for an ordinary pair `p` is the shared point.
    triple: [usize; 3],
}

enum Plan {
    Reduce(Reduction),
    Basis,
    Pencil { line: usize, apex: usize },
}

/// Plans and executes the induction on `active`.
pub(crate) fn run_third(e: &mut Engine<'_>, active: &Subset) -> Result<()> {
    require_noncollinear(e.inc, active)?;
    let mut stack: Vec<(Reduction, Subset)> = Vec::new();
    let mut level = active.clone();
    let base = loop {
        match plan_level(e.inc, &level)? {
            Plan::Reduce(red) => {
                let rest = level.without(&red.triple);
                stack.push((red, level));
                level = rest;
            }
            other => break other,
        }
    };

    let members = level.members().to_vec();
    match base {
        Plan::Basis => e.step(Rule::Basis, members, |e| run_basis(e, &level))?,
        Plan::Pencil { line, apex } => e.step(Rule::PencilSweep, members, |e| {
            run_pencil(e, &level, line, apex);
            Ok(())
        })?,
        Plan::Reduce(_) => unreachable!("loop only breaks on a base plan"),
    }

    while let Some((red, level)) = stack.pop() {
        let mut points = red.triple.to_vec();
        points.sort_unstable();
        e.step(red.rule, points, |e| run_reduction(e, &level, &red))?;
    }
    Ok(())
}

fn plan_level(inc: &IncidenceStructure, level: &Subset) -> Result<Plan> {
    require_noncollinear(inc, level)?;
    let m = level.len();
    let (max_line, max_pts) = inc
        .active_max_line(level)
        .ok_or_else(|| Error::Internal("sub-board without lines".into()))?;
    let k = max_pts.len();

    if m <= 6 {
        if m == 6 && k == 4 {
            let red = find_pair_off_line(inc, level, &max_pts, Rule::Basis).ok_or_else(|| {
                Error::Internal("six points with a 4-point line but no ordinary pair".into())
            })?;
            return Ok(Plan::Reduce(red));
        }
        if m == 6 && k == 3 {
            if let Some(red) = find_triple_line(inc, level, Rule::Basis) {
                return Ok(Plan::Reduce(red));
            }
        }
        return Ok(Plan::Basis);
    }

    if k == m - 1 {
        let apex = *level
            .members()
            .iter()
            .find(|p| max_pts.binary_search(p).is_err())
            .expect("noncollinear level has a point off its longest line");
        return Ok(Plan::Pencil {
            line: max_line,
            apex,
        });
    }
    if k + 3 >= m {
        return find_pair_off_line(inc, level, &max_pts, Rule::LongLine)
            .map(Plan::Reduce)
            .ok_or_else(|| Error::Internal("long line without an ordinary pair".into()));
    }
    if let Some(red) = find_triple_line(inc, level, Rule::TripleLine) {
        return Ok(Plan::Reduce(red));
    }
    find_shared_ordinary_pair(inc, level)
        .map(Plan::Reduce)
        .ok_or_else(|| Error::Internal(format!("no reduction found on {m} points")))
}

/// `p` off the line, `q < r` on it with `pq`, `pr` ordinary and the rest noncollinear.
fn find_pair_off_line(
    inc: &IncidenceStructure,
    level: &Subset,
    on_line: &[usize],
    rule: Rule,
) -> Option<Reduction> {
    for &p in level.members() {
        if on_line.binary_search(&p).is_ok() {
            continue;
        }
        let partners: Vec<usize> = on_line
            .iter()
            .copied()
            .filter(|&x| inc.active_count(inc.line_between(p, x), level) == 2)
            .collect();
        for (i, &q) in partners.iter().enumerate() {
            for &r in &partners[i + 1..] {
                if !inc.subset_collinear(&level.without(&[p, q, r])) {
                    return Some(Reduction {
                        case: ReductionCase::OrdinaryPair,
                        rule,
                        triple: [p, q, r],
                    });
                }
            }
        }
    }
    None
}

/// The smallest-key line with exactly three active points whose removal
/// leaves a noncollinear set.
fn find_triple_line(inc: &IncidenceStructure, level: &Subset, rule: Rule) -> Option<Reduction> {
    inc.active_lines(level)
        .into_iter()
        .filter(|(_, pts)| pts.len() == 3)
        .find(|(_, pts)| !inc.subset_collinear(&level.without(pts)))
        .map(|(_, pts)| Reduction {
            case: ReductionCase::CollinearTriple,
            rule,
            triple: [pts[0], pts[1], pts[2]],
        })
}

/// Two ordinary lines `pq`, `pr`: smallest `p`, then smallest `q`, `r`.
fn find_shared_ordinary_pair(inc: &IncidenceStructure, level: &Subset) -> Option<Reduction> {
    for &p in level.members() {
        let mut partners: Vec<usize> = inc
            .lines_through(p)
            .iter()
            .filter_map(|&li| match inc.active_points(li, level)[..] {
                [a, b] => Some(if a == p { b } else { a }),
                _ => None,
            })
            .collect();
        partners.sort_unstable();
        for (i, &q) in partners.iter().enumerate() {
            for &r in &partners[i + 1..] {
                if !inc.subset_collinear(&level.without(&[p, q, r])) {
                    return Some(Reduction {
                        case: ReductionCase::OrdinaryPair,
                        rule: Rule::OrdinaryPair,
                        triple: [p, q, r],
                    });
                }
            }
        }
    }
    None
}

/// Case analysis for three to six points. Reaches `m - 2` for `m <= 5`;
/// for `m = 6` the planner has already split off the cases that only reach 2.
fn run_basis(e: &mut Engine<'_>, level: &Subset) -> Result<()> {
    let m = level.len();
    run_procedure_n(e, level);
    let (_, line_pts) = e
        .inc
        .active_max_line(level)
        .ok_or_else(|| Error::Internal("basis without lines".into()))?;

    if m >= 4 && line_pts.len() == m - 1 {
        let apex = *level
            .members()
            .iter()
            .find(|p| line_pts.binary_search(p).is_err())
            .expect("apex exists");
        let negative: Vec<usize> = line_pts
            .iter()
            .copied()
            .filter(|&x| e.weights[x] < 0)
            .collect();
        match negative[..] {
            [] => {}
            [x] => e.flip_pair(apex, x),
            // double switch: the apex flips twice, the pair once each
            [a, b] => {
                e.flip_pair(apex, a);
                e.flip_pair(apex, b);
            }
            _ => {
                return Err(Error::Internal(format!(
                    "{} negatives left on a nonnegative {}-point line",
                    negative.len(),
                    line_pts.len()
                )))
            }
        }
        return Ok(());
    }

    // every remaining line has at most three points, so a negative pair on
    // a nonnegative line is impossible; switch any ordinary negative pair
    loop {
        let neg = e.negatives(level);
        let pair = neg.iter().enumerate().find_map(|(i, &a)| {
            neg[i + 1..]
                .iter()
                .map(|&b| (a, b))
                .find(|&(a, b)| e.inc.active_count(e.inc.line_between(a, b), level) == 2)
        });
        match pair {
            Some((a, b)) => e.flip_pair(a, b),
            None => return Ok(()),
        }
    }
}

fn run_pencil(e: &mut Engine<'_>, level: &Subset, line: usize, apex: usize) {
    for x in e.inc.active_points(line, level) {
        if e.weights[x] < 0 {
            e.flip_pair(apex, x);
        }
    }
}

/// Makes the removed triple sum to at least 1 without touching the rest of `level`.
fn run_reduction(e: &mut Engine<'_>, level: &Subset, red: &Reduction) -> Result<()> {
    let [p, q, r] = red.triple;
    match red.case {
        ReductionCase::CollinearTriple => {
            let li = e.inc.line_between(p, q);
            if e.sum(&red.triple) < 0 {
                e.flip(li);
            }
        }
        ReductionCase::OrdinaryPair => {
            if e.weights[p] + e.weights[q] < 0 {
                e.flip_pair(p, q);
            }
            if e.weights[p] + e.weights[r] < 0 {
                e.flip_pair(p, r);
            }
            if e.weights[p] > 0 && e.weights[q] < 0 && e.weights[r] < 0 {
                e.flip_pair(p, q);
                e.flip_pair(p, r);
            }
        }
    }
    if e.sum(&red.triple) < 1 {
        return Err(Error::Internal(format!(
            "triple {:?} sums to {} on a level of {} points",
            red.triple,
            e.sum(&red.triple),
            level.len()
        )));
    }
    Ok(())
}

/// One reduction fix-up on `config`, assumed to run after the rest of the
/// active set has been solved. Returns the number of switches (at most two).
pub fn reduction_step(
    config: &mut Configuration,
    restrict_to: Option<&[usize]>,
    triple: [usize; 3],
    case: ReductionCase,
) -> Result<usize> {
    let inc = config.incidence().clone();
    let level = resolve_subset(config.n(), restrict_to)?;
    let [p, q, r] = triple;
    if p == q || q == r || p == r || !triple.iter().all(|&x| level.contains(x)) {
        return Err(Error::Precondition(format!(
            "triple {triple:?} must be three distinct active points"
        )));
    }
    match case {
        ReductionCase::CollinearTriple => {
            let li = inc.line_between(p, q);
            if !inc.line(li).contains(r) || inc.active_count(li, &level) != 3 {
                return Err(Error::Precondition(format!(
                    "line {} does not carry exactly the triple",
                    inc.line(li).key
                )));
            }
        }
        ReductionCase::OrdinaryPair => {
            for x in [q, r] {
                let li = inc.line_between(p, x);
                if inc.active_count(li, &level) != 2 {
                    return Err(Error::Precondition(format!(
                        "line {} through {p} and {x} is not ordinary",
                        inc.line(li).key
                    )));
                }
            }
        }
    }
    if inc.subset_collinear(&level.without(&triple)) {
        return Err(Error::Precondition("remaining points are collinear".into()));
    }
    let red = Reduction {
        case,
        rule: Rule::TripleLine,
        triple,
    };
    let mut e = Engine::on(&inc, config.weights().to_vec());
    run_reduction(&mut e, &level, &red)?;
    let switches = e.log.len();
    e.apply_to(config);
    Ok(switches)
}

/// Reaches at least `n/3` on any noncollinear board with `O(n)` switches.
pub fn solve_third(config: &Configuration) -> Result<SolverOutcome> {
    let all = Subset::full(config.n());
    require_noncollinear(config.incidence(), &all)?;
    let mut e = Engine::new(config);
    if config.weights().iter().all(|&w| w > 0) {
        e.step(Rule::AllPositive, all.members().to_vec(), |_| Ok(()))?;
    } else {
        run_third(&mut e, &all)?;
    }
    let out = e.finish(config, BoundKind::Third, None);
    ensure_bound(&out, config.n(), BoundKind::Third)?;
    Ok(out)
}

/// Base of the induction: `3 <= n <= 6`.
pub fn solve_basis(config: &Configuration) -> Result<SolverOutcome> {
    let n = config.n();
    if !(3..=6).contains(&n) {
        return Err(Error::Precondition(format!(
            "basis needs 3 to 6 points, got {n}"
        )));
    }
    let all = Subset::full(n);
    let mut e = Engine::new(config);
    run_third(&mut e, &all)?;
    let kind = if n <= 5 {
        BoundKind::NMinus2
    } else {
        BoundKind::Third
    };
    let out = e.finish(config, kind, None);
    ensure_bound(&out, n, kind)?;
    Ok(out)
}

/// Boards with `n >= 7` and a line through at least `n - 3` points.
pub fn solve_long_line(config: &Configuration) -> Result<SolverOutcome> {
    let n = config.n();
    let inc = config.incidence();
    if n < 7 {
        return Err(Error::Precondition(format!(
            "long-line case needs n >= 7, got {n}"
        )));
    }
    let all = Subset::full(n);
    require_noncollinear(inc, &all)?;
    let longest = inc.max_incidence_line().len();
    if longest + 3 < n {
        return Err(Error::Precondition(format!(
            "longest line has {longest} points, need at least {}",
            n - 3
        )));
    }
    let mut e = Engine::new(config);
    run_third(&mut e, &all)?;
    let kind = if longest == n - 1 {
        BoundKind::NMinus2
    } else {
        BoundKind::Third
    };
    let out = e.finish(config, kind, None);
    ensure_bound(&out, n, kind)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::verify_certificate;
    use crate::geometry::Point;

    fn board(coords: &[(i64, i64)], w: &[i8]) -> Configuration {
        Configuration::new(
            coords.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            w.to_vec(),
        )
        .unwrap()
    }

    fn all_weights(n: usize) -> impl Iterator<Item = Vec<i8>> {
        (0u32..1 << n).map(move |m| (0..n).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect())
    }

    /// Best discrepancy over every subset of lines.
    fn brute_best(c: &Configuration) -> i64 {
        let inc = c.incidence();
        let m = inc.lines().len();
        assert!(m <= 20);
        (0u32..1 << m)
            .map(|mask| {
                let mut w = c.weights().to_vec();
                for li in (0..m).filter(|li| mask >> li & 1 == 1) {
                    for &p in &inc.line(li).points {
                        w[p] = -w[p];
                    }
                }
                w.iter().map(|&x| x as i64).sum()
            })
            .max()
            .unwrap()
    }

    fn check(c: &Configuration, out: &SolverOutcome) {
        assert!(verify_certificate(c.incidence(), &out.certificate).accepted());
        let mut seen: Vec<usize> = out.trace.iter().flat_map(|s| s.points.clone()).collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..c.n()).collect::<Vec<_>>());
    }

    #[test]
    fn triple_line_case() {
        let coords = [(0, 0), (1, 0), (2, 0), (0, 1), (1, 3), (4, 2)];
        let mut c = board(&coords, &[-1, -1, -1, 1, 1, 1]);
        assert_eq!(
            reduction_step(&mut c, None, [0, 1, 2], ReductionCase::CollinearTriple).unwrap(),
            1
        );
        assert_eq!(c.weights(), &[1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn ordinary_pair_cases() {
        // p = (0,1), q = (0,0), r = (1,0) in a set where both lines are ordinary
        let coords = [(0, 1), (0, 0), (1, 0), (5, 7), (9, 2), (3, 11)];
        let mut c = board(&coords, &[1, -1, -1, 1, 1, 1]);
        assert_eq!(
            reduction_step(&mut c, None, [0, 1, 2], ReductionCase::OrdinaryPair).unwrap(),
            2
        );
        assert_eq!(c.sum3(), 3);

        let mut c = board(&coords, &[-1, 1, 1, 1, 1, 1]);
        assert_eq!(
            reduction_step(&mut c, None, [0, 1, 2], ReductionCase::OrdinaryPair).unwrap(),
            0
        );
        assert_eq!(c.sum3(), 1);

        for w in all_weights(3) {
            let mut full = w.clone();
            full.extend([1, 1, 1]);
            let mut c = board(&coords, &full);
            let s = reduction_step(&mut c, None, [0, 1, 2], ReductionCase::OrdinaryPair).unwrap();
            assert!(s <= 2 || c.sum3() == 3);
            assert!(c.sum3() >= 1);
            assert_eq!(&c.weights()[3..], &[1, 1, 1]);
        }
    }

    trait Sum3 {
        fn sum3(&self) -> i64;
    }
    impl Sum3 for Configuration {
        fn sum3(&self) -> i64 {
            self.weights()[..3].iter().map(|&w| w as i64).sum()
        }
    }

    #[test]
    fn reduction_preconditions() {
        let coords = [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 3)];
        let mut c = board(&coords, &[1; 6]);
        assert!(matches!(
            reduction_step(&mut c, None, [0, 1, 2], ReductionCase::CollinearTriple),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            reduction_step(&mut c, None, [0, 1, 2], ReductionCase::OrdinaryPair),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn basis_n4_with_triple_line_all_weights() {
        let coords = [(0, 0), (1, 0), (2, 0), (0, 1)];
        for w in all_weights(4) {
            let c = board(&coords, &w);
            let out = solve_basis(&c).unwrap();
            assert!(out.final_discrepancy >= 2);
            assert!(out.final_discrepancy <= brute_best(&c));
            check(&c, &out);
        }
    }

    #[test]
    fn basis_n5_double_switch() {
        let coords = [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1)];
        let c = board(&coords, &[-1, -1, 1, 1, 1]);
        let out = solve_basis(&c).unwrap();
        assert!(out.final_discrepancy >= 3);
        for w in all_weights(5) {
            let c = board(&coords, &w);
            let out = solve_basis(&c).unwrap();
            assert!(out.final_discrepancy >= 3);
            check(&c, &out);
        }
    }

    #[test]
    fn basis_n6_four_collinear() {
        let coords = [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 2)];
        for w in all_weights(6) {
            let c = board(&coords, &w);
            let out = solve_basis(&c).unwrap();
            assert!(out.final_discrepancy >= 2);
            check(&c, &out);
        }
        let c = board(&coords, &[-1; 6]);
        assert!(solve_basis(&c).unwrap().final_discrepancy <= brute_best(&c));
    }

    #[test]
    fn basis_rejects_size() {
        let c = board(&[(0, 0), (1, 0)], &[1, 1]);
        assert!(matches!(solve_basis(&c), Err(Error::Precondition(_))));
    }

    #[test]
    fn long_line_near_pencil_seven() {
        let coords = [(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (5, 0), (2, 5)];
        for w in all_weights(7) {
            let c = board(&coords, &w);
            let out = solve_long_line(&c).unwrap();
            assert!(out.final_discrepancy >= 5);
            check(&c, &out);
        }
    }

    #[test]
    fn long_line_n_minus_two() {
        let coords = [(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (5, 0), (1, 3), (4, 7)];
        for w in all_weights(8).step_by(7) {
            let c = board(&coords, &w);
            let out = solve_long_line(&c).unwrap();
            assert!(out.final_discrepancy >= 4, "{w:?}");
            assert_eq!(out.trace.last().unwrap().rule, Rule::LongLine);
            check(&c, &out);
        }
        let c = board(&coords, &[1; 8]);
        let out = solve_long_line(&c).unwrap();
        assert_eq!((out.final_discrepancy, out.switch_count()), (8, 0));
    }

    #[test]
    fn third_on_grid() {
        let mut coords = Vec::new();
        for y in 0..3 {
            for x in 0..3 {
                coords.push((x, y));
            }
        }
        let c = board(&coords, &[-1; 9]);
        let out = solve_third(&c).unwrap();
        assert!(out.final_discrepancy >= 3);
        check(&c, &out);
        let c = board(&coords, &[1; 9]);
        let out = solve_third(&c).unwrap();
        assert_eq!((out.final_discrepancy, out.switch_count()), (9, 0));
    }

    #[test]
    fn third_rejects_collinear() {
        let c = board(&[(0, 0), (1, 1), (2, 2)], &[1, 1, 1]);
        assert_eq!(solve_third(&c).unwrap_err(), Error::Collinear);
    }
}
