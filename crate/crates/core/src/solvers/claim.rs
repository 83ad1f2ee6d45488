use super::third::run_third;
use super::tree::run_tree_switch;
use super::{ensure_bound, require_noncollinear, Engine, Rule, SolverOutcome};
use crate::board::{BoundKind, Configuration};
use crate::error::{Error, Result};
use crate::geometry::{Component, IncidenceStructure, OrdinaryLineGraph, Subset};

/// Lines with more than three points of `level`, as active point lists.
pub(crate) fn heavy_active_lines(inc: &IncidenceStructure, level: &Subset) -> Vec<Vec<usize>> {
    inc.active_lines(level)
        .into_iter()
        .filter(|(_, pts)| pts.len() > 3)
        .map(|(_, pts)| pts)
        .collect()
}

/// A vertex of `h` off the line spanned by the collinear set `rest`.
pub(crate) fn sweep_anchor(inc: &IncidenceStructure, rest: &Subset, h: &Component) -> Option<usize> {
    match rest.members() {
        [] => None,
        [_] => h.vertices.first().copied(),
        [p, q, ..] => {
            let line = inc.line(inc.line_between(*p, *q));
            h.vertices.iter().copied().find(|&z| !line.contains(z))
        }
    }
}

/// Makes every point of the collinear set `rest` positive with lines through `z`.
/// Each such line meets `rest` in exactly one point.
pub(crate) fn sweep_collinear(e: &mut Engine<'_>, rest: &Subset, z: usize) {
    for &x in rest.members() {
        if e.weights[x] < 0 {
            e.flip_pair(z, x);
        }
    }
}

/// One peeled component: its tree is rooted at `u`.
pub(crate) struct PeelLevel {
    pub(crate) active: Subset,
    pub(crate) comp: Component,
    pub(crate) u: usize,
}

enum Tail {
    Tree(PeelLevel),
    Sweep { level: PeelLevel, rest: Subset, z: usize },
}

/// Solves `active` to at most one negative point, assuming no two lines
/// carry more than three of its points.
pub(crate) fn run_claim(e: &mut Engine<'_>, active: &Subset) -> Result<()> {
    require_noncollinear(e.inc, active)?;
    let mut stack = Vec::new();
    let mut level = active.clone();
    let tail = loop {
        let g = OrdinaryLineGraph::of_subset(e.inc, &level);
        let h = g
            .largest_component()
            .filter(|h| h.len() >= 2)
            .ok_or_else(|| Error::Internal("noncollinear set without an ordinary line".into()))?;
        let heavy = heavy_active_lines(e.inc, &level);
        if heavy.len() > 1 {
            return Err(Error::Precondition(format!(
                "{} lines carry more than three points",
                heavy.len()
            )));
        }
        let u = h
            .vertices
            .iter()
            .copied()
            .find(|v| heavy.first().is_none_or(|l| l.binary_search(v).is_err()))
            .ok_or_else(|| Error::Internal("component lies on the heavy line".into()))?;
        let rest = level.without(&h.vertices);
        let peel = PeelLevel {
            active: level.clone(),
            comp: g.rooted_at(u)?,
            u,
        };
        if rest.is_empty() {
            break Tail::Tree(peel);
        }
        if !e.inc.subset_collinear(&rest) {
            stack.push(peel);
            level = rest;
            continue;
        }
        let z = sweep_anchor(e.inc, &rest, &peel.comp)
            .ok_or_else(|| Error::Internal("no sweep anchor in component".into()))?;
        break Tail::Sweep { level: peel, rest, z };
    };

    match tail {
        Tail::Tree(peel) => run_peel(e, &peel)?,
        Tail::Sweep { level, rest, z } => {
            e.step(Rule::CollinearSweep, rest.members().to_vec(), |e| {
                sweep_collinear(e, &rest, z);
                Ok(())
            })?;
            run_peel(e, &level)?;
        }
    }
    while let Some(peel) = stack.pop() {
        run_peel(e, &peel)?;
    }
    Ok(())
}

/// Tree switch on the component, then the `uv` fix-up when two negatives remain.
fn run_peel(e: &mut Engine<'_>, peel: &PeelLevel) -> Result<()> {
    e.step(Rule::Peel, peel.comp.vertices.clone(), |e| {
        run_tree_switch(e, &peel.active, &peel.comp)?;
        let neg = e.negatives(&peel.active);
        if let [a, b] = neg[..] {
            if a != peel.u && b != peel.u {
                return Err(Error::Internal(format!(
                    "negatives {a}, {b} avoid the root {}",
                    peel.u
                )));
            }
            let li = e.inc.line_between(a, b);
            let count = e.inc.active_count(li, &peel.active);
            if count > 3 {
                return Err(Error::Internal(format!(
                    "fix-up line {} carries {count} points",
                    e.inc.line(li).key
                )));
            }
            e.flip(li);
        } else if neg.len() > 2 {
            return Err(Error::Internal(format!(
                "{} negatives after peeling {} points",
                neg.len(),
                peel.comp.len()
            )));
        }
        Ok(())
    })
}

/// Reaches `n - 2` on a noncollinear board where at most one line carries
/// more than three points.
pub fn solve_claim_cubic(config: &Configuration) -> Result<SolverOutcome> {
    let inc = config.incidence();
    let all = Subset::full(config.n());
    require_noncollinear(inc, &all)?;
    let heavy = inc.heavy_lines(3);
    if heavy.len() > 1 {
        return Err(Error::Precondition(format!(
            "{} lines carry more than three points; at most one allowed",
            heavy.len()
        )));
    }
    let mut e = Engine::new(config);
    if config.weights().iter().all(|&w| w > 0) {
        e.step(Rule::AllPositive, all.members().to_vec(), |_| Ok(()))?;
    } else {
        run_claim(&mut e, &all)?;
    }
    let out = e.finish(config, BoundKind::NMinus2, None);
    ensure_bound(&out, config.n(), BoundKind::NMinus2)?;
    Ok(out)
}

/// Runs the claim solver when `level` has at most one heavy line, the `n/3`
/// induction otherwise. Returns whether the claim solver ran.
pub(crate) fn run_claim_or_third(e: &mut Engine<'_>, level: &Subset) -> Result<bool> {
    if heavy_active_lines(e.inc, level).len() <= 1 {
        run_claim(e, level)?;
        Ok(true)
    } else {
        run_third(e, level)?;
        Ok(false)
    }
}
