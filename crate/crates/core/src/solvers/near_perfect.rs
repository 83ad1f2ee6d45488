//! Component peeling: repeatedly split off the largest component of the
//! ordinary line graph while it is large, then fall back to a solver with an
//! unconditional guarantee on whatever is left.

use super::claim::{heavy_active_lines, run_claim_or_third, sweep_anchor, sweep_collinear};
use super::tree::run_tree_switch;
use super::{ensure_bound, require_noncollinear, Engine, Rule, SolverKind, SolverOutcome};
use crate::board::{BoundKind, Configuration};
use crate::error::{Error, Result};
use crate::geometry::{Component, OrdinaryLineGraph, Subset};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearPerfectParams {
    /// Minimum component size for a peel.
    pub k: usize,
    pub epsilon: f64,
    /// Additive constant of the reported bound `(1 - epsilon) n - n_epsilon`.
    pub n_epsilon: usize,
}

impl NearPerfectParams {
    /// `k = ceil(2 / epsilon)` and `n_epsilon = 2k + 2`.
    pub fn from_epsilon(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Precondition(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        let k = (2.0 / epsilon).ceil() as usize;
        let params = NearPerfectParams {
            k,
            epsilon,
            n_epsilon: 2 * k + 2,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::Precondition(format!("k must be at least 2, got {}", self.k)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Precondition(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if self.n_epsilon < 2 * self.k + 2 {
            return Err(Error::Precondition(format!(
                "n_epsilon must be at least {}, got {}",
                2 * self.k + 2,
                self.n_epsilon
            )));
        }
        Ok(())
    }

    /// `(1 - epsilon) n - n_epsilon`.
    pub fn reported_bound(&self, n: usize) -> f64 {
        (1.0 - self.epsilon) * n as f64 - self.n_epsilon as f64
    }

    /// Components smaller than this are not peeled; at least 3 so a peel
    /// never drops below a third of its points.
    fn peel_threshold(&self) -> usize {
        self.k.max(3)
    }
}

impl Default for NearPerfectParams {
    fn default() -> Self {
        NearPerfectParams::from_epsilon(0.5).expect("default epsilon is valid")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PeelReport {
    /// Components removed by tree switches.
    pub peels: usize,
    /// Solver used on the unpeeled remainder, if any (`Cubic` or `Third`).
    pub fallback: Option<SolverKind>,
    /// Levels left with two negatives because no root gave a short fix-up line.
    pub fixups_failed: usize,
    /// Peeling consumed every point without a fallback.
    pub exhausted: bool,
}

struct Level {
    active: Subset,
    graph: OrdinaryLineGraph,
    comp: Component,
}

enum Tail {
    Tree,
    Sweep { rest: Subset, z: usize },
    Fallback(Subset),
}

pub(crate) fn run_near_perfect(
    e: &mut Engine<'_>,
    active: &Subset,
    params: &NearPerfectParams,
) -> Result<PeelReport> {
    require_noncollinear(e.inc, active)?;
    let threshold = params.peel_threshold();
    let mut stack: Vec<Level> = Vec::new();
    let mut level = active.clone();
    let tail = loop {
        let graph = OrdinaryLineGraph::of_subset(e.inc, &level);
        let h = graph
            .largest_component()
            .cloned()
            .ok_or_else(|| Error::Internal("noncollinear set without an ordinary line".into()))?;
        if h.len() < threshold && h.len() < level.len() {
            break Tail::Fallback(level);
        }
        let heavy = heavy_active_lines(e.inc, &level);
        let u = h
            .vertices
            .iter()
            .copied()
            .find(|v| heavy.iter().all(|l| l.binary_search(v).is_err()))
            .unwrap_or(h.vertices[0]);
        let comp = graph.rooted_at(u)?;
        let rest = level.without(&h.vertices);
        let done = rest.is_empty();
        let collinear = !done && e.inc.subset_collinear(&rest);
        stack.push(Level {
            active: level,
            graph,
            comp,
        });
        if done {
            break Tail::Tree;
        }
        if collinear {
            let z = sweep_anchor(e.inc, &rest, &stack.last().expect("just pushed").comp)
                .ok_or_else(|| Error::Internal("no sweep anchor in component".into()))?;
            break Tail::Sweep { rest, z };
        }
        level = rest;
    };

    let mut report = PeelReport {
        peels: stack.len(),
        exhausted: !matches!(tail, Tail::Fallback(_)),
        ..PeelReport::default()
    };
    match tail {
        Tail::Fallback(level) => {
            let claim = run_claim_or_third(e, &level)?;
            report.fallback = Some(if claim {
                SolverKind::Cubic
            } else {
                SolverKind::Third
            });
        }
        Tail::Sweep { rest, z } => e.step(Rule::CollinearSweep, rest.members().to_vec(), |e| {
            sweep_collinear(e, &rest, z);
            Ok(())
        })?,
        Tail::Tree => {}
    }
    while let Some(lv) = stack.pop() {
        if !run_level(e, &lv)? {
            report.fixups_failed += 1;
        }
    }
    Ok(report)
}

/// Peels one level. When the rest holds a single negative `v` and the
/// component will keep one, roots the tree at the vertex whose line to `v`
/// is shortest (at most three points) and switches that line.
/// Returns false if such a fix-up was needed but impossible.
fn run_level(e: &mut Engine<'_>, lv: &Level) -> Result<bool> {
    let vertices = lv.comp.vertices.clone();
    e.step(Rule::Peel, vertices, |e| {
        let in_h = |p: &usize| lv.comp.contains(*p);
        let neg = e.negatives(&lv.active);
        let odd_h = neg.iter().filter(|p| in_h(p)).count() % 2 == 1;
        let rest_neg: Vec<usize> = neg.iter().copied().filter(|p| !in_h(p)).collect();
        if !(odd_h && rest_neg.len() == 1) {
            run_tree_switch(e, &lv.active, &lv.comp)?;
            return Ok(true);
        }
        let v = rest_neg[0];
        let best = lv
            .comp
            .vertices
            .iter()
            .map(|&r| (e.inc.active_count(e.inc.line_between(r, v), &lv.active), r))
            .filter(|&(count, _)| count <= 3)
            .min();
        match best {
            Some((_, r)) => {
                let comp = if r == lv.comp.root {
                    lv.comp.clone()
                } else {
                    lv.graph.rooted_at(r)?
                };
                run_tree_switch(e, &lv.active, &comp)?;
                e.flip_pair(r, v);
                Ok(true)
            }
            None => {
                run_tree_switch(e, &lv.active, &lv.comp)?;
                Ok(false)
            }
        }
    })
}

/// Peels large components, falling back to the claim solver or the `n/3`
/// induction on the remainder. Always reaches `n/3`; reaches `n - 2` when
/// peeling exhausts the board with every fix-up available.
pub fn solve_near_perfect(config: &Configuration, params: &NearPerfectParams) -> Result<SolverOutcome> {
    params.validate()?;
    let all = Subset::full(config.n());
    require_noncollinear(config.incidence(), &all)?;
    let mut e = Engine::new(config);
    let report = if config.weights().iter().all(|&w| w > 0) {
        e.step(Rule::AllPositive, all.members().to_vec(), |_| Ok(()))?;
        PeelReport {
            exhausted: true,
            ..PeelReport::default()
        }
    } else {
        run_near_perfect(&mut e, &all, params)?
    };
    let n = config.n();
    let reached = e.sum(all.members());
    let kind = if BoundKind::NearPerfect.admits(n, reached) {
        BoundKind::NearPerfect
    } else {
        BoundKind::Third
    };
    let out = e.finish(config, kind, Some(report));
    ensure_bound(&out, n, kind)?;
    Ok(out)
}
