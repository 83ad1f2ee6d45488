//! Constructive switching strategies.
//!
//! Every solver works on index subsets of the original board. A switch
//! chosen from a sub-board's connecting lines is applied to the whole
//! weight vector, so it may disturb points that were removed earlier; those
//! points are fixed later with switches that avoid the already-solved part.
//! Recursion is unrolled: each solver first plans its reductions top-down
//! from the geometry alone, then executes them bottom-up on the weights.

mod balance;
mod claim;
mod near_perfect;
mod procedure;
mod third;
mod tree;

use std::fmt;
use std::str::FromStr;

use crate::board::{BoundKind, Configuration, SwitchCertificate};
use crate::error::{Error, Result};
use crate::geometry::{IncidenceStructure, Subset};

pub use balance::balance;
pub use claim::solve_claim_cubic;
pub use near_perfect::{solve_near_perfect, NearPerfectParams, PeelReport};
pub use procedure::{procedure_n, solve_general_position};
pub use third::{reduction_step, solve_basis, solve_long_line, solve_third, ReductionCase};
pub use tree::tree_switch;

/// Which lemma or case produced a group of switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Every weight already `+1`.
    AllPositive,
    /// Procedure N on a board in general position.
    GeneralPosition,
    /// Case analysis on at most six points.
    Basis,
    /// All but one point on a line: pair switches through the apex.
    PencilSweep,
    /// Removal of a line with exactly three points.
    TripleLine,
    /// Removal of two ordinary lines sharing a point.
    OrdinaryPair,
    /// Ordinary-pair removal on a board with a line through all but at most three points.
    LongLine,
    /// Spanning-tree switch on a component of the ordinary line graph.
    Peel,
    /// Collinear remainder fixed with lines through an outside point.
    CollinearSweep,
    /// Balancing step on an ordinary pair.
    BalancePair,
    /// Collinear remainder balanced with lines through an outside point.
    BalanceSweep,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::AllPositive => "all-positive",
            Rule::GeneralPosition => "general-position",
            Rule::Basis => "basis",
            Rule::PencilSweep => "pencil-sweep",
            Rule::TripleLine => "triple-line",
            Rule::OrdinaryPair => "ordinary-pair",
            Rule::LongLine => "long-line",
            Rule::Peel => "peel",
            Rule::CollinearSweep => "collinear-sweep",
            Rule::BalancePair => "balance-pair",
            Rule::BalanceSweep => "balance-sweep",
        };
        f.write_str(s)
    }
}

/// One executed step: the rule, the points it settled, and its switch count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: Rule,
    pub points: Vec<usize>,
    pub switches: usize,
}

#[derive(Debug, Clone)]
pub struct SolverOutcome {
    pub certificate: SwitchCertificate,
    pub final_discrepancy: i64,
    pub final_weights: Vec<i8>,
    /// Steps in execution order; their point sets partition the board.
    pub trace: Vec<TraceStep>,
    /// Present for the near-perfect solver only.
    pub peel: Option<PeelReport>,
}

impl SolverOutcome {
    pub fn switch_count(&self) -> usize {
        self.certificate.switches.len()
    }
}

/// Solver selection as accepted on the command line and over HTTP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Third,
    GeneralPosition,
    Cubic,
    NearPerfect,
    Balance,
    Auto,
}

impl SolverKind {
    pub const ALL: [SolverKind; 6] = [
        SolverKind::Third,
        SolverKind::GeneralPosition,
        SolverKind::Cubic,
        SolverKind::NearPerfect,
        SolverKind::Balance,
        SolverKind::Auto,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Third => "third",
            SolverKind::GeneralPosition => "gp",
            SolverKind::Cubic => "cubic",
            SolverKind::NearPerfect => "near-perfect",
            SolverKind::Balance => "balance",
            SolverKind::Auto => "auto",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown solver {s:?}")))
    }
}

/// Runs the selected solver from the configuration's current weights.
pub fn solve(config: &Configuration, kind: SolverKind) -> Result<SolverOutcome> {
    match kind {
        SolverKind::Third => solve_third(config),
        SolverKind::GeneralPosition => solve_general_position(config),
        SolverKind::Cubic => solve_claim_cubic(config),
        SolverKind::NearPerfect | SolverKind::Auto => {
            solve_near_perfect(config, &NearPerfectParams::default())
        }
        SolverKind::Balance => balance(config),
    }
}

/// Mutable working state shared by all solvers.
pub(crate) struct Engine<'a> {
    pub(crate) inc: &'a IncidenceStructure,
    pub(crate) weights: Vec<i8>,
    pub(crate) log: Vec<usize>,
    pub(crate) trace: Vec<TraceStep>,
}

impl<'a> Engine<'a> {
    pub(crate) fn new(config: &'a Configuration) -> Self {
        Engine::on(config.incidence(), config.weights().to_vec())
    }

    pub(crate) fn on(inc: &'a IncidenceStructure, weights: Vec<i8>) -> Self {
        Engine {
            inc,
            weights,
            log: Vec::new(),
            trace: Vec::new(),
        }
    }

    pub(crate) fn flip(&mut self, line: usize) {
        for &p in &self.inc.line(line).points {
            self.weights[p] = -self.weights[p];
        }
        self.log.push(line);
    }

    pub(crate) fn flip_pair(&mut self, p: usize, q: usize) {
        self.flip(self.inc.line_between(p, q));
    }

    pub(crate) fn sum(&self, points: &[usize]) -> i64 {
        points.iter().map(|&p| self.weights[p] as i64).sum()
    }

    pub(crate) fn negatives(&self, subset: &Subset) -> Vec<usize> {
        subset
            .members()
            .iter()
            .copied()
            .filter(|&p| self.weights[p] < 0)
            .collect()
    }

    /// Runs `body` and records a trace step with the switches it made.
    pub(crate) fn step<T>(
        &mut self,
        rule: Rule,
        points: Vec<usize>,
        body: impl FnOnce(&mut Self) -> Result<T>,
    ) -> Result<T> {
        let before = self.log.len();
        let out = body(self)?;
        let switches = self.log.len() - before;
        self.trace.push(TraceStep {
            rule,
            points,
            switches,
        });
        Ok(out)
    }

    pub(crate) fn finish(
        self,
        config: &Configuration,
        kind: BoundKind,
        peel: Option<PeelReport>,
    ) -> SolverOutcome {
        let final_discrepancy = self.weights.iter().map(|&w| w as i64).sum();
        let switches = self
            .log
            .iter()
            .map(|&li| self.inc.line(li).key.clone())
            .collect();
        SolverOutcome {
            certificate: SwitchCertificate {
                initial_weights: config.weights().to_vec(),
                switches,
                claimed_discrepancy: final_discrepancy,
                kind,
            },
            final_discrepancy,
            final_weights: self.weights,
            trace: self.trace,
            peel,
        }
    }

    /// Copies the switches into `config`'s log.
    pub(crate) fn apply_to(self, config: &mut Configuration) {
        for li in self.log {
            config.switch_index(li);
        }
    }
}

/// Rejects collinear and too-small boards.
pub(crate) fn require_noncollinear(inc: &IncidenceStructure, subset: &Subset) -> Result<()> {
    if subset.len() < 3 || inc.subset_collinear(subset) {
        return Err(Error::Collinear);
    }
    Ok(())
}

/// Turns a missed guarantee into an internal-invariant error.
pub(crate) fn ensure_bound(outcome: &SolverOutcome, n: usize, kind: BoundKind) -> Result<()> {
    if kind.admits(n, outcome.final_discrepancy) {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "solver reached {} on n={n}, below the {kind} bound {}",
            outcome.final_discrepancy,
            kind.describe(n)
        )))
    }
}

pub(crate) fn resolve_subset(n: usize, restrict_to: Option<&[usize]>) -> Result<Subset> {
    match restrict_to {
        None => Ok(Subset::full(n)),
        Some(ix) => Subset::from_indices(n, ix),
    }
}
