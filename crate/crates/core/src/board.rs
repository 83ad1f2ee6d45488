//! Game state and replayable switch certificates.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{IncidenceStructure, LineKey, Point};

/// Default constant in the `C_switch * n` switch budget accepted by the verifier.
pub const C_SWITCH: usize = 8;

/// Checks that every entry is `+1` or `-1`.
pub fn validate_weights(weights: &[i64]) -> Result<Vec<i8>> {
    weights
        .iter()
        .enumerate()
        .map(|(index, &value)| match value {
            1 => Ok(1),
            -1 => Ok(-1),
            _ => Err(Error::InvalidWeight { index, value }),
        })
        .collect()
}

/// A board with its current weights and the log of switches applied since
/// the initial weights.
#[derive(Debug, Clone)]
pub struct Configuration {
    incidence: Arc<IncidenceStructure>,
    initial: Vec<i8>,
    weights: Vec<i8>,
    log: Vec<usize>,
}

impl Configuration {
    pub fn new(points: Vec<Point>, weights: Vec<i8>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::LengthMismatch {
                points: points.len(),
                weights: weights.len(),
            });
        }
        Self::from_incidence(Arc::new(IncidenceStructure::new(points)?), weights)
    }

    pub fn from_incidence(incidence: Arc<IncidenceStructure>, weights: Vec<i8>) -> Result<Self> {
        if incidence.n() != weights.len() {
            return Err(Error::LengthMismatch {
                points: incidence.n(),
                weights: weights.len(),
            });
        }
        if let Some((index, &w)) = weights.iter().enumerate().find(|(_, w)| w.abs() != 1) {
            return Err(Error::InvalidWeight {
                index,
                value: w as i64,
            });
        }
        Ok(Configuration {
            incidence,
            initial: weights.clone(),
            weights,
            log: Vec::new(),
        })
    }

    pub fn incidence(&self) -> &Arc<IncidenceStructure> {
        &self.incidence
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[i8] {
        &self.weights
    }

    pub fn initial_weights(&self) -> &[i8] {
        &self.initial
    }

    pub fn discrepancy(&self) -> i64 {
        self.weights.iter().map(|&w| w as i64).sum()
    }

    /// Switches the connecting line `key` and returns the flipped point indices.
    pub fn switch(&mut self, key: &LineKey) -> Result<&[usize]> {
        let li = self
            .incidence
            .line_index(key)
            .ok_or_else(|| Error::UnknownLine(key.clone()))?;
        Ok(self.switch_index(li))
    }

    /// Like [`Configuration::switch`], addressed by line index.
    pub fn switch_index(&mut self, line: usize) -> &[usize] {
        let points = &self.incidence.line(line).points;
        for &p in points {
            self.weights[p] = -self.weights[p];
        }
        self.log.push(line);
        points
    }

    pub fn switched(&self, key: &LineKey) -> Result<Self> {
        let mut next = self.clone();
        next.switch(key)?;
        Ok(next)
    }

    /// Reverts the most recent switch, returning its line index.
    pub fn undo(&mut self) -> Option<usize> {
        let line = self.log.pop()?;
        for &p in &self.incidence.line(line).points {
            self.weights[p] = -self.weights[p];
        }
        Some(line)
    }

    pub fn switch_log(&self) -> Vec<LineKey> {
        self.log
            .iter()
            .map(|&li| self.incidence.line(li).key.clone())
            .collect()
    }

    pub fn switch_log_indices(&self) -> &[usize] {
        &self.log
    }

    /// Replays the log from the initial weights and compares with the current weights.
    pub fn replay_matches(&self) -> bool {
        let mut w = self.initial.clone();
        for &li in &self.log {
            for &p in &self.incidence.line(li).points {
                w[p] = -w[p];
            }
        }
        w == self.weights
    }

    /// A fresh configuration on the same board whose initial weights are
    /// the current ones.
    pub fn rebased(&self) -> Self {
        Configuration {
            incidence: Arc::clone(&self.incidence),
            initial: self.weights.clone(),
            weights: self.weights.clone(),
            log: Vec::new(),
        }
    }
}

/// Which guarantee a certificate claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// Discrepancy at least `n/3`.
    Third,
    /// Discrepancy at least `n - 2`.
    NMinus2,
    /// Near-perfect peeling; checked as at least `n - 2`.
    NearPerfect,
    /// Absolute discrepancy at most 2.
    Balance,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::Third => "third",
            BoundKind::NMinus2 => "n_minus_2",
            BoundKind::NearPerfect => "near_perfect",
            BoundKind::Balance => "balance",
        }
    }

    /// Whether `value` meets this bound on an `n`-point board.
    pub fn admits(&self, n: usize, value: i64) -> bool {
        match self {
            BoundKind::Third => value >= third_threshold(n),
            BoundKind::NMinus2 | BoundKind::NearPerfect => value >= n as i64 - 2,
            BoundKind::Balance => value.abs() <= 2,
        }
    }

    pub fn describe(&self, n: usize) -> String {
        match self {
            BoundKind::Third => format!(">= {}", third_threshold(n)),
            BoundKind::NMinus2 | BoundKind::NearPerfect => format!(">= {}", n as i64 - 2),
            BoundKind::Balance => "|d| <= 2".to_string(),
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "third" => Ok(BoundKind::Third),
            "n_minus_2" => Ok(BoundKind::NMinus2),
            "near_perfect" => Ok(BoundKind::NearPerfect),
            "balance" => Ok(BoundKind::Balance),
            other => Err(Error::Parse {
                line: 0,
                message: format!("unknown bound kind {other:?}"),
            }),
        }
    }
}

/// Smallest integer `>= n/3` with the parity of `n`.
pub fn third_threshold(n: usize) -> i64 {
    let n = n as i64;
    let t = (n + 2) / 3;
    if (t - n) % 2 == 0 {
        t
    } else {
        t + 1
    }
}

/// An ordered switch list with a claimed final discrepancy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchCertificate {
    pub initial_weights: Vec<i8>,
    pub switches: Vec<LineKey>,
    pub claimed_discrepancy: i64,
    pub kind: BoundKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerificationFailure {
    WeightLength { expected: usize, got: usize },
    InvalidWeight { index: usize },
    UnknownLine { index: usize, key: LineKey },
    ClaimNotMet { claimed: i64, actual: i64 },
    BoundNotMet { kind: BoundKind, value: i64, required: String },
    BudgetExceeded { switches: usize, budget: usize },
}

impl fmt::Display for VerificationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerificationFailure::WeightLength { expected, got } => {
                write!(f, "weight count: expected {expected}, got {got}")
            }
            VerificationFailure::InvalidWeight { index } => {
                write!(f, "invalid weight at index {index}")
            }
            VerificationFailure::UnknownLine { index, key } => {
                write!(f, "unknown line at switch {index}: {key}")
            }
            VerificationFailure::ClaimNotMet { claimed, actual } => {
                write!(f, "claim not met: claimed {claimed}, replay gives {actual}")
            }
            VerificationFailure::BoundNotMet {
                kind,
                value,
                required,
            } => write!(f, "bound not met: {kind} requires {required}, got {value}"),
            VerificationFailure::BudgetExceeded { switches, budget } => {
                write!(f, "switch budget exceeded: {switches} > {budget}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationResult {
    /// Discrepancy after replay; `None` when the switch list could not be replayed.
    pub final_discrepancy: Option<i64>,
    pub switch_budget: usize,
    pub failures: Vec<VerificationFailure>,
}

impl VerificationResult {
    pub fn accepted(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_certificate(board: &IncidenceStructure, cert: &SwitchCertificate) -> VerificationResult {
    verify_certificate_with_budget(board, cert, C_SWITCH)
}

/// Replays `cert` on `board`; every failed check is reported separately.
pub fn verify_certificate_with_budget(
    board: &IncidenceStructure,
    cert: &SwitchCertificate,
    c_switch: usize,
) -> VerificationResult {
    let n = board.n();
    let budget = c_switch * n;
    let mut failures = Vec::new();

    let mut weights_ok = cert.initial_weights.len() == n;
    if !weights_ok {
        failures.push(VerificationFailure::WeightLength {
            expected: n,
            got: cert.initial_weights.len(),
        });
    }
    if let Some(index) = cert.initial_weights.iter().position(|w| w.abs() != 1) {
        failures.push(VerificationFailure::InvalidWeight { index });
        weights_ok = false;
    }

    let mut lines = Vec::with_capacity(cert.switches.len());
    for (index, key) in cert.switches.iter().enumerate() {
        match board.line_index(key) {
            Some(li) => lines.push(li),
            None => {
                failures.push(VerificationFailure::UnknownLine {
                    index,
                    key: key.clone(),
                });
                break;
            }
        }
    }
    let replayable = weights_ok && lines.len() == cert.switches.len();

    let final_discrepancy = replayable.then(|| {
        let mut w = cert.initial_weights.clone();
        for li in lines {
            for &p in &board.line(li).points {
                w[p] = -w[p];
            }
        }
        w.iter().map(|&x| x as i64).sum::<i64>()
    });

    if let Some(actual) = final_discrepancy {
        if actual < cert.claimed_discrepancy {
            failures.push(VerificationFailure::ClaimNotMet {
                claimed: cert.claimed_discrepancy,
                actual,
            });
        }
    }

    let bound_value = match cert.kind {
        BoundKind::Balance => final_discrepancy.unwrap_or(cert.claimed_discrepancy),
        _ => cert.claimed_discrepancy,
    };
    if !cert.kind.admits(n, bound_value) {
        failures.push(VerificationFailure::BoundNotMet {
            kind: cert.kind,
            value: bound_value,
            required: cert.kind.describe(n),
        });
    }

    if cert.switches.len() > budget {
        failures.push(VerificationFailure::BudgetExceeded {
            switches: cert.switches.len(),
            budget,
        });
    }

    VerificationResult {
        final_discrepancy,
        switch_budget: budget,
        failures,
    }
}
