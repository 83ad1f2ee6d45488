use super::{require_noncollinear, Engine, Rule, SolverOutcome};
use crate::board::{BoundKind, Configuration};
use crate::error::{Error, Result};
use crate::geometry::{IncidenceStructure, Subset};

/// The ordinary line of `level` with the smallest key, as its two points.
fn first_ordinary(inc: &IncidenceStructure, level: &Subset) -> Option<(usize, usize)> {
    inc.active_lines(level)
        .into_iter()
        .find_map(|(_, pts)| match pts[..] {
            [p, q] => Some((p, q)),
            _ => None,
        })
}

/// Drives the weights of `level` to a sum in `{-2, ..., 2}`.
pub(crate) fn run_balance(e: &mut Engine<'_>, active: &Subset) -> Result<()> {
    require_noncollinear(e.inc, active)?;
    let mut pairs = Vec::new();
    let mut level = active.clone();
    let (rest, z) = loop {
        let (p, q) = first_ordinary(e.inc, &level)
            .ok_or_else(|| Error::Internal("noncollinear set without an ordinary line".into()))?;
        let rest = level.without(&[p, q]);
        pairs.push((p, q, rest.clone()));
        if !e.inc.subset_collinear(&rest) {
            level = rest;
            continue;
        }
        // p and q are not both on the line of rest, else pq would carry a third point
        let z = match rest.members() {
            [a, b, ..] if e.inc.line(e.inc.line_between(*a, *b)).contains(p) => q,
            _ => p,
        };
        break (rest, z);
    };

    e.step(Rule::BalanceSweep, rest.members().to_vec(), |e| {
        // exactly floor(|rest| / 2) negatives, with as few flips as possible
        let target = rest.len() / 2;
        let neg = e.negatives(&rest);
        if neg.len() > target {
            for &x in &neg[..neg.len() - target] {
                e.flip_pair(z, x);
            }
        } else {
            let pos: Vec<usize> = rest
                .members()
                .iter()
                .copied()
                .filter(|&x| e.weights[x] > 0)
                .collect();
            for &x in &pos[..target - neg.len()] {
                e.flip_pair(z, x);
            }
        }
        Ok(())
    })?;

    while let Some((p, q, rest)) = pairs.pop() {
        e.step(Rule::BalancePair, vec![p.min(q), p.max(q)], |e| {
            let omega = e.sum(rest.members()).signum();
            let pair = (e.weights[p] + e.weights[q]).signum() as i64;
            if pair != 0 && pair == omega {
                e.flip_pair(p, q);
            }
            Ok(())
        })?;
    }
    Ok(())
}

/// Switches until the total weight lies in `{-2, ..., 2}`.
pub fn balance(config: &Configuration) -> Result<SolverOutcome> {
    let all = Subset::full(config.n());
    let mut e = Engine::new(config);
    run_balance(&mut e, &all)?;
    let out = e.finish(config, BoundKind::Balance, None);
    if out.final_discrepancy.abs() > 2 {
        return Err(Error::Internal(format!(
            "balance ended at {}",
            out.final_discrepancy
        )));
    }
    Ok(out)
}
