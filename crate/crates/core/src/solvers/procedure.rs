use super::{ensure_bound, require_noncollinear, resolve_subset, Engine, Rule, SolverOutcome};
use crate::board::{BoundKind, Configuration};
use crate::error::{Error, Result};
use crate::geometry::Subset;

/// Switches negative lines of the sub-board, smallest key first, until none is left.
/// Returns the number of switches made.
pub(crate) fn run_procedure_n(e: &mut Engine<'_>, subset: &Subset) -> usize {
    let lines = e.inc.active_lines(subset);
    let mut count = 0;
    loop {
        let negative = lines.iter().find(|(_, pts)| e.sum(pts) < 0);
        match negative {
            Some(&(li, _)) => {
                e.flip(li);
                count += 1;
            }
            None => return count,
        }
    }
}

/// Procedure N on the whole board or on the sub-board `restrict_to`.
///
/// Negativity is measured on the sub-board's points only; a switch still
/// flips every point of the line. Returns the number of switches applied.
pub fn procedure_n(config: &mut Configuration, restrict_to: Option<&[usize]>) -> Result<usize> {
    let subset = resolve_subset(config.n(), restrict_to)?;
    let inc = config.incidence().clone();
    let mut e = Engine::on(&inc, config.weights().to_vec());
    let count = run_procedure_n(&mut e, &subset);
    e.apply_to(config);
    Ok(count)
}

/// Procedure N on a board with no three collinear points; reaches `n - 2`.
pub fn solve_general_position(config: &Configuration) -> Result<SolverOutcome> {
    let inc = config.incidence();
    let all = Subset::full(config.n());
    require_noncollinear(inc, &all)?;
    if let Some(line) = inc.lines().iter().find(|l| l.len() > 2) {
        return Err(Error::Precondition(format!(
            "not in general position: {} carries {} points",
            line.key,
            line.len()
        )));
    }
    let mut e = Engine::new(config);
    e.step(Rule::GeneralPosition, all.members().to_vec(), |e| {
        run_procedure_n(e, &all);
        Ok(())
    })?;
    let out = e.finish(config, BoundKind::NMinus2, None);
    ensure_bound(&out, config.n(), BoundKind::NMinus2)?;
    Ok(out)
}
