use super::{resolve_subset, Engine};
use crate::board::Configuration;
use crate::error::{Error, Result};
use crate::geometry::{Component, Subset};

/// Makes every vertex of `comp` except its root positive, deepest level first.
///
/// Each tree edge must be an ordinary line of `subset`, so a switch touches
/// exactly its two endpoints among the sub-board's points.
pub(crate) fn run_tree_switch(e: &mut Engine<'_>, subset: &Subset, comp: &Component) -> Result<usize> {
    for (child, parent) in comp.tree_edges() {
        let li = e.inc.line_between(child, parent);
        let count = e.inc.active_count(li, subset);
        if count != 2 {
            return Err(Error::NonOrdinaryEdge {
                child,
                parent,
                line: e.inc.line(li).key.clone(),
                count,
            });
        }
    }
    let mut switches = 0;
    for depth in (1..=comp.max_depth()).rev() {
        for k in 0..comp.order.len() {
            if comp.depth[k] == depth && e.weights[comp.order[k]] < 0 {
                e.flip_pair(comp.order[k], comp.parent[k]);
                switches += 1;
            }
        }
    }
    Ok(switches)
}

/// Spanning-tree switch on a component of the ordinary line graph of
/// `restrict_to` (or the whole board), with the tree re-rooted at `root`.
///
/// Returns the number of switches, at most `|component| - 1`.
pub fn tree_switch(
    config: &mut Configuration,
    restrict_to: Option<&[usize]>,
    component: &Component,
    root: usize,
) -> Result<usize> {
    let subset = resolve_subset(config.n(), restrict_to)?;
    if !component.contains(root) {
        return Err(Error::Precondition(format!(
            "root {root} is not in the component"
        )));
    }
    if let Some(&v) = component.vertices.iter().find(|&&v| !subset.contains(v)) {
        return Err(Error::Precondition(format!(
            "component vertex {v} is outside the active set"
        )));
    }
    let comp = if component.root == root {
        component.clone()
    } else {
        reroot(component, root)
    };
    let inc = config.incidence().clone();
    let mut e = Engine::on(&inc, config.weights().to_vec());
    let switches = run_tree_switch(&mut e, &subset, &comp)?;
    e.apply_to(config);
    Ok(switches)
}

/// Re-roots a spanning tree by breadth-first search over its own edges.
fn reroot(comp: &Component, root: usize) -> Component {
    let mut adj: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (c, p) in comp.tree_edges() {
        adj.entry(c).or_default().push(p);
        adj.entry(p).or_default().push(c);
    }
    for list in adj.values_mut() {
        list.sort_unstable();
    }
    let mut order = vec![root];
    let mut parent = vec![root];
    let mut depth = vec![0];
    let mut k = 0;
    while k < order.len() {
        let v = order[k];
        for &w in adj.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            if !order.contains(&w) {
                order.push(w);
                parent.push(v);
                depth.push(depth[k] + 1);
            }
        }
        k += 1;
    }
    Component {
        vertices: comp.vertices.clone(),
        root,
        order,
        parent,
        depth,
    }
}
