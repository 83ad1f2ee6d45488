use std::collections::VecDeque;

use super::{IncidenceStructure, Subset};
use crate::error::{Error, Result};

/// One connected component of an ordinary line graph with a BFS spanning tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Sorted point indices.
    pub vertices: Vec<usize>,
    pub root: usize,
    /// Vertices in breadth-first order from `root`.
    pub order: Vec<usize>,
    /// `parent[k]` is the tree parent of `order[k]`; the root is its own parent.
    pub parent: Vec<usize>,
    /// `depth[k]` is the distance of `order[k]` from the root.
    pub depth: Vec<usize>,
}

impl Component {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn max_depth(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Tree edges as `(child, parent)` pairs, in breadth-first order.
    pub fn tree_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.order
            .iter()
            .zip(&self.parent)
            .skip(1)
            .map(|(&c, &p)| (c, p))
    }
}

/// Graph on the points of a (sub-)board whose edges are the ordinary lines.
#[derive(Debug, Clone)]
pub struct OrdinaryLineGraph {
    n: usize,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    components: Vec<Component>,
}

impl OrdinaryLineGraph {
    pub fn new(inc: &IncidenceStructure) -> Self {
        Self::of_subset(inc, &Subset::full(inc.n()))
    }

    /// The ordinary line graph of the sub-board on `subset`: an edge joins
    /// `u, v` when their line carries no other point of `subset`.
    pub fn of_subset(inc: &IncidenceStructure, subset: &Subset) -> Self {
        let n = inc.n();
        let mut adjacency = vec![Vec::new(); n];
        let mut edges = Vec::new();
        for (_, pts) in inc.active_lines(subset) {
            if let [u, v] = pts[..] {
                adjacency[u].push(v);
                adjacency[v].push(u);
                edges.push((u, v));
            }
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        edges.sort_unstable();

        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for &root in subset.members() {
            if seen[root] {
                continue;
            }
            let comp = bfs_component(&adjacency, root);
            for &v in &comp.vertices {
                seen[v] = true;
            }
            components.push(comp);
        }
        OrdinaryLineGraph {
            n,
            adjacency,
            edges,
            components,
        }
    }

    /// Number of points of the underlying board (not just the subset).
    pub fn board_size(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Components ordered by their smallest vertex; each tree is rooted at
    /// that smallest vertex.
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// The largest component, ties going to the one with the smallest vertex.
    pub fn largest_component(&self) -> Option<&Component> {
        let mut best: Option<&Component> = None;
        for c in &self.components {
            if best.is_none_or(|b| c.len() > b.len()) {
                best = Some(c);
            }
        }
        best
    }

    /// The component containing `v` with its tree re-rooted at `v`.
    pub fn rooted_at(&self, v: usize) -> Result<Component> {
        if !self.components.iter().any(|c| c.contains(v)) {
            return Err(Error::Precondition(format!(
                "point {v} is not a vertex of the graph"
            )));
        }
        Ok(bfs_component(&self.adjacency, v))
    }
}

fn bfs_component(adjacency: &[Vec<usize>], root: usize) -> Component {
    let mut order = vec![root];
    let mut parent = vec![root];
    let mut depth = vec![0];
    let mut visited = vec![false; adjacency.len()];
    visited[root] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        let v = order[k];
        for &w in &adjacency[v] {
            if !visited[w] {
                visited[w] = true;
                order.push(w);
                parent.push(v);
                depth.push(depth[k] + 1);
                queue.push_back(order.len() - 1);
            }
        }
    }
    let mut vertices = order.clone();
    vertices.sort_unstable();
    Component {
        vertices,
        root,
        order,
        parent,
        depth,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn inc(coords: &[(i64, i64)]) -> IncidenceStructure {
        IncidenceStructure::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    /// Union-find components over an explicit edge list.
    fn uf_components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(u, v) in edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a.max(b)] = a.min(b);
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    #[test]
    fn triangle_is_one_component() {
        let g = OrdinaryLineGraph::new(&inc(&[(0, 0), (1, 0), (0, 1)]));
        assert_eq!(g.edges().len(), 3);
        assert_eq!(g.components().len(), 1);
        assert_eq!(g.components()[0].root, 0);
    }

    #[test]
    fn near_pencil_is_a_star() {
        let g = OrdinaryLineGraph::new(&inc(&[(0, 0), (1, 0), (2, 0), (3, 0), (0, 1)]));
        assert_eq!(g.edges(), &[(0, 4), (1, 4), (2, 4), (3, 4)]);
        assert_eq!(g.components().len(), 1);
        let star = g.rooted_at(4).unwrap();
        assert_eq!(star.max_depth(), 1);
        assert_eq!(star.order, vec![4, 0, 1, 2, 3]);
    }

    #[test]
    fn grid3_edges_and_components_match_union_find() {
        let mut coords = Vec::new();
        for y in 0..3 {
            for x in 0..3 {
                coords.push((x, y));
            }
        }
        let board = inc(&coords);
        let g = OrdinaryLineGraph::new(&board);
        let two_point: Vec<(usize, usize)> = board
            .lines()
            .iter()
            .filter(|l| l.len() == 2)
            .map(|l| (l.points[0], l.points[1]))
            .collect();
        let mut expected = two_point.clone();
        expected.sort_unstable();
        assert_eq!(g.edges(), &expected[..]);
        assert_eq!(g.edges().len(), 12);
        let comps: Vec<Vec<usize>> = g.components().iter().map(|c| c.vertices.clone()).collect();
        assert_eq!(comps, uf_components(9, &two_point));
    }

    #[test]
    fn spanning_tree_touches_each_vertex_once() {
        let g = OrdinaryLineGraph::new(&inc(&[(0, 0), (1, 0), (0, 1), (3, 5), (7, 2), (4, 4)]));
        for c in g.components() {
            let mut seen = c.order.clone();
            seen.sort_unstable();
            assert_eq!(seen, c.vertices);
            for (child, parent) in c.tree_edges() {
                assert!(g.neighbors(child).contains(&parent));
            }
        }
    }

    #[test]
    fn subset_graph_uses_only_active_points() {
        // (0,0),(1,0),(2,0) collinear; removing (2,0) makes (0,0)-(1,0) ordinary
        let board = inc(&[(0, 0), (1, 0), (2, 0), (0, 1)]);
        let full = OrdinaryLineGraph::new(&board);
        assert!(!full.edges().contains(&(0, 1)));
        let sub = OrdinaryLineGraph::of_subset(&board, &Subset::full(4).without(&[2]));
        assert!(sub.edges().contains(&(0, 1)));
        assert_eq!(sub.components().len(), 1);
        assert!(!sub.components()[0].contains(2));
    }
}
