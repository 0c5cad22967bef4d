//! The brick-wall embedding of the hexagonal lattice.
//!
//! Nodes are `(j, k)` with `1 <= j <= rows` and `1 <= k <= cols`. Node
//! `(j, k)` joins `(j, k + 1)` horizontally and `(j + 1, k)` vertically iff
//! `j + k` is even. With two or more rows, end nodes `(j, 1)` and `(j, cols)`
//! that have no vertical edge are dropped, so interior nodes have degree 3
//! and boundary nodes degree 2.

use crate::graph::Graph;

pub type HexNode = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HexLattice {
    pub rows: usize,
    pub cols: usize,
}

impl HexLattice {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols }
    }

    pub fn contains(&self, (j, k): HexNode) -> bool {
        (1..=self.rows).contains(&j)
            && (1..=self.cols).contains(&k)
            && (self.rows < 2 || (k > 1 && k < self.cols) || self.has_vertical((j, k)))
    }

    pub fn has_up(&self, (j, k): HexNode) -> bool {
        j < self.rows && (j + k) % 2 == 0
    }

    pub fn has_down(&self, (j, k): HexNode) -> bool {
        j > 1 && (j - 1 + k) % 2 == 0
    }

    pub fn has_vertical(&self, node: HexNode) -> bool {
        self.has_up(node) || self.has_down(node)
    }

    pub fn nodes(&self) -> impl Iterator<Item = HexNode> + '_ {
        (1..=self.rows)
            .flat_map(move |j| (1..=self.cols).map(move |k| (j, k)))
            .filter(move |&n| self.contains(n))
    }

    pub fn node_count(&self) -> usize {
        self.nodes().count()
    }

    pub fn edges(&self) -> Vec<(HexNode, HexNode)> {
        let mut out = Vec::new();
        for (j, k) in self.nodes() {
            if k < self.cols && self.contains((j, k + 1)) {
                out.push(((j, k), (j, k + 1)));
            }
            if self.has_up((j, k)) {
                out.push(((j, k), (j + 1, k)));
            }
        }
        out
    }

    pub fn graph(&self) -> Graph<HexNode> {
        Graph::from_edges(self.nodes(), self.edges())
    }
}

/// The brick-wall hexagonal lattice with `rows` rows of `cols` junctions.
pub fn hex_lattice_graph(rows: usize, cols: usize) -> Graph<HexNode> {
    HexLattice::new(rows, cols).graph()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node() {
        let g = hex_lattice_graph(1, 1);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn two_by_three_is_one_hexagon() {
        let g = hex_lattice_graph(2, 3);
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 6);
        assert!(g.vertices().all(|v| g.degree(v) == 2));
        assert_eq!(g.components().len(), 1);
    }

    #[test]
    fn interior_degree_three() {
        for (rows, cols) in [(3, 3), (4, 5), (6, 7)] {
            let g = hex_lattice_graph(rows, cols);
            for j in 2..rows {
                for k in 2..cols {
                    assert_eq!(g.degree((j, k)), 3, "({j},{k}) in {rows}x{cols}");
                }
            }
            assert!(g.max_degree() <= 3);
        }
    }

    #[test]
    fn single_row_is_a_path() {
        let g = hex_lattice_graph(1, 5);
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn three_by_four_drops_stubs() {
        let g = hex_lattice_graph(3, 4);
        // (1,4) and (3,1) have no vertical edge
        assert!(!g.contains((1, 4)) && !g.contains((3, 1)));
        assert_eq!(g.vertex_count(), 10);
        // horizontals 2 + 3 + 2; verticals (1,1),(1,3),(2,2),(2,4)
        assert_eq!(g.edge_count(), 11);
        assert!(g.vertices().all(|v| (2..=3).contains(&g.degree(v))));
    }

    #[test]
    fn every_cycle_is_long() {
        // girth 6: no triangles or 4-cycles
        let g = hex_lattice_graph(5, 6);
        for v in g.vertices() {
            let n: Vec<_> = g.neighbors(v).collect();
            for (i, &a) in n.iter().enumerate() {
                for &b in &n[i + 1..] {
                    assert!(!g.has_edge(a, b));
                    let common = g.neighbors(a).filter(|&x| x != v && g.has_edge(x, b)).count();
                    assert_eq!(common, 0);
                }
            }
        }
    }
}
