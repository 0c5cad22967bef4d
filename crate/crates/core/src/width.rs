//! Cut-rank and exact rank-width (entanglement width of graph states) for
//! tiny graphs.
//!
//! The bipartite Schmidt rank of a graph state across `(A, V \ A)` is
//! `2^cut_rank(A)`, so the entanglement width is the rank-width: the minimum
//! over subcubic trees with the vertices as leaves of the largest cut-rank
//! across a tree edge.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lattice::{grid_to_graph, sample_grid, LatticeConfig, VertexId};
use crate::stats::{least_squares, trial_seed};

/// Largest graph accepted by [`rank_width_bruteforce`].
pub const WIDTH_VERTEX_LIMIT: usize = 12;

/// Dense matrix over GF(2), rows packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        Self { rows, cols, words, bits: vec![0; rows * words] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.bits[r * self.words + c / 64];
        if value {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.bits.clone();
        let w = self.words;
        let mut rank = 0;
        for c in 0..self.cols {
            let (word, bit) = (c / 64, 1u64 << (c % 64));
            let Some(pivot) = (rank..self.rows).find(|&r| m[r * w + word] & bit != 0) else {
                continue;
            };
            for i in 0..w {
                m.swap(rank * w + i, pivot * w + i);
            }
            for r in 0..self.rows {
                if r != rank && m[r * w + word] & bit != 0 {
                    for i in 0..w {
                        m[r * w + i] ^= m[rank * w + i];
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// The adjacency submatrix between `a` and its complement.
pub fn cut_matrix<V: Ord + Copy>(graph: &Graph<V>, a: &BTreeSet<V>) -> Gf2Matrix {
    let inside: Vec<V> = graph.vertices().filter(|v| a.contains(v)).collect();
    let outside: Vec<V> = graph.vertices().filter(|v| !a.contains(v)).collect();
    Gf2Matrix::from_fn(inside.len(), outside.len(), |r, c| graph.has_edge(inside[r], outside[c]))
}

/// GF(2) rank of the cut matrix; vertices of `a` outside the graph are ignored.
pub fn cut_rank<V: Ord + Copy>(graph: &Graph<V>, a: &BTreeSet<V>) -> usize {
    cut_matrix(graph, a).rank()
}

/// Vertex-indexed adjacency masks for graphs of at most 64 vertices.
struct MaskGraph<V> {
    vertices: Vec<V>,
    adj: Vec<u64>,
}

impl<V: Ord + Copy> MaskGraph<V> {
    fn new(graph: &Graph<V>) -> Self {
        let vertices: Vec<V> = graph.vertices().collect();
        let index: BTreeMap<V, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = vertices.iter().map(|&v| graph.neighbors(v).fold(0, |m, w| m | 1 << index[&w])).collect();
        Self { vertices, adj }
    }

    fn full(&self) -> u64 {
        if self.vertices.len() == 64 {
            u64::MAX
        } else {
            (1 << self.vertices.len()) - 1
        }
    }

    fn cut_rank(&self, a: u64) -> usize {
        let comp = self.full() & !a;
        let mut basis = [0u64; 64];
        let mut rank = 0;
        let mut rest = a;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut row = self.adj[v] & comp;
            while row != 0 {
                let top = 63 - row.leading_zeros() as usize;
                if basis[top] == 0 {
                    basis[top] = row;
                    rank += 1;
                    break;
                }
                row ^= basis[top];
            }
        }
        rank
    }

    fn cut_table(&self) -> Vec<u8> {
        (0..=self.full()).map(|a| self.cut_rank(a) as u8).collect()
    }
}

/// A rooted binary tree over vertices; suppressing the root gives a
/// subcubic tree. Serializes as nested pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessTree<V> {
    Leaf(V),
    Node(Box<WitnessTree<V>>, Box<WitnessTree<V>>),
}

impl<V: Ord + Copy> WitnessTree<V> {
    pub fn leaves(&self) -> Vec<V> {
        match self {
            WitnessTree::Leaf(v) => vec![*v],
            WitnessTree::Node(a, b) => {
                let mut out = a.leaves();
                out.extend(b.leaves());
                out
            }
        }
    }

    /// Leaf sets below every non-root node.
    fn proper_subtrees(&self, out: &mut Vec<BTreeSet<V>>) {
        if let WitnessTree::Node(a, b) = self {
            for child in [a, b] {
                out.push(child.leaves().into_iter().collect());
                child.proper_subtrees(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchDecompositionResult<V> {
    pub width: usize,
    /// `None` only for the empty graph.
    pub witness_tree: Option<WitnessTree<V>>,
}

/// Largest cut-rank over the edges of `tree`, or `None` when its leaves are
/// not exactly the vertices of `graph`, each once.
pub fn witness_width<V: Ord + Copy>(graph: &Graph<V>, tree: &WitnessTree<V>) -> Option<usize> {
    let leaves = tree.leaves();
    let set: BTreeSet<V> = leaves.iter().copied().collect();
    if set.len() != leaves.len() || !set.iter().copied().eq(graph.vertices()) {
        return None;
    }
    let mut subsets = Vec::new();
    tree.proper_subtrees(&mut subsets);
    Some(subsets.iter().map(|s| cut_rank(graph, s)).max().unwrap_or(0))
}

/// Exact rank-width by dynamic programming over vertex subsets.
pub fn rank_width_bruteforce<V: Ord + Copy>(graph: &Graph<V>) -> Result<BranchDecompositionResult<V>> {
    let n = graph.vertex_count();
    if n > WIDTH_VERTEX_LIMIT {
        return Err(Error::SizeLimit { size: n, limit: WIDTH_VERTEX_LIMIT });
    }
    if n == 0 {
        return Ok(BranchDecompositionResult { width: 0, witness_tree: None });
    }
    let mg = MaskGraph::new(graph);
    let cut = mg.cut_table();
    let full = mg.full() as usize;
    let mut best = vec![u8::MAX; full + 1];
    let mut split = vec![0usize; full + 1];
    for s in 1..=full {
        if s.is_power_of_two() {
            best[s] = cut[s];
            continue;
        }
        // submasks holding the lowest bit, so each split is seen once
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut sub = rest;
        loop {
            let a = sub | low;
            if a != s {
                let b = s ^ a;
                let w = cut[a].max(cut[b]).max(best[a]).max(best[b]);
                if w < best[s] {
                    best[s] = w;
                    split[s] = a;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    fn build<V: Copy>(s: usize, split: &[usize], vertices: &[V]) -> WitnessTree<V> {
        if s.is_power_of_two() {
            return WitnessTree::Leaf(vertices[s.trailing_zeros() as usize]);
        }
        let a = split[s];
        WitnessTree::Node(Box::new(build(a, split, vertices)), Box::new(build(s ^ a, split, vertices)))
    }
    // the root of a single vertex has no edges
    let width = if n == 1 { 0 } else { best[full] as usize };
    Ok(BranchDecompositionResult { width, witness_tree: Some(build(full, &split, &mg.vertices)) })
}

/// Rank-width by enumerating every unrooted binary tree with the vertices as
/// leaves; `(2n - 5)!!` trees, so only usable for about ten vertices.
pub fn rank_width_exhaustive<V: Ord + Copy>(graph: &Graph<V>) -> Result<usize> {
    const LIMIT: usize = 10;
    let n = graph.vertex_count();
    if n > LIMIT {
        return Err(Error::SizeLimit { size: n, limit: LIMIT });
    }
    let mg = MaskGraph::new(graph);
    let cut = mg.cut_table();
    match n {
        0 | 1 => return Ok(0),
        2 => return Ok(cut[1] as usize),
        _ => {}
    }
    // tree nodes: leaves 0..n, internal nodes from n; start from a star on 0,1,2
    let mut edges: Vec<(usize, usize)> = vec![(0, n), (1, n), (2, n)];
    let mut best = usize::MAX;
    enumerate_trees(3, n, &mut edges, &cut, &mut best);
    Ok(best)
}

fn enumerate_trees(next: usize, n: usize, edges: &mut Vec<(usize, usize)>, cut: &[u8], best: &mut usize) {
    if next == n {
        *best = (*best).min(tree_width(n, edges, cut));
        return;
    }
    let internal = n + next - 2;
    for i in 0..edges.len() {
        let (a, b) = edges[i];
        edges[i] = (a, internal);
        edges.push((internal, b));
        edges.push((next, internal));
        enumerate_trees(next + 1, n, edges, cut, best);
        edges.pop();
        edges.pop();
        edges[i] = (a, b);
    }
}

fn tree_width(n: usize, edges: &[(usize, usize)], cut: &[u8]) -> usize {
    let nodes = 2 * n - 2;
    let mut adj = vec![Vec::new(); nodes];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    fn leaf_mask(v: usize, from: usize, n: usize, adj: &[Vec<usize>]) -> usize {
        if v < n {
            return 1 << v;
        }
        adj[v].iter().filter(|&&w| w != from).map(|&w| leaf_mask(w, v, n, adj)).fold(0, |m, x| m | x)
    }
    edges.iter().map(|&(a, b)| cut[leaf_mask(a, b, n, &adj)] as usize).max().unwrap_or(0)
}

/// Entanglement width of a product of graph states: the largest width over
/// connected components.
pub fn ewd_of_components<V: Ord + Copy>(graph: &Graph<V>) -> Result<usize> {
    let mut width = 0;
    for comp in graph.components() {
        let keep: BTreeSet<V> = comp.into_iter().collect();
        width = width.max(rank_width_bruteforce(&graph.induced(&keep))?.width);
    }
    Ok(width)
}

/// One sampled lattice in [`subcritical_width_bound_check`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WidthSample {
    pub size: usize,
    pub seed: u64,
    pub components: usize,
    /// Largest component size; bounds the entanglement width of the sample.
    pub s_max: usize,
    /// Components small enough for the exact width computation.
    pub exact_components: usize,
    /// Largest exact width among those components.
    pub max_exact_width: usize,
    /// Exactly computed components whose width exceeded their size.
    pub bound_violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WidthBoundReport {
    pub p: f64,
    pub samples: Vec<WidthSample>,
    /// `(L, mean s_max)` per size.
    pub mean_s_max: Vec<(usize, f64)>,
    /// Fit of mean `s_max` against `ln N`; absent with a single size.
    pub log_slope: Option<f64>,
    pub r_squared: Option<f64>,
}

/// Components up to this size get an exact width in the bound check.
pub const EXACT_COMPONENT_LIMIT: usize = 10;

fn width_sample(size: usize, p: f64, seed: u64) -> WidthSample {
    let site = grid_to_graph(&sample_grid(LatticeConfig { size, p, seed }));
    let comps = crate::lattice::connected_components(&site);
    let mut sample = WidthSample {
        size,
        seed,
        components: comps.len(),
        s_max: comps.iter().map(Vec::len).max().unwrap_or(0),
        exact_components: 0,
        max_exact_width: 0,
        bound_violations: 0,
    };
    for comp in comps.iter().filter(|c| c.len() <= EXACT_COMPONENT_LIMIT) {
        let keep: BTreeSet<VertexId> = comp.iter().copied().collect();
        let g = Graph::from_edges(
            comp.iter().copied(),
            comp.iter().flat_map(|&v| site.neighbors(v).filter(|w| keep.contains(w)).map(move |w| (v, w))),
        );
        let w = rank_width_bruteforce(&g).map_or(usize::MAX, |r| r.width);
        sample.exact_components += 1;
        sample.max_exact_width = sample.max_exact_width.max(w);
        if w > comp.len() {
            sample.bound_violations += 1;
        }
    }
    sample
}

/// Largest-component bound on the entanglement width of subcritical samples.
pub fn subcritical_width_bound_check(p: f64, sizes: &[usize], trials: usize, seed: u64) -> Result<WidthBoundReport> {
    if !(0.0..crate::stats::components::SUBCRITICAL_LIMIT).contains(&p) {
        return Err(Error::InvalidArgument(format!("p = {p} is not subcritical")));
    }
    if trials == 0 || sizes.is_empty() {
        return Err(Error::InvalidArgument("need sizes and at least one trial".into()));
    }
    let mut samples = Vec::new();
    let mut mean_s_max = Vec::new();
    for &size in sizes {
        LatticeConfig::new(size, p, 0)?;
        let batch: Vec<WidthSample> =
            (0..trials as u64).into_par_iter().map(|t| width_sample(size, p, trial_seed(seed, size, t))).collect();
        mean_s_max.push((size, batch.iter().map(|s| s.s_max as f64).sum::<f64>() / trials as f64));
        samples.extend(batch);
    }
    let (log_slope, r_squared) = if sizes.len() >= 2 {
        let xs: Vec<f64> = mean_s_max.iter().map(|&(l, _)| ((l * l) as f64).ln()).collect();
        let ys: Vec<f64> = mean_s_max.iter().map(|&(_, m)| m).collect();
        let fit = least_squares(&xs, &ys);
        (Some(fit.slope), Some(fit.r_squared))
    } else {
        (None, None)
    };
    Ok(WidthBoundReport { p, samples, mean_s_max, log_slope, r_squared })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_rank() {
        assert_eq!(Gf2Matrix::zeros(3, 4).rank(), 0);
        assert_eq!(Gf2Matrix::from_fn(4, 4, |r, c| r == c).rank(), 4);
        assert_eq!(Gf2Matrix::from_fn(3, 3, |_, _| true).rank(), 1);
        let m = Gf2Matrix::from_fn(3, 70, |r, c| (r == 0 && c == 69) || (r == 1 && c == 69) || (r == 2 && c == 3));
        assert_eq!(m.rank(), 2);
        assert_eq!(m.transpose().rank(), 2);
    }

    #[test]
    fn cut_rank_examples() {
        let k5 = Graph::complete(5);
        assert_eq!(cut_rank(&k5, &BTreeSet::new()), 0);
        assert_eq!(cut_rank(&k5, &(0..5).collect()), 0);
        assert_eq!(cut_rank(&k5, &[1, 3].into()), 1);
        assert_eq!(cut_rank(&Graph::path(2), &[0].into()), 1);
        assert_eq!(cut_rank(&Graph::cycle(4), &[0, 1].into()), 2);
    }

    #[test]
    fn paths_have_width_one() {
        for n in 2..=8 {
            let g = Graph::path(n);
            let r = rank_width_bruteforce(&g).unwrap();
            assert_eq!(r.width, 1, "P_{n}");
            assert_eq!(witness_width(&g, r.witness_tree.as_ref().unwrap()), Some(1));
        }
        assert_eq!(rank_width_bruteforce(&Graph::path(1)).unwrap().width, 0);
        assert_eq!(rank_width_bruteforce(&Graph::<usize>::new()).unwrap().width, 0);
    }

    #[test]
    fn complete_and_star_have_width_one() {
        assert_eq!(rank_width_bruteforce(&Graph::complete(7)).unwrap().width, 1);
        assert_eq!(rank_width_bruteforce(&Graph::star(6)).unwrap().width, 1);
        assert_eq!(rank_width_bruteforce(&Graph::cycle(6)).unwrap().width, 2);
    }

    #[test]
    fn grid_three_by_three_agrees_with_tree_enumeration() {
        let g = Graph::grid(3, 3);
        let dp = rank_width_bruteforce(&g).unwrap();
        assert_eq!(rank_width_exhaustive(&g).unwrap(), dp.width);
        assert_eq!(dp.width, 2);
        assert_eq!(witness_width(&g, dp.witness_tree.as_ref().unwrap()), Some(2));
    }

    #[test]
    fn size_limit() {
        assert!(matches!(rank_width_bruteforce(&Graph::path(13)), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn max_rule_on_unions() {
        let p5 = Graph::path(5);
        let g = p5.disjoint_union(&Graph::path(2), |v| v + 10);
        assert_eq!(ewd_of_components(&g).unwrap(), 1);
        assert_eq!(ewd_of_components(&Graph::with_vertices(0..20)).unwrap(), 0);
        let g = Graph::path(4).disjoint_union(&Graph::grid(3, 3), |v| v + 10);
        assert_eq!(ewd_of_components(&g).unwrap(), 2);
    }

    #[test]
    fn witness_rejects_wrong_leaves() {
        let g = Graph::path(3);
        let t = WitnessTree::Node(Box::new(WitnessTree::Leaf(0)), Box::new(WitnessTree::Leaf(1)));
        assert_eq!(witness_width(&g, &t), None);
        assert_eq!(serde_json::to_string(&t).unwrap(), "[0,1]");
    }

    #[test]
    fn empty_lattice_bound() {
        let r = subcritical_width_bound_check(0.0, &[8, 16], 3, 1).unwrap();
        assert!(r.samples.iter().all(|s| s.s_max == 0 && s.components == 0));
    }
}
