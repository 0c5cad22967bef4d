//! A small ordered simple graph used for graph states, hexagonal targets and
//! width computations. Vertex ids are any ordered copyable key, and all
//! iteration orders are deterministic.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph<V: Ord = usize> {
    adj: BTreeMap<V, BTreeSet<V>>,
}

impl<V: Ord + Copy> Default for Graph<V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<V: Ord + Copy> Graph<V> {
    pub fn new() -> Self {
        Self { adj: BTreeMap::new() }
    }

    pub fn with_vertices(vertices: impl IntoIterator<Item = V>) -> Self {
        let mut g = Self::new();
        for v in vertices {
            g.add_vertex(v);
        }
        g
    }

    pub fn from_edges(
        vertices: impl IntoIterator<Item = V>,
        edges: impl IntoIterator<Item = (V, V)>,
    ) -> Self {
        let mut g = Self::with_vertices(vertices);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn add_vertex(&mut self, v: V) {
        self.adj.entry(v).or_default();
    }

    /// Adds an undirected edge, creating missing endpoints. Self-loops are ignored.
    pub fn add_edge(&mut self, a: V, b: V) {
        if a == b {
            return;
        }
        self.adj.entry(a).or_default().insert(b);
        self.adj.entry(b).or_default().insert(a);
    }

    pub fn remove_edge(&mut self, a: V, b: V) -> bool {
        let removed = self.adj.get_mut(&a).is_some_and(|n| n.remove(&b));
        if removed {
            if let Some(n) = self.adj.get_mut(&b) {
                n.remove(&a);
            }
        }
        removed
    }

    pub fn toggle_edge(&mut self, a: V, b: V) {
        if !self.remove_edge(a, b) {
            self.add_edge(a, b);
        }
    }

    /// Removes a vertex and returns its former neighbors.
    pub fn remove_vertex(&mut self, v: V) -> Option<BTreeSet<V>> {
        let nbrs = self.adj.remove(&v)?;
        for w in &nbrs {
            if let Some(n) = self.adj.get_mut(w) {
                n.remove(&v);
            }
        }
        Some(nbrs)
    }

    pub fn contains(&self, v: V) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, a: V, b: V) -> bool {
        self.adj.get(&a).is_some_and(|n| n.contains(&b))
    }

    pub fn neighbors(&self, v: V) -> impl Iterator<Item = V> + '_ {
        self.adj.get(&v).into_iter().flat_map(|n| n.iter().copied())
    }

    pub fn neighbor_set(&self, v: V) -> Option<&BTreeSet<V>> {
        self.adj.get(&v)
    }

    pub fn degree(&self, v: V) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn vertices(&self) -> impl Iterator<Item = V> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Edges as ordered pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (V, V)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&a, n)| n.range(a..).filter(move |&&b| b != a).map(move |&b| (a, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Connected components, each sorted, listed by smallest member.
    pub fn components(&self) -> Vec<Vec<V>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.adj.keys() {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    if seen.insert(w) {
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    /// Induced subgraph on `keep`.
    pub fn induced(&self, keep: &BTreeSet<V>) -> Self {
        let adj = self
            .adj
            .iter()
            .filter(|(v, _)| keep.contains(v))
            .map(|(&v, n)| (v, n.intersection(keep).copied().collect()))
            .collect();
        Self { adj }
    }

    /// Relabels vertices through `f`, which must be injective on the vertex set.
    pub fn map_vertices<W: Ord + Copy>(&self, mut f: impl FnMut(V) -> W) -> Graph<W> {
        let mut g = Graph::new();
        for v in self.vertices() {
            g.add_vertex(f(v));
        }
        for (a, b) in self.edges() {
            g.add_edge(f(a), f(b));
        }
        g
    }

    /// Disjoint union, with `other`'s vertices relabeled by `f`.
    pub fn disjoint_union(&self, other: &Self, mut f: impl FnMut(V) -> V) -> Self {
        let mut g = self.clone();
        for v in other.vertices() {
            g.add_vertex(f(v));
        }
        for (a, b) in other.edges() {
            g.add_edge(f(a), f(b));
        }
        g
    }
}

impl Graph<usize> {
    pub fn path(n: usize) -> Self {
        Self::from_edges(0..n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n > 2 {
            g.add_edge(n - 1, 0);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        Self::from_edges(0..n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
    }

    pub fn star(leaves: usize) -> Self {
        Self::from_edges(0..=leaves, (1..=leaves).map(|i| (0, i)))
    }

    /// `rows x cols` grid graph with vertex `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut g = Self::with_vertices(0..rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    g.add_edge(v, v + 1);
                }
                if r + 1 < rows {
                    g.add_edge(v, v + cols);
                }
            }
        }
        g
    }
}
