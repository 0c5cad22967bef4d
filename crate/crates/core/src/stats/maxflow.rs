//! Maximum number of vertex-disjoint left-to-right crossings via unit
//! vertex-capacity max-flow (Dinic on the split graph).

use std::collections::VecDeque;

use crate::lattice::{grid_to_graph, OccupancyGrid, VertexId};

struct Edge {
    to: usize,
    cap: u32,
}

struct FlowNetwork {
    edges: Vec<Edge>,
    head: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    fn new(n: usize) -> Self {
        Self { edges: Vec::new(), head: vec![Vec::new(); n], level: vec![-1; n], iter: vec![0; n] }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: u32) {
        self.head[from].push(self.edges.len());
        self.edges.push(Edge { to, cap });
        self.head[to].push(self.edges.len());
        self.edges.push(Edge { to: from, cap: 0 });
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &e in &self.head[v] {
                let Edge { to, cap } = self.edges[e];
                if cap > 0 && self.level[to] < 0 {
                    self.level[to] = self.level[v] + 1;
                    q.push_back(to);
                }
            }
        }
        self.level[t] >= 0
    }

    /// One augmenting path in the level graph, iteratively.
    fn dfs(&mut self, s: usize, t: usize) -> bool {
        let mut path: Vec<usize> = Vec::new();
        let mut v = s;
        loop {
            if v == t {
                for &e in &path {
                    self.edges[e].cap -= 1;
                    self.edges[e ^ 1].cap += 1;
                }
                return true;
            }
            let mut advanced = false;
            while self.iter[v] < self.head[v].len() {
                let e = self.head[v][self.iter[v]];
                let Edge { to, cap } = self.edges[e];
                if cap > 0 && self.level[to] == self.level[v] + 1 {
                    path.push(e);
                    v = to;
                    advanced = true;
                    break;
                }
                self.iter[v] += 1;
            }
            if !advanced {
                // dead end: retreat and skip the edge that led here
                self.level[v] = -1;
                let Some(e) = path.pop() else { return false };
                v = self.edges[e ^ 1].to;
                self.iter[v] += 1;
            }
        }
    }

    fn max_flow(&mut self, s: usize, t: usize) -> u32 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            while self.dfs(s, t) {
                flow += 1;
            }
        }
        flow
    }
}

/// Exact maximum number of vertex-disjoint H-crossings (left to right).
pub fn max_disjoint_crossings(grid: &OccupancyGrid) -> usize {
    let graph = grid_to_graph(grid);
    let size = grid.size();
    if size == 0 {
        return 0;
    }
    let n = size * size;
    let (source, sink) = (2 * n, 2 * n + 1);
    let mut net = FlowNetwork::new(2 * n + 2);
    for v in graph.vertices() {
        let i = graph.index(v);
        net.add_edge(2 * i, 2 * i + 1, 1);
        if v.col == 0 {
            net.add_edge(source, 2 * i, 1);
        }
        if v.col + 1 == size {
            net.add_edge(2 * i + 1, sink, 1);
        }
        for w in graph.neighbors(v) {
            net.add_edge(2 * i + 1, 2 * graph.index(w), 1);
        }
    }
    net.max_flow(source, sink) as usize
}

/// Transposed copy, so V-crossings of `grid` become H-crossings.
pub fn transpose(grid: &OccupancyGrid) -> OccupancyGrid {
    OccupancyGrid::from_fn(grid.size(), |v| grid.is_occupied(VertexId::new(v.col, v.row)))
}

/// Exact maximum number of vertex-disjoint V-crossings (bottom to top).
pub fn max_disjoint_v_crossings(grid: &OccupancyGrid) -> usize {
    max_disjoint_crossings(&transpose(grid))
}
