//! Site-diluted square lattices and the graph induced on occupied sites.
//!
//! Coordinates are `(row, col)` with row 0 at the bottom boundary and col 0 at
//! the left boundary. Each site draws one uniform value from a ChaCha stream
//! keyed by the seed, in row-major order, and is occupied iff that value is
//! below `p`. Sampling at two probabilities with one seed therefore yields
//! nested occupied sets.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Derives a child seed from a list of integer keys (SplitMix64 finalizer chain).
pub fn mix_seed(parts: &[u64]) -> u64 {
    let mut h: u64 = 0x243F_6A88_85A3_08D3;
    for &p in parts {
        h ^= p;
        h = h.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = h;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h = z ^ (z >> 31);
    }
    h
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    /// Sites per side.
    pub size: usize,
    /// Occupation probability.
    pub p: f64,
    pub seed: u64,
}

impl LatticeConfig {
    pub fn new(size: usize, p: f64, seed: u64) -> Result<Self> {
        let cfg = Self { size, p, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::InvalidArgument("lattice size must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidArgument(format!(
                "occupation probability {} outside [0, 1]",
                self.p
            )));
        }
        Ok(())
    }

    pub fn sites(&self) -> usize {
        self.size * self.size
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct VertexId {
    pub row: usize,
    pub col: usize,
}

impl VertexId {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    pub fn manhattan(self, other: Self) -> usize {
        self.row.abs_diff(other.row) + self.col.abs_diff(other.col)
    }

    /// In-bounds lattice neighbors, in the order east, north, west, south.
    pub fn lattice_neighbors(self, size: usize) -> impl Iterator<Item = VertexId> {
        let VertexId { row, col } = self;
        [
            (col + 1 < size).then(|| VertexId::new(row, col + 1)),
            (row + 1 < size).then(|| VertexId::new(row + 1, col)),
            col.checked_sub(1).map(|c| VertexId::new(row, c)),
            row.checked_sub(1).map(|r| VertexId::new(r, col)),
        ]
        .into_iter()
        .flatten()
    }
}

impl From<[usize; 2]> for VertexId {
    fn from([row, col]: [usize; 2]) -> Self {
        Self { row, col }
    }
}

impl From<VertexId> for [usize; 2] {
    fn from(v: VertexId) -> Self {
        [v.row, v.col]
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Which sites a neighborhood query ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SiteDomain {
    Occupied,
    All,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "GridRepr", try_from = "GridRepr")]
pub struct OccupancyGrid {
    size: usize,
    p: f64,
    seed: u64,
    occupied: Vec<bool>,
}

impl OccupancyGrid {
    /// Builds a grid from a predicate; the header records the realized
    /// occupied fraction and seed 0.
    pub fn from_fn(size: usize, mut f: impl FnMut(VertexId) -> bool) -> Self {
        let occupied: Vec<bool> = (0..size * size)
            .map(|i| f(VertexId::new(i / size, i % size)))
            .collect();
        let count = occupied.iter().filter(|&&o| o).count();
        let p = if size == 0 { 0.0 } else { count as f64 / (size * size) as f64 };
        Self { size, p, seed: 0, occupied }
    }

    pub fn full(size: usize) -> Self {
        Self::from_fn(size, |_| true)
    }

    /// Rows listed bottom (row 0) first; `'1'`/`'#'` mark occupied sites.
    pub fn from_rows(rows: &[&str]) -> Self {
        let size = rows.len();
        Self::from_fn(size, |v| {
            let c = rows[v.row].as_bytes()[v.col];
            c == b'1' || c == b'#'
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn index(&self, v: VertexId) -> usize {
        v.row * self.size + v.col
    }

    pub fn is_occupied(&self, v: VertexId) -> bool {
        v.row < self.size && v.col < self.size && self.occupied[self.index(v)]
    }

    pub fn set(&mut self, v: VertexId, occupied: bool) {
        let i = self.index(v);
        self.occupied[i] = occupied;
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied.iter().filter(|&&o| o).count()
    }

    pub fn occupied_fraction(&self) -> f64 {
        if self.occupied.is_empty() {
            0.0
        } else {
            self.occupied_count() as f64 / self.occupied.len() as f64
        }
    }

    pub fn occupied_sites(&self) -> impl Iterator<Item = VertexId> + '_ {
        let size = self.size;
        self.occupied
            .iter()
            .enumerate()
            .filter(|(_, &o)| o)
            .map(move |(i, _)| VertexId::new(i / size, i % size))
    }

    /// Serializes to the text format: `"L p seed"`, then one line per row with
    /// the top row first.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.size, self.p, self.seed);
        for row in (0..self.size).rev() {
            for col in 0..self.size {
                s.push(if self.occupied[row * self.size + col] { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }
}

impl FromStr for OccupancyGrid {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [size, p, seed] = fields[..] else {
            return Err(Error::Parse(format!("bad header {header:?}")));
        };
        let bad = |what: &str| Error::Parse(format!("bad {what} in header {header:?}"));
        let size: usize = size.parse().map_err(|_| bad("size"))?;
        let p: f64 = p.parse().map_err(|_| bad("p"))?;
        let seed: u64 = seed.parse().map_err(|_| bad("seed"))?;
        LatticeConfig { size, p, seed }
            .validate()
            .map_err(|e| Error::Parse(e.to_string()))?;
        let mut occupied = vec![false; size * size];
        for i in 0..size {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {size} rows, got {i}")))?;
            if line.len() != size {
                return Err(Error::Parse(format!("row {i} has length {}, expected {size}", line.len())));
            }
            let row = size - 1 - i;
            for (col, ch) in line.bytes().enumerate() {
                occupied[row * size + col] = match ch {
                    b'1' => true,
                    b'0' => false,
                    other => {
                        return Err(Error::Parse(format!("unexpected character {:?}", other as char)))
                    }
                };
            }
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing rows after grid".into()));
        }
        Ok(Self { size, p, seed, occupied })
    }
}

/// JSON form: the text header fields and the rows, top row first.
#[derive(Serialize, Deserialize)]
struct GridRepr {
    size: usize,
    p: f64,
    seed: u64,
    rows: Vec<String>,
}

impl From<OccupancyGrid> for GridRepr {
    fn from(g: OccupancyGrid) -> Self {
        let rows = g.to_text().lines().skip(1).map(str::to_owned).collect();
        Self { size: g.size, p: g.p, seed: g.seed, rows }
    }
}

impl TryFrom<GridRepr> for OccupancyGrid {
    type Error = Error;

    fn try_from(r: GridRepr) -> Result<Self> {
        format!("{} {} {}\n{}", r.size, r.p, r.seed, r.rows.join("\n")).parse()
    }
}

/// The per-site uniform draws for `(size, seed)`, row-major.
pub fn site_uniforms(size: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..size * size).map(|_| rng.random::<f64>()).collect()
}

pub fn sample_grid(config: LatticeConfig) -> OccupancyGrid {
    let LatticeConfig { size, p, seed } = config;
    let occupied = site_uniforms(size, seed).into_iter().map(|u| u < p).collect();
    OccupancyGrid { size, p, seed, occupied }
}

/// The graph on occupied sites with edges between occupied nearest neighbors.
///
/// Adjacency is implicit in the occupancy mask.
#[derive(Clone, Debug)]
pub struct SiteGraph {
    size: usize,
    occupied: Vec<bool>,
}

impl SiteGraph {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn index(&self, v: VertexId) -> usize {
        v.row * self.size + v.col
    }

    pub fn vertex_at(&self, index: usize) -> VertexId {
        VertexId::new(index / self.size, index % self.size)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.row < self.size && v.col < self.size && self.occupied[self.index(v)]
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        v.lattice_neighbors(self.size).filter(|&w| self.contains(w))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).count()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        a.manhattan(b) == 1 && self.contains(a) && self.contains(b)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.occupied.len())
            .filter(|&i| self.occupied[i])
            .map(|i| self.vertex_at(i))
    }

    pub fn vertex_count(&self) -> usize {
        self.occupied.iter().filter(|&&o| o).count()
    }

    /// Edges `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices().flat_map(move |v| {
            [VertexId::new(v.row, v.col + 1), VertexId::new(v.row + 1, v.col)]
                .into_iter()
                .filter(move |&w| self.contains(w))
                .map(move |w| (v, w))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn to_graph(&self) -> Graph<VertexId> {
        Graph::from_edges(self.vertices(), self.edges())
    }

    /// The same lattice with `removed` sites emptied.
    pub fn without(&self, removed: &BTreeSet<VertexId>) -> Self {
        let mut g = self.clone();
        for v in removed {
            if v.row < self.size && v.col < self.size {
                let i = g.index(*v);
                g.occupied[i] = false;
            }
        }
        g
    }
}

pub fn grid_to_graph(grid: &OccupancyGrid) -> SiteGraph {
    SiteGraph { size: grid.size, occupied: grid.occupied.clone() }
}

/// Maximal connected sets of occupied sites, each sorted, ordered by smallest member.
pub fn connected_components(graph: &SiteGraph) -> Vec<Vec<VertexId>> {
    let n = graph.size * graph.size;
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for start in graph.vertices() {
        let si = graph.index(start);
        if seen[si] {
            continue;
        }
        seen[si] = true;
        let mut comp = vec![start];
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for w in graph.neighbors(v) {
                let wi = graph.index(w);
                if !seen[wi] {
                    seen[wi] = true;
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

/// Size of each connected component, without materializing vertex lists.
pub fn component_sizes(graph: &SiteGraph) -> Vec<usize> {
    let n = graph.size * graph.size;
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for i in 0..n {
        if !graph.occupied[i] || seen[i] {
            continue;
        }
        seen[i] = true;
        stack.push(i);
        let mut count = 0;
        while let Some(v) = stack.pop() {
            count += 1;
            for w in graph.neighbors(graph.vertex_at(v)) {
                let wi = graph.index(w);
                if !seen[wi] {
                    seen[wi] = true;
                    stack.push(wi);
                }
            }
        }
        sizes.push(count);
    }
    sizes
}

/// All sites within Manhattan distance `k` of `set`, restricted to `domain`.
///
/// Distances are measured over every lattice site, occupied or not. `k = 0`
/// returns `set` itself.
pub fn k_neighborhood(
    graph: &SiteGraph,
    set: &BTreeSet<VertexId>,
    k: usize,
    domain: SiteDomain,
) -> BTreeSet<VertexId> {
    if k == 0 {
        return set.clone();
    }
    let size = graph.size;
    let mut dist = vec![usize::MAX; size * size];
    let mut queue = VecDeque::new();
    for &v in set {
        if v.row < size && v.col < size {
            dist[graph.index(v)] = 0;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[graph.index(v)];
        if d == k {
            continue;
        }
        for w in v.lattice_neighbors(size) {
            let wi = graph.index(w);
            if dist[wi] == usize::MAX {
                dist[wi] = d + 1;
                queue.push_back(w);
            }
        }
    }
    let mut out: BTreeSet<VertexId> = (0..size * size)
        .filter(|&i| dist[i] != usize::MAX)
        .map(|i| graph.vertex_at(i))
        .filter(|&v| domain == SiteDomain::All || graph.contains(v))
        .collect();
    // members of `set` itself are always returned
    out.extend(set.iter().copied());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[(usize, usize)]) -> BTreeSet<VertexId> {
        vs.iter().map(|&(r, c)| VertexId::new(r, c)).collect()
    }

    #[test]
    fn extreme_probabilities() {
        for seed in [0, 1, 99] {
            let full = sample_grid(LatticeConfig::new(4, 1.0, seed).unwrap());
            assert_eq!(full.occupied_count(), 16);
            let empty = sample_grid(LatticeConfig::new(4, 0.0, seed).unwrap());
            assert_eq!(empty.occupied_count(), 0);
        }
    }

    #[test]
    fn occupied_fraction_concentrates() {
        let g = sample_grid(LatticeConfig::new(256, 0.7, 1).unwrap());
        let tol = 3.0 * (0.7f64 * 0.3 / 65536.0).sqrt();
        assert!((g.occupied_fraction() - 0.7).abs() <= tol, "{}", g.occupied_fraction());
    }

    #[test]
    fn invalid_configs() {
        assert!(LatticeConfig::new(0, 0.5, 0).is_err());
        assert!(LatticeConfig::new(3, 1.5, 0).is_err());
        assert!(LatticeConfig::new(3, -0.1, 0).is_err());
    }

    #[test]
    fn small_graphs() {
        let g = grid_to_graph(&OccupancyGrid::full(2));
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 4));

        let single = OccupancyGrid::from_fn(3, |v| v == VertexId::new(1, 1));
        let g = grid_to_graph(&single);
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));

        let checker = OccupancyGrid::from_fn(4, |v| (v.row + v.col) % 2 == 0);
        let g = grid_to_graph(&checker);
        assert_eq!((g.vertex_count(), g.edge_count()), (8, 0));
    }

    #[test]
    fn components_examples() {
        let empty = grid_to_graph(&OccupancyGrid::from_fn(5, |_| false));
        assert!(connected_components(&empty).is_empty());

        let full = grid_to_graph(&OccupancyGrid::full(6));
        let comps = connected_components(&full);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].len(), 36);

        let two = grid_to_graph(&OccupancyGrid::from_fn(5, |v| {
            v == VertexId::new(2, 1) || v == VertexId::new(2, 3)
        }));
        assert_eq!(
            connected_components(&two),
            vec![vec![VertexId::new(2, 1)], vec![VertexId::new(2, 3)]]
        );
        assert_eq!(component_sizes(&two), vec![1, 1]);
    }

    #[test]
    fn neighborhoods() {
        let g = grid_to_graph(&OccupancyGrid::full(5));
        let s = set(&[(2, 2)]);
        assert_eq!(k_neighborhood(&g, &s, 0, SiteDomain::Occupied), s);
        assert_eq!(
            k_neighborhood(&g, &s, 1, SiteDomain::Occupied),
            set(&[(2, 2), (1, 2), (3, 2), (2, 1), (2, 3)])
        );
        let bottom: BTreeSet<_> = (0..5).map(|c| VertexId::new(0, c)).collect();
        let expect: BTreeSet<_> = (0..3)
            .flat_map(|r| (0..5).map(move |c| VertexId::new(r, c)))
            .collect();
        assert_eq!(k_neighborhood(&g, &bottom, 2, SiteDomain::Occupied), expect);
    }

    #[test]
    fn neighborhood_crosses_holes_only_in_all_domain() {
        let grid = OccupancyGrid::from_rows(&["111", "101", "111"]);
        let g = grid_to_graph(&grid);
        let s = set(&[(0, 1)]);
        let all = k_neighborhood(&g, &s, 2, SiteDomain::All);
        assert!(all.contains(&VertexId::new(1, 1)));
        let occ = k_neighborhood(&g, &s, 2, SiteDomain::Occupied);
        assert!(!occ.contains(&VertexId::new(1, 1)));
        assert!(occ.contains(&VertexId::new(2, 1)));
    }

    #[test]
    fn text_format_top_row_first() {
        let grid = OccupancyGrid::from_rows(&["100", "000", "001"]);
        let text = grid.to_text();
        let mut lines = text.lines();
        lines.next();
        assert_eq!(lines.next(), Some("001"));
        assert_eq!(lines.last(), Some("100"));
    }

    #[test]
    fn header_matches_inputs() {
        let g = sample_grid(LatticeConfig::new(30, 0.592746, 7).unwrap());
        assert!(g.to_text().starts_with("30 0.592746 7\n"));
    }

    #[test]
    fn parse_errors() {
        assert!("".parse::<OccupancyGrid>().is_err());
        assert!("2 0.5".parse::<OccupancyGrid>().is_err());
        assert!("2 0.5 1\n10\n".parse::<OccupancyGrid>().is_err());
        assert!("2 0.5 1\n10\n1x\n".parse::<OccupancyGrid>().is_err());
        assert!("2 1.5 1\n10\n11\n".parse::<OccupancyGrid>().is_err());
        assert!("2 0.5 1\n10\n11\n".parse::<OccupancyGrid>().is_ok());
    }

    #[test]
    fn mix_seed_distinguishes_order() {
        assert_ne!(mix_seed(&[1, 2]), mix_seed(&[2, 1]));
        assert_eq!(mix_seed(&[5, 6, 7]), mix_seed(&[5, 6, 7]));
    }
}
