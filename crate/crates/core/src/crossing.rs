//! Path identification: extremal crossings found by a right-hand wall
//! follower, cleaned to induced shortest paths, and checked for closeness
//! errors.
//!
//! Searches run in a "search frame" `(a, b)` where a crossing goes from
//! `b = 0` to `b = L - 1` and the walker hugs `a = 0`. For H-crossings the
//! frame is the lattice itself (`a = row`, `b = col`), so the walker hugs the
//! bottom boundary. For V-crossings the frame is transposed (`a = col`,
//! `b = row`), so the walker hugs the left boundary.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{SiteGraph, VertexId};
use crate::work::WorkCounter;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    H,
    V,
}

impl Orientation {
    fn vertex(self, a: usize, b: usize) -> VertexId {
        match self {
            Orientation::H => VertexId::new(a, b),
            Orientation::V => VertexId::new(b, a),
        }
    }

    /// Position along the crossing direction.
    pub fn progress(self, v: VertexId) -> usize {
        match self {
            Orientation::H => v.col,
            Orientation::V => v.row,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// Repeated 2-local wall follower (H-paths).
    TwoLocalRhwf,
    /// Plain wall follower keeping every third path (V-paths).
    EveryThirdRhwf,
    /// Plain wall follower, all paths kept.
    PlainRhwf,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingPath {
    pub orientation: Orientation,
    /// 1-based, bottom-to-top for H and left-to-right for V.
    pub index: usize,
    pub vertices: Vec<VertexId>,
}

impl CrossingPath {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Checks adjacency of consecutive vertices, absence of repeats, and
    /// boundary endpoints.
    pub fn is_valid_crossing(&self, graph: &SiteGraph) -> bool {
        let (Some(&first), Some(&last)) = (self.vertices.first(), self.vertices.last()) else {
            return false;
        };
        let distinct: HashSet<_> = self.vertices.iter().collect();
        distinct.len() == self.vertices.len()
            && self.vertices.iter().all(|&v| graph.contains(v))
            && self.vertices.windows(2).all(|w| w[0].manhattan(w[1]) == 1)
            && self.orientation.progress(first) == 0
            && self.orientation.progress(last) + 1 == graph.size()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSet {
    pub orientation: Orientation,
    pub provenance: Provenance,
    /// Number of crossings the wall follower found before any retention rule.
    pub found: usize,
    pub paths: Vec<CrossingPath>,
}

impl PathSet {
    pub fn empty(orientation: Orientation, provenance: Provenance) -> Self {
        Self { orientation, provenance, found: 0, paths: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

const EAST: u8 = 0;

/// Step `(da, db)` for heading `d`, headings counterclockwise from east.
fn step(d: u8) -> (isize, isize) {
    match d {
        0 => (0, 1),
        1 => (1, 0),
        2 => (0, -1),
        _ => (-1, 0),
    }
}

enum Walk {
    Crossing(Vec<VertexId>),
    Failed,
}

/// Wall-follower state shared by successive searches on one graph.
struct Searcher<'g> {
    graph: &'g SiteGraph,
    orientation: Orientation,
    size: usize,
    /// Excluded by earlier paths or their neighborhoods.
    forbidden: Vec<bool>,
    /// Clusters already shown to have no crossing.
    dead: Vec<bool>,
    /// 1-based stack position during loop erasure, 0 when absent.
    stack_pos: Vec<u32>,
    work: WorkCounter,
}

impl<'g> Searcher<'g> {
    fn new(graph: &'g SiteGraph, orientation: Orientation) -> Self {
        let n = graph.size() * graph.size();
        Self {
            graph,
            orientation,
            size: graph.size(),
            forbidden: vec![false; n],
            dead: vec![false; n],
            stack_pos: vec![0; n],
            work: WorkCounter::default(),
        }
    }

    fn with_forbidden(graph: &'g SiteGraph, orientation: Orientation, forbidden: &BTreeSet<VertexId>) -> Self {
        let mut s = Self::new(graph, orientation);
        for &v in forbidden {
            if graph.contains(v) {
                let i = graph.index(v);
                s.forbidden[i] = true;
            }
        }
        s
    }

    fn site(&self, a: isize, b: isize) -> Option<VertexId> {
        let n = self.size as isize;
        if a < 0 || b < 0 || a >= n || b >= n {
            return None;
        }
        let v = self.orientation.vertex(a as usize, b as usize);
        let i = self.graph.index(v);
        (self.graph.contains(v) && !self.forbidden[i] && !self.dead[i]).then_some(v)
    }

    fn frame(&self, v: VertexId) -> (isize, isize) {
        match self.orientation {
            Orientation::H => (v.row as isize, v.col as isize),
            Orientation::V => (v.col as isize, v.row as isize),
        }
    }

    /// First open direction in the order right, straight, left, back.
    fn choose(&self, v: VertexId, heading: u8) -> Option<(u8, VertexId)> {
        let (a, b) = self.frame(v);
        [3u8, 0, 1, 2].into_iter().find_map(|turn| {
            let d = (heading + turn) % 4;
            let (da, db) = step(d);
            self.site(a + da, b + db).map(|w| (d, w))
        })
    }

    fn walk(&mut self, start: VertexId) -> Walk {
        let last = self.size - 1;
        self.work.rhwf_visits += 1;
        if self.orientation.progress(start) == last {
            return Walk::Crossing(vec![start]);
        }
        let Some((first_dir, _)) = self.choose(start, EAST) else {
            self.kill_cluster(start);
            return Walk::Failed;
        };
        let mut stack = vec![start];
        self.stack_pos[self.graph.index(start)] = 1;
        let (mut cur, mut heading) = (start, EAST);
        let mut moved = false;
        loop {
            let (d, next) = self
                .choose(cur, heading)
                .expect("arrival edge is always open for retreat");
            if moved && cur == start && d == first_dir {
                for v in stack.drain(..) {
                    let i = self.graph.index(v);
                    self.stack_pos[i] = 0;
                }
                self.kill_cluster(start);
                return Walk::Failed;
            }
            moved = true;
            self.work.rhwf_visits += 1;
            let ni = self.graph.index(next);
            if self.stack_pos[ni] > 0 {
                while *stack.last().unwrap() != next {
                    let v = stack.pop().unwrap();
                    let i = self.graph.index(v);
                    self.stack_pos[i] = 0;
                }
            } else {
                stack.push(next);
                self.stack_pos[ni] = stack.len() as u32;
            }
            if self.orientation.progress(next) == last {
                for &v in &stack {
                    let i = self.graph.index(v);
                    self.stack_pos[i] = 0;
                }
                return Walk::Crossing(stack);
            }
            cur = next;
            heading = d;
        }
    }

    /// Marks the available cluster of `start` as dead.
    fn kill_cluster(&mut self, start: VertexId) {
        let mut stack = vec![start];
        let si = self.graph.index(start);
        self.dead[si] = true;
        while let Some(v) = stack.pop() {
            self.work.exclusion += 1;
            let (a, b) = self.frame(v);
            for d in 0..4 {
                let (da, db) = step(d);
                if let Some(w) = self.site(a + da, b + db) {
                    let wi = self.graph.index(w);
                    self.dead[wi] = true;
                    stack.push(w);
                }
            }
        }
    }

    /// Forbids every site within Manhattan distance `radius` of `path`.
    fn forbid_around(&mut self, path: &[VertexId], radius: usize) {
        let n = self.size as isize;
        let r = radius as isize;
        for &v in path {
            for dr in -r..=r {
                let rem = r - dr.abs();
                for dc in -rem..=rem {
                    let (row, col) = (v.row as isize + dr, v.col as isize + dc);
                    if row >= 0 && col >= 0 && row < n && col < n {
                        self.work.exclusion += 1;
                        self.forbidden[(row * n + col) as usize] = true;
                    }
                }
            }
        }
    }

    /// Lowest available starting site on the `b = 0` boundary at or above `from`.
    fn next_start(&self, from: usize) -> Option<(usize, VertexId)> {
        (from..self.size).find_map(|a| self.site(a as isize, 0).map(|v| (a, v)))
    }

    /// Repeatedly extracts extremal crossings, excluding the `radius`
    /// neighborhood of each found path from later searches.
    fn peel(&mut self, radius: usize) -> Vec<Vec<VertexId>> {
        let mut found = Vec::new();
        let mut cursor = 0;
        while let Some((a, start)) = self.next_start(cursor) {
            cursor = a;
            match self.walk(start) {
                Walk::Crossing(path) => {
                    self.forbid_around(&path, radius);
                    found.push(path);
                }
                Walk::Failed => {}
            }
        }
        found
    }
}

/// The extremal crossing of `graph` avoiding `forbidden`: the lowest
/// H-crossing, or the leftmost V-crossing.
pub fn rhwf_crossing(
    graph: &SiteGraph,
    orientation: Orientation,
    forbidden: &BTreeSet<VertexId>,
) -> Option<CrossingPath> {
    rhwf_crossing_counted(graph, orientation, forbidden).0
}

/// As [`rhwf_crossing`], also returning the number of vertex arrivals.
pub fn rhwf_crossing_counted(
    graph: &SiteGraph,
    orientation: Orientation,
    forbidden: &BTreeSet<VertexId>,
) -> (Option<CrossingPath>, u64) {
    if graph.size() == 0 {
        return (None, 0);
    }
    let mut s = Searcher::with_forbidden(graph, orientation, forbidden);
    let mut cursor = 0;
    while let Some((a, start)) = s.next_start(cursor) {
        cursor = a;
        if let Walk::Crossing(vertices) = s.walk(start) {
            let path = CrossingPath { orientation, index: 1, vertices };
            return (Some(path), s.work.rhwf_visits);
        }
    }
    (None, s.work.rhwf_visits)
}

fn assemble(orientation: Orientation, raw: Vec<Vec<VertexId>>, graph: &SiteGraph, work: &mut WorkCounter) -> Vec<CrossingPath> {
    raw.into_iter()
        .enumerate()
        .map(|(i, vertices)| {
            let p = CrossingPath { orientation, index: i + 1, vertices };
            work.cleanup += p.len() as u64;
            shortest_path_cleanup(&p, graph).expect("wall-follower output is a crossing")
        })
        .collect()
}

/// H-paths from the 2-local wall follower, cleaned, bottom to top.
pub fn find_h_paths(graph: &SiteGraph) -> PathSet {
    find_h_paths_counted(graph, &mut WorkCounter::default())
}

pub fn find_h_paths_counted(graph: &SiteGraph, work: &mut WorkCounter) -> PathSet {
    let orientation = Orientation::H;
    if graph.size() == 0 {
        return PathSet::empty(orientation, Provenance::TwoLocalRhwf);
    }
    let mut s = Searcher::new(graph, orientation);
    let raw = s.peel(2);
    work.absorb(&s.work);
    let found = raw.len();
    let paths = assemble(orientation, raw, graph, work);
    PathSet { orientation, provenance: Provenance::TwoLocalRhwf, found, paths }
}

/// Every V-crossing found by the plain wall follower, cleaned, left to right.
///
/// The count equals the maximum number of vertex-disjoint V-crossings.
pub fn enumerate_v_paths(graph: &SiteGraph) -> PathSet {
    enumerate_v_paths_counted(graph, &mut WorkCounter::default())
}

pub fn enumerate_v_paths_counted(graph: &SiteGraph, work: &mut WorkCounter) -> PathSet {
    let orientation = Orientation::V;
    if graph.size() == 0 {
        return PathSet::empty(orientation, Provenance::PlainRhwf);
    }
    let mut s = Searcher::new(graph, orientation);
    let raw = s.peel(0);
    work.absorb(&s.work);
    let found = raw.len();
    let paths = assemble(orientation, raw, graph, work);
    PathSet { orientation, provenance: Provenance::PlainRhwf, found, paths }
}

/// V-paths 1, 4, 7, ... of the plain wall-follower enumeration, reindexed
/// from 1.
pub fn find_v_paths(graph: &SiteGraph) -> PathSet {
    find_v_paths_counted(graph, &mut WorkCounter::default())
}

pub fn find_v_paths_counted(graph: &SiteGraph, work: &mut WorkCounter) -> PathSet {
    let all = enumerate_v_paths_counted(graph, work);
    retain_every_third(all)
}

pub fn retain_every_third(all: PathSet) -> PathSet {
    let paths = all
        .paths
        .into_iter()
        .step_by(3)
        .enumerate()
        .map(|(i, mut p)| {
            p.index = i + 1;
            p
        })
        .collect();
    PathSet { orientation: all.orientation, provenance: Provenance::EveryThirdRhwf, found: all.found, paths }
}

/// Shortest boundary-to-boundary crossing inside the subgraph induced by the
/// path's own vertices; ties go to the lexicographically smallest sequence.
pub fn shortest_path_cleanup(path: &CrossingPath, graph: &SiteGraph) -> Result<CrossingPath> {
    let o = path.orientation;
    let last = graph.size().checked_sub(1).ok_or(Error::NoCrossing)?;
    let members: HashSet<VertexId> = path.vertices.iter().copied().collect();
    let nbrs = |v: VertexId| {
        let members = &members;
        graph.neighbors(v).filter(move |w| members.contains(w))
    };
    let mut dist: HashMap<VertexId, usize> = HashMap::with_capacity(members.len());
    let mut queue = VecDeque::new();
    for &v in &path.vertices {
        if o.progress(v) == last && graph.contains(v) {
            dist.insert(v, 0);
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for w in nbrs(v) {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                e.insert(d + 1);
                queue.push_back(w);
            }
        }
    }
    let start = path
        .vertices
        .iter()
        .filter(|&&v| o.progress(v) == 0)
        .filter_map(|&v| dist.get(&v).map(|&d| (d, v)))
        .min()
        .ok_or(Error::NoCrossing)?;
    let (mut d, mut cur) = start;
    let mut vertices = vec![cur];
    while d > 0 {
        cur = nbrs(cur)
            .filter(|w| dist.get(w) == Some(&(d - 1)))
            .min()
            .expect("BFS layer has a predecessor");
        d -= 1;
        vertices.push(cur);
    }
    Ok(CrossingPath { orientation: o, index: path.index, vertices })
}

/// Closeness and degree error witnesses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub self_h: Vec<(VertexId, VertexId)>,
    pub self_v: Vec<(VertexId, VertexId)>,
    pub h_h: Vec<(VertexId, VertexId)>,
    pub v_v: Vec<(VertexId, VertexId)>,
    pub h_v: Vec<(VertexId, VertexId)>,
    pub degree_1: Vec<VertexId>,
    pub degree_2: Vec<VertexId>,
    pub degree_4: Vec<VertexId>,
    pub lattice: Vec<String>,
}

impl ErrorReport {
    pub fn closeness_errors(&self) -> usize {
        self.self_h.len() + self.self_v.len() + self.h_h.len() + self.v_v.len() + self.h_v.len()
    }
}

/// Membership of each site in the paths of a set: `(path slot, position)`.
fn path_positions(set: &PathSet) -> HashMap<VertexId, (usize, usize)> {
    let mut m = HashMap::new();
    for (slot, p) in set.paths.iter().enumerate() {
        for (pos, &v) in p.vertices.iter().enumerate() {
            m.insert(v, (slot, pos));
        }
    }
    m
}

type Pairs = Vec<(VertexId, VertexId)>;

fn closeness(set: &PathSet, graph: &SiteGraph) -> (Pairs, Pairs) {
    let pos = path_positions(set);
    let (mut own, mut cross) = (Vec::new(), Vec::new());
    for p in &set.paths {
        for &u in &p.vertices {
            let (su, pu) = pos[&u];
            for w in graph.neighbors(u).filter(|&w| u < w) {
                match pos.get(&w) {
                    Some(&(sw, pw)) if sw == su && pu.abs_diff(pw) != 1 => own.push((u, w)),
                    Some(&(sw, _)) if sw != su => cross.push((u, w)),
                    _ => {}
                }
            }
        }
    }
    own.sort();
    cross.sort();
    (own, cross)
}

/// Closeness errors between and within the given H- and V-path sets.
///
/// An H-V witness is a lattice edge joining a vertex of `H^j` that is not on
/// `V^k` to a vertex of `V^k` that is not on `H^j`.
pub fn validate_paths(hset: &PathSet, vset: &PathSet, graph: &SiteGraph) -> ErrorReport {
    let (self_h, h_h) = closeness(hset, graph);
    let (self_v, v_v) = closeness(vset, graph);
    let hpos = path_positions(hset);
    let vpos = path_positions(vset);
    let mut h_v = Vec::new();
    for (&u, &(hj, _)) in &hpos {
        for w in graph.neighbors(u) {
            let Some(&(vk, _)) = vpos.get(&w) else { continue };
            let u_on_vk = vpos.get(&u).is_some_and(|&(s, _)| s == vk);
            let w_on_hj = hpos.get(&w).is_some_and(|&(s, _)| s == hj);
            if !u_on_vk && !w_on_hj {
                h_v.push((u, w));
            }
        }
    }
    h_v.sort();
    ErrorReport { self_h, self_v, h_h, v_v, h_v, ..Default::default() }
}
