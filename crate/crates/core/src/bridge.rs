//! Bridge decomposition, abutments, junction correction and extraction of
//! the subgraph whose topological minor is the hexagonal lattice.
//!
//! H-paths are indexed `j = 1..=J` bottom to top and V-paths `k = 1..=K`
//! left to right. Bridge `(j, k)` is the stretch of `V^k` crossing the stripe
//! between `H^j` and `H^{j+1}`. Neighborhoods are graph-theoretic: `N(X)` is
//! the set of occupied sites adjacent to `X` and not in `X`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::crossing::{CrossingPath, Orientation, PathSet};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hexlattice::{HexLattice, HexNode};
use crate::lattice::{SiteGraph, VertexId};
use crate::work::WorkCounter;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bridge {
    pub j: usize,
    pub k: usize,
    /// Sub-path of `V^k` from `s` to `e` inclusive.
    pub vertices: Vec<VertexId>,
    pub s: VertexId,
    pub e: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BridgeDecomposition {
    /// Number of H-paths.
    pub rows: usize,
    /// Number of V-paths.
    pub cols: usize,
    #[serde(with = "pair_map")]
    pub bridges: BTreeMap<(usize, usize), Bridge>,
    pub retained: BTreeSet<(usize, usize)>,
}

impl BridgeDecomposition {
    pub fn retained_bridges(&self) -> impl Iterator<Item = &Bridge> + '_ {
        self.retained.iter().filter_map(|key| self.bridges.get(key))
    }

    pub fn is_retained(&self, j: usize, k: usize) -> bool {
        self.retained.contains(&(j, k))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

mod pair_map {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer, T: Serialize>(
        m: &BTreeMap<(usize, usize), T>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(m.values())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<(usize, usize), Bridge>, D::Error> {
        let v: Vec<Bridge> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|b| ((b.j, b.k), b)).collect())
    }
}

/// Inclusive position interval along an H-path.
pub type Span = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Abutment {
    pub j: usize,
    pub k: usize,
    /// `H^j` vertices adjacent to `s` of bridge `(j, k)`, in path order.
    pub upper: Vec<VertexId>,
    /// `H^j` vertices adjacent to `e` of bridge `(j - 1, k)`, in path order.
    pub lower: Vec<VertexId>,
    pub closure_upper: Vec<VertexId>,
    pub closure_lower: Vec<VertexId>,
    pub closure_total: Vec<VertexId>,
    pub span_upper: Option<Span>,
    pub span_lower: Option<Span>,
    pub span_total: Option<Span>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderViolation {
    Overlap,
    Inversion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderWitness {
    pub j: usize,
    pub first: usize,
    pub second: usize,
    pub first_span: Span,
    pub second_span: Span,
    pub violation: OrderViolation,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TotalOrderReport {
    pub ok: bool,
    pub witnesses: Vec<OrderWitness>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentifiedSubgraph {
    /// Lattice side length; site `(r, c)` is qubit `r * size + c`.
    pub size: usize,
    pub rows: usize,
    pub cols: usize,
    pub vertices: BTreeSet<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
    #[serde(with = "hex_map_serde")]
    pub hex_map: BTreeMap<VertexId, HexNode>,
    pub warnings: Vec<String>,
}

mod hex_map_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        vertex: VertexId,
        node: HexNode,
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<VertexId, HexNode>, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(|(&vertex, &node)| Entry { vertex, node }))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<VertexId, HexNode>, D::Error> {
        let v: Vec<Entry> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|e| (e.vertex, e.node)).collect())
    }
}

impl IdentifiedSubgraph {
    pub fn graph(&self) -> Graph<VertexId> {
        Graph::from_edges(self.vertices.iter().copied(), self.edges.iter().copied())
    }

    pub fn max_degree(&self) -> usize {
        self.graph().max_degree()
    }

    pub fn qubit(&self, v: VertexId) -> usize {
        v.row * self.size + v.col
    }

    pub fn junction(&self, node: HexNode) -> Option<VertexId> {
        self.hex_map.iter().find(|(_, &n)| n == node).map(|(&v, _)| v)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Site labels derived from an H-path set.
struct HLabels {
    /// `(j, position)` for sites on `H^j`.
    on: Vec<Option<(usize, usize)>>,
    /// `j` for sites in `N(H^j)`.
    near: Vec<usize>,
}

impl HLabels {
    fn new(hset: &PathSet, graph: &SiteGraph, work: &mut WorkCounter) -> Result<Self> {
        let n = graph.size() * graph.size();
        let mut on = vec![None; n];
        let mut near = vec![0; n];
        for (slot, p) in hset.paths.iter().enumerate() {
            for (pos, &v) in p.vertices.iter().enumerate() {
                on[graph.index(v)] = Some((slot + 1, pos));
            }
        }
        for (slot, p) in hset.paths.iter().enumerate() {
            let j = slot + 1;
            for &v in &p.vertices {
                work.decomposition += 1;
                for w in graph.neighbors(v) {
                    let i = graph.index(w);
                    match on[i] {
                        Some((jw, _)) if jw != j => {
                            return Err(Error::Topology(format!("H-paths {j} and {jw} touch at {v}-{w}")));
                        }
                        Some(_) => {}
                        None if near[i] != 0 && near[i] != j => {
                            return Err(Error::Topology(format!(
                                "{w} neighbors both H-path {} and H-path {j}",
                                near[i]
                            )));
                        }
                        None => near[i] = j,
                    }
                }
            }
        }
        Ok(Self { on, near })
    }

    fn near(&self, graph: &SiteGraph, v: VertexId) -> usize {
        self.near[graph.index(v)]
    }

    /// Positions on `H^j` adjacent to `v`, sorted.
    fn contacts(&self, graph: &SiteGraph, v: VertexId, j: usize) -> Vec<usize> {
        let mut out: Vec<usize> = graph
            .neighbors(v)
            .filter_map(|w| self.on[graph.index(w)])
            .filter(|&(jw, _)| jw == j)
            .map(|(_, pos)| pos)
            .collect();
        out.sort_unstable();
        out
    }
}

/// The complete bridge decomposition: one bridge per V-path per stripe.
pub fn bridge_decomposition(hset: &PathSet, vset: &PathSet, graph: &SiteGraph) -> Result<BridgeDecomposition> {
    bridge_decomposition_counted(hset, vset, graph, &mut WorkCounter::default())
}

pub fn bridge_decomposition_counted(
    hset: &PathSet,
    vset: &PathSet,
    graph: &SiteGraph,
    work: &mut WorkCounter,
) -> Result<BridgeDecomposition> {
    let labels = HLabels::new(hset, graph, work)?;
    decompose(&labels, hset.len(), vset, graph, work)
}

fn decompose(
    labels: &HLabels,
    rows: usize,
    vset: &PathSet,
    graph: &SiteGraph,
    work: &mut WorkCounter,
) -> Result<BridgeDecomposition> {
    let mut bridges = BTreeMap::new();
    for (slot, path) in vset.paths.iter().enumerate() {
        let k = slot + 1;
        let mut by_label: Vec<Vec<usize>> = vec![Vec::new(); rows + 1];
        for (i, &v) in path.vertices.iter().enumerate() {
            work.decomposition += 1;
            let l = labels.near(graph, v);
            if l != 0 {
                by_label[l].push(i);
            }
        }
        for j in 1..rows {
            let s = *by_label[j].last().ok_or(Error::MissingBridge { j, k })?;
            let after = &by_label[j + 1];
            let e = *after.get(after.partition_point(|&i| i <= s)).ok_or(Error::MissingBridge { j, k })?;
            let vertices = path.vertices[s..=e].to_vec();
            debug_assert!(s < e);
            bridges.insert((j, k), Bridge { j, k, s: vertices[0], e: vertices[vertices.len() - 1], vertices });
        }
    }
    let retained = bridges.keys().copied().collect();
    Ok(BridgeDecomposition { rows, cols: vset.len(), bridges, retained })
}

/// Keeps the bridges with `j + k` even.
pub fn alternating_decomposition(bd: BridgeDecomposition) -> BridgeDecomposition {
    let retained = bd.bridges.keys().copied().filter(|&(j, k)| (j + k) % 2 == 0).collect();
    BridgeDecomposition { retained, ..bd }
}

fn span_of(positions: &[usize]) -> Option<Span> {
    Some((*positions.first()?, *positions.last()?))
}

fn hull(a: Option<Span>, b: Option<Span>) -> Option<Span> {
    match (a, b) {
        (Some(x), Some(y)) => Some((x.0.min(y.0), x.1.max(y.1))),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Abutments of the retained bridges on every H-path, ordered by `j` and
/// then by the start of the total closure.
pub fn compute_abutments(bd: &BridgeDecomposition, hset: &PathSet, graph: &SiteGraph) -> Vec<Abutment> {
    let Ok(labels) = HLabels::new(hset, graph, &mut WorkCounter::default()) else {
        return Vec::new();
    };
    abutments_with(&labels, bd, hset, graph)
}

fn abutments_with(labels: &HLabels, bd: &BridgeDecomposition, hset: &PathSet, graph: &SiteGraph) -> Vec<Abutment> {
    let mut out = Vec::new();
    for (slot, h) in hset.paths.iter().enumerate() {
        let j = slot + 1;
        let mut row = Vec::new();
        for k in 1..=bd.cols {
            let up = bd
                .is_retained(j, k)
                .then(|| bd.bridges.get(&(j, k)))
                .flatten()
                .map(|b| labels.contacts(graph, b.s, j))
                .unwrap_or_default();
            let down = (j > 1 && bd.is_retained(j - 1, k))
                .then(|| bd.bridges.get(&(j - 1, k)))
                .flatten()
                .map(|b| labels.contacts(graph, b.e, j))
                .unwrap_or_default();
            if up.is_empty() && down.is_empty() {
                continue;
            }
            let (span_upper, span_lower) = (span_of(&up), span_of(&down));
            let span_total = hull(span_upper, span_lower);
            let interval = |s: Option<Span>| s.map(|(a, b)| h.vertices[a..=b].to_vec()).unwrap_or_default();
            row.push(Abutment {
                j,
                k,
                upper: up.iter().map(|&p| h.vertices[p]).collect(),
                lower: down.iter().map(|&p| h.vertices[p]).collect(),
                closure_upper: interval(span_upper),
                closure_lower: interval(span_lower),
                closure_total: interval(span_total),
                span_upper,
                span_lower,
                span_total,
            });
        }
        row.sort_by_key(|a| (a.span_total, a.k));
        out.extend(row);
    }
    out
}

/// Checks that total closures along each H-path are pairwise disjoint and
/// appear in V-path order.
pub fn verify_total_order(abutments: &[Abutment]) -> TotalOrderReport {
    let mut by_row: BTreeMap<usize, Vec<(usize, Span)>> = BTreeMap::new();
    for a in abutments {
        if let Some(span) = a.span_total {
            by_row.entry(a.j).or_default().push((a.k, span));
        }
    }
    let mut witnesses = Vec::new();
    for (j, mut row) in by_row {
        row.sort_by_key(|&(k, _)| k);
        for (i, &(k1, s1)) in row.iter().enumerate() {
            for &(k2, s2) in &row[i + 1..] {
                let violation = if s1.1 >= s2.0 && s2.1 >= s1.0 {
                    OrderViolation::Overlap
                } else if s1.0 > s2.1 {
                    OrderViolation::Inversion
                } else {
                    continue;
                };
                witnesses.push(OrderWitness { j, first: k1, second: k2, first_span: s1, second_span: s2, violation });
            }
        }
    }
    TotalOrderReport { ok: witnesses.is_empty(), witnesses }
}

/// Degree of each retained bridge endpoint into the H-paths plus retained
/// bridges, before correction. Endpoints of degree 4 are listed as degree-4
/// errors, those of degree 2 as wires (harmless).
pub fn degree_report(bd: &BridgeDecomposition, hset: &PathSet, graph: &SiteGraph) -> crate::crossing::ErrorReport {
    let mut kept: BTreeSet<VertexId> = hset.paths.iter().flat_map(|p| p.vertices.iter().copied()).collect();
    for b in bd.retained_bridges() {
        kept.extend(b.vertices.iter().copied());
    }
    let mut report = crate::crossing::ErrorReport::default();
    for b in bd.retained_bridges() {
        for x in [b.s, b.e] {
            match graph.neighbors(x).filter(|w| kept.contains(w)).count() {
                0 | 1 => report.degree_1.push(x),
                2 => report.degree_2.push(x),
                3 => {}
                _ => report.degree_4.push(x),
            }
        }
    }
    report
}

/// How a hex node is realized on its H-path.
#[derive(Clone, Copy, Debug)]
enum Attachment {
    /// The bridge endpoint touches one H vertex, which becomes the junction.
    Contact(usize),
    /// The bridge endpoint touches several; it replaces the closure interior.
    Splice { lo: usize, hi: usize, endpoint: VertexId },
    /// No vertical edge: a plain H vertex keeps the node.
    Spacer,
}

fn attachment(labels: &HLabels, bd: &BridgeDecomposition, graph: &SiteGraph, (j, k): HexNode) -> Option<Attachment> {
    let endpoint = if bd.is_retained(j, k) {
        bd.bridges.get(&(j, k)).map(|b| b.s)
    } else if j > 1 && bd.is_retained(j - 1, k) {
        bd.bridges.get(&(j - 1, k)).map(|b| b.e)
    } else {
        return Some(Attachment::Spacer);
    }?;
    let contacts = labels.contacts(graph, endpoint, j);
    match contacts.as_slice() {
        [] => None,
        [p] => Some(Attachment::Contact(*p)),
        [lo, .., hi] => Some(Attachment::Splice { lo: *lo, hi: *hi, endpoint }),
    }
}

/// Result of junction correction: the rebuilt H-paths (trimmed to their
/// first and last junctions) and the junction vertex of every hex node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correction {
    pub revised: PathSet,
    #[serde(with = "junction_serde")]
    pub junctions: BTreeMap<HexNode, VertexId>,
    pub warnings: Vec<String>,
}

mod junction_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<HexNode, VertexId>, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(m.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<HexNode, VertexId>, D::Error> {
        let v: Vec<(HexNode, VertexId)> = Vec::deserialize(d)?;
        Ok(v.into_iter().collect())
    }
}

/// Rebuilds each H-path around its junctions.
///
/// A bridge endpoint touching a single H vertex leaves the path alone. One
/// touching several has the closure interior removed and is spliced between
/// the closure ends. Nodes without a vertical edge take the first free path
/// vertex after the previous junction region.
pub fn correct_junctions(
    hset: &PathSet,
    bd: &BridgeDecomposition,
    graph: &SiteGraph,
    work: &mut WorkCounter,
) -> Result<Correction> {
    let labels = HLabels::new(hset, graph, &mut WorkCounter::default())?;
    let lattice = HexLattice::new(bd.rows, bd.cols);
    let mut revised = Vec::with_capacity(hset.len());
    let mut junctions = BTreeMap::new();
    let mut warnings = Vec::new();
    for (slot, h) in hset.paths.iter().enumerate() {
        let j = slot + 1;
        work.correction += h.len() as u64;
        let nodes: Vec<HexNode> = (1..=bd.cols).map(|k| (j, k)).filter(|&n| lattice.contains(n)).collect();
        let mut atts = Vec::with_capacity(nodes.len());
        for &node in &nodes {
            let a = attachment(&labels, bd, graph, node).ok_or(Error::Junction {
                j,
                k: node.1,
                detail: "bridge endpoint has no neighbor on the H-path".into(),
            })?;
            atts.push(a);
        }
        // spans of attachments in original positions, checked for order
        let mut prev_hi: Option<usize> = None;
        let mut prev_k = 0;
        for (&(_, k), a) in nodes.iter().zip(&atts) {
            let span = match *a {
                Attachment::Contact(p) => (p, p),
                Attachment::Splice { lo, hi, .. } => (lo, hi),
                Attachment::Spacer => continue,
            };
            if prev_hi.is_some_and(|h| span.0 <= h) {
                return Err(Error::TotalOrder {
                    j,
                    detail: format!("junction regions of V-paths {prev_k} and {k} are out of order"),
                });
            }
            prev_hi = Some(span.1);
            prev_k = k;
        }
        // rebuild the path with splices; record index spans in the new path
        let mut splice_at: BTreeMap<usize, (usize, VertexId)> = BTreeMap::new();
        for a in &atts {
            if let Attachment::Splice { lo, hi, endpoint } = *a {
                splice_at.insert(lo, (hi, endpoint));
            }
        }
        let mut path = Vec::with_capacity(h.len());
        let mut new_index = vec![usize::MAX; h.len()];
        let mut endpoint_index = BTreeMap::new();
        let mut pos = 0;
        while pos < h.len() {
            new_index[pos] = path.len();
            path.push(h.vertices[pos]);
            if let Some(&(hi, endpoint)) = splice_at.get(&pos) {
                endpoint_index.insert(endpoint, path.len());
                path.push(endpoint);
                pos = hi;
            } else {
                pos += 1;
            }
        }
        // junction index and occupied index span for each node
        let mut chosen: Vec<Option<(usize, Span)>> = atts
            .iter()
            .map(|a| match *a {
                Attachment::Contact(p) => Some((new_index[p], (new_index[p], new_index[p]))),
                Attachment::Splice { lo, hi, endpoint } => {
                    Some((endpoint_index[&endpoint], (new_index[lo], new_index[hi])))
                }
                Attachment::Spacer => None,
            })
            .collect();
        for i in 0..atts.len() {
            if chosen[i].is_some() {
                continue;
            }
            let before = chosen[..i].iter().rev().flatten().next().map(|c| c.1 .1);
            let after = chosen[i + 1..].iter().flatten().next().map(|c| c.1 .0);
            let candidate = match (before, after) {
                (Some(b), _) => b + 1,
                (None, Some(a)) => a.wrapping_sub(1),
                (None, None) => 0,
            };
            let fits = candidate < path.len()
                && before.is_none_or(|b| candidate > b)
                && after.is_none_or(|a| candidate < a);
            if !fits {
                return Err(Error::NoSpacer { j, k: nodes[i].1 });
            }
            chosen[i] = Some((candidate, (candidate, candidate)));
        }
        let indices: Vec<usize> = chosen.iter().map(|c| c.expect("all nodes placed").0).collect();
        let (first, last) = match (indices.iter().min(), indices.iter().max()) {
            (Some(&f), Some(&l)) => (f, l),
            _ => (0, path.len().saturating_sub(1)),
        };
        for (&node, &i) in nodes.iter().zip(&indices) {
            junctions.insert(node, path[i]);
        }
        let trimmed = if path.is_empty() { Vec::new() } else { path[first..=last].to_vec() };
        revised.push(CrossingPath { orientation: Orientation::H, index: j, vertices: trimmed });
    }
    for b in bd.retained_bridges() {
        if b.vertices.len() == 2 {
            let on_h = |v: VertexId| revised.iter().any(|p| p.vertices.contains(&v));
            if on_h(b.s) && on_h(b.e) {
                warnings.push(format!("H-H contact {}-{} through spliced bridge ({}, {})", b.s, b.e, b.j, b.k));
            }
        }
    }
    let revised = PathSet { orientation: Orientation::H, provenance: hset.provenance, found: hset.found, paths: revised };
    Ok(Correction { revised, junctions, warnings })
}

/// Kept vertices are the revised H-paths plus the retained bridges; edges
/// are those of the lattice induced on them.
pub fn extract_hex_minor(
    correction: &Correction,
    bd: &BridgeDecomposition,
    graph: &SiteGraph,
    work: &mut WorkCounter,
) -> IdentifiedSubgraph {
    let mut vertices: BTreeSet<VertexId> =
        correction.revised.paths.iter().flat_map(|p| p.vertices.iter().copied()).collect();
    for b in bd.retained_bridges() {
        vertices.extend(b.vertices.iter().copied());
    }
    work.correction += vertices.len() as u64;
    let edges = vertices
        .iter()
        .flat_map(|&v| graph.neighbors(v).filter(move |&w| v < w).map(move |w| (v, w)))
        .filter(|(_, w)| vertices.contains(w))
        .collect();
    IdentifiedSubgraph {
        size: graph.size(),
        rows: bd.rows,
        cols: bd.cols,
        hex_map: correction.junctions.iter().map(|(&n, &v)| (v, n)).collect(),
        vertices,
        edges,
        warnings: correction.warnings.clone(),
    }
}

/// Junction correction followed by extraction; the revised H-paths and the
/// identified subgraph.
pub fn correct_local_errors(
    hset: &PathSet,
    bd: &BridgeDecomposition,
    graph: &SiteGraph,
) -> Result<(PathSet, IdentifiedSubgraph)> {
    let mut work = WorkCounter::default();
    let c = correct_junctions(hset, bd, graph, &mut work)?;
    let sub = extract_hex_minor(&c, bd, graph, &mut work);
    Ok((c.revised, sub))
}

/// True iff suppressing the degree-2 vertices of `sub` gives the brick-wall
/// lattice with `rows x cols` junctions, matched through `hex_map`.
pub fn verify_topological_minor(sub: &IdentifiedSubgraph, rows: usize, cols: usize) -> bool {
    minor_mismatch(sub, rows, cols).is_none()
}

/// The first reason `sub` fails to be a subdivision of the target, if any.
pub fn minor_mismatch(sub: &IdentifiedSubgraph, rows: usize, cols: usize) -> Option<String> {
    let target = HexLattice::new(rows, cols).graph();
    let g = sub.graph();
    if g.vertex_count() != sub.vertices.len() {
        return Some("edge endpoint outside the vertex set".into());
    }
    let mut seen_nodes = BTreeSet::new();
    for (&v, &node) in &sub.hex_map {
        if !g.contains(v) {
            return Some(format!("junction {v} is not kept"));
        }
        if !target.contains(node) {
            return Some(format!("junction {v} maps to ({}, {}) outside the target", node.0, node.1));
        }
        if !seen_nodes.insert(node) {
            return Some(format!("node ({}, {}) has two junctions", node.0, node.1));
        }
    }
    if seen_nodes.len() != target.vertex_count() {
        return Some(format!("{} of {} target nodes have junctions", seen_nodes.len(), target.vertex_count()));
    }
    for v in g.vertices() {
        if !sub.hex_map.contains_key(&v) && g.degree(v) != 2 {
            return Some(format!("non-junction {v} has degree {}", g.degree(v)));
        }
    }
    let mut covered = BTreeSet::new();
    for (&v, &node) in &sub.hex_map {
        let mut reached = BTreeSet::new();
        for first in g.neighbors(v) {
            let (mut prev, mut cur) = (v, first);
            while !sub.hex_map.contains_key(&cur) {
                covered.insert(cur);
                let next = g.neighbors(cur).find(|&w| w != prev).expect("degree-2 vertex");
                prev = cur;
                cur = next;
            }
            if cur == v {
                return Some(format!("junction {v} has a loop"));
            }
            if !reached.insert(sub.hex_map[&cur]) {
                return Some(format!("junction {v} reaches {} twice", cur));
            }
        }
        let expected: BTreeSet<HexNode> = target.neighbors(node).collect();
        if reached != expected {
            return Some(format!("junction {v} at ({}, {}) has wrong neighbors", node.0, node.1));
        }
    }
    let free = g.vertices().filter(|v| !sub.hex_map.contains_key(v) && !covered.contains(v)).count();
    if free > 0 {
        return Some(format!("{free} vertices on cycles without junctions"));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossing::{find_h_paths, find_v_paths, Provenance};
    use crate::hexlattice::hex_lattice_graph;
    use crate::lattice::{grid_to_graph, OccupancyGrid};

    fn vid(r: usize, c: usize) -> VertexId {
        VertexId::new(r, c)
    }

    fn set(orientation: Orientation, paths: Vec<Vec<VertexId>>) -> PathSet {
        let paths = paths
            .into_iter()
            .enumerate()
            .map(|(i, vertices)| CrossingPath { orientation, index: i + 1, vertices })
            .collect();
        PathSet { orientation, provenance: Provenance::PlainRhwf, found: 0, paths }
    }

    fn row(r: usize, size: usize) -> Vec<VertexId> {
        (0..size).map(|c| vid(r, c)).collect()
    }

    fn col(c: usize, size: usize) -> Vec<VertexId> {
        (0..size).map(|r| vid(r, c)).collect()
    }

    #[test]
    fn full_grid_bridges_are_column_segments() {
        let g = grid_to_graph(&OccupancyGrid::full(9));
        let h = set(Orientation::H, vec![row(0, 9), row(3, 9), row(6, 9)]);
        let v = set(Orientation::V, vec![col(0, 9)]);
        let bd = bridge_decomposition(&h, &v, &g).unwrap();
        assert_eq!(bd.bridges[&(1, 1)].vertices, vec![vid(1, 0), vid(2, 0)]);
        assert_eq!(bd.bridges[&(2, 1)].vertices, vec![vid(4, 0), vid(5, 0)]);
        assert_eq!(bd.bridges.len(), 2);
    }

    #[test]
    fn single_stripe_bridge_touches_both_paths() {
        let g = grid_to_graph(&OccupancyGrid::full(6));
        let h = set(Orientation::H, vec![row(0, 6), row(4, 6)]);
        let v = set(Orientation::V, vec![col(2, 6)]);
        let bd = bridge_decomposition(&h, &v, &g).unwrap();
        let b = &bd.bridges[&(1, 1)];
        assert!(g.has_edge(b.s, vid(0, 2)));
        assert!(g.has_edge(b.e, vid(4, 2)));
    }

    fn occupied_by(size: usize, paths: &[&Vec<VertexId>]) -> SiteGraph {
        let mut grid = OccupancyGrid::from_fn(size, |_| false);
        for v in paths.iter().flat_map(|p| p.iter()) {
            grid.set(*v, true);
        }
        grid_to_graph(&grid)
    }

    #[test]
    fn zigzag_start_is_last_contact() {
        // V-path climbs, comes back down next to H^1, then climbs for good
        let h1 = row(0, 8);
        let h2 = row(7, 8);
        let mut v1 = vec![vid(0, 1), vid(1, 1), vid(2, 1), vid(3, 1), vid(3, 2), vid(3, 3), vid(2, 3), vid(1, 3)];
        v1.extend([vid(1, 4), vid(1, 5)]);
        v1.extend((2..8).map(|r| vid(r, 5)));
        let g = occupied_by(8, &[&h1, &h2, &v1]);
        let h = set(Orientation::H, vec![h1, h2]);
        let v = set(Orientation::V, vec![v1]);
        let bd = bridge_decomposition(&h, &v, &g).unwrap();
        let b = &bd.bridges[&(1, 1)];
        assert_eq!(b.s, vid(1, 5));
        assert_eq!(b.e, vid(6, 5));
        assert_eq!(b.vertices.len(), 6);
    }

    #[test]
    fn parity_retention() {
        let g = grid_to_graph(&OccupancyGrid::full(9));
        let h = set(Orientation::H, vec![row(0, 9), row(4, 9), row(8, 9)]);
        let v = set(Orientation::V, vec![col(0, 9), col(4, 9), col(8, 9)]);
        let bd = alternating_decomposition(bridge_decomposition(&h, &v, &g).unwrap());
        assert_eq!(bd.bridges.len(), 6);
        assert_eq!(bd.retained, BTreeSet::from([(1, 1), (1, 3), (2, 2)]));
    }

    #[test]
    fn empty_inputs() {
        let g = grid_to_graph(&OccupancyGrid::full(4));
        let h = set(Orientation::H, vec![]);
        let v = set(Orientation::V, vec![]);
        let bd = bridge_decomposition(&h, &v, &g).unwrap();
        assert!(compute_abutments(&bd, &h, &g).is_empty());
        assert!(verify_total_order(&[]).ok);
        let (_, sub) = correct_local_errors(&h, &bd, &g).unwrap();
        assert!(sub.vertices.is_empty());
    }

    #[test]
    fn overlapping_closures_are_reported() {
        let mk = |k, span: Span| Abutment {
            j: 1,
            k,
            upper: vec![],
            lower: vec![],
            closure_upper: vec![],
            closure_lower: vec![],
            closure_total: vec![],
            span_upper: Some(span),
            span_lower: None,
            span_total: Some(span),
        };
        let r = verify_total_order(&[mk(1, (2, 5)), mk(2, (5, 7))]);
        assert!(!r.ok);
        assert_eq!(r.witnesses[0].violation, OrderViolation::Overlap);
        let r = verify_total_order(&[mk(1, (6, 7)), mk(2, (1, 3))]);
        assert_eq!(r.witnesses[0].violation, OrderViolation::Inversion);
        assert!(verify_total_order(&[mk(1, (0, 1)), mk(2, (3, 3))]).ok);
    }

    #[test]
    fn subdivided_hexagon_is_a_minor() {
        for (rows, cols) in [(2, 3), (3, 4), (4, 4)] {
            let target = hex_lattice_graph(rows, cols);
            // place node (j,k) at site (2j, 2k) and subdivide every edge once
            let at = |(j, k): HexNode| vid(2 * j, 2 * k);
            let mut sub = IdentifiedSubgraph { rows, cols, ..Default::default() };
            for n in target.vertices() {
                sub.vertices.insert(at(n));
                sub.hex_map.insert(at(n), n);
            }
            for (a, b) in target.edges() {
                let (va, vb) = (at(a), at(b));
                let mid = vid((va.row + vb.row) / 2, (va.col + vb.col) / 2);
                sub.vertices.insert(mid);
                sub.edges.push((va, mid));
                sub.edges.push((mid, vb));
            }
            assert!(verify_topological_minor(&sub, rows, cols), "{:?}", minor_mismatch(&sub, rows, cols));
            let mut bad = sub.clone();
            let (a, b) = (at((1, 1)), at((2, 2)));
            bad.edges.push((a, b));
            assert!(!verify_topological_minor(&bad, rows, cols));
            let mut bad = sub.clone();
            bad.hex_map.pop_first();
            assert!(!verify_topological_minor(&bad, rows, cols));
        }
    }

    #[test]
    fn full_grid_pipeline_gives_brick_wall() {
        let g = grid_to_graph(&OccupancyGrid::full(9));
        let h = find_h_paths(&g);
        let v = find_v_paths(&g);
        assert_eq!((h.len(), v.len()), (3, 3));
        let bd = alternating_decomposition(bridge_decomposition(&h, &v, &g).unwrap());
        let ab = compute_abutments(&bd, &h, &g);
        assert!(verify_total_order(&ab).ok);
        let (revised, sub) = correct_local_errors(&h, &bd, &g).unwrap();
        assert_eq!(revised.len(), 3);
        assert!(sub.max_degree() <= 3);
        assert!(verify_topological_minor(&sub, 3, 3), "{:?}", minor_mismatch(&sub, 3, 3));
        // straight bridges touch straight rows at one vertex
        assert!(ab.iter().all(|a| a.upper.len() + a.lower.len() == 1));
        assert!(ab.iter().all(|a| a.closure_total.len() == 1));
    }

    #[test]
    fn degree_four_endpoint_is_spliced() {
        // H^2 caps the top of the first bridge so e touches three H vertices
        let h1 = row(0, 9);
        let mut h2 = vec![vid(4, 0), vid(4, 1), vid(4, 2), vid(5, 2), vid(5, 3), vid(5, 4)];
        h2.extend((4..9).map(|c| vid(4, c)));
        let (v1, v2, v3) = (col(3, 9), col(6, 9), col(8, 9));
        let g = occupied_by(9, &[&h1, &h2, &v1, &v2, &v3]);
        let h = set(Orientation::H, vec![h1, h2.clone()]);
        let v = set(Orientation::V, vec![v1, v2, v3]);
        let bd = alternating_decomposition(bridge_decomposition(&h, &v, &g).unwrap());
        let b = &bd.bridges[&(1, 1)];
        assert_eq!(b.e, vid(4, 3));
        let report = degree_report(&bd, &h, &g);
        assert_eq!(report.degree_4, vec![vid(4, 3)]);
        let ab = compute_abutments(&bd, &h, &g);
        let a = ab.iter().find(|a| (a.j, a.k) == (2, 1)).unwrap();
        assert_eq!(a.lower, vec![vid(4, 2), vid(5, 3), vid(4, 4)]);
        assert_eq!(a.closure_lower, h2[2..=6].to_vec());
        assert!(verify_total_order(&ab).ok);
        let mut work = WorkCounter::default();
        let c = correct_junctions(&h, &bd, &g, &mut work).unwrap();
        assert_eq!(c.junctions[&(2, 1)], vid(4, 3));
        assert_eq!(c.junctions[&(1, 2)], vid(0, 4));
        assert_eq!(c.junctions[&(2, 2)], vid(4, 5));
        let sub = extract_hex_minor(&c, &bd, &g, &mut work);
        // boundary node: the tail left of it is trimmed
        let nbrs: Vec<_> = sub.graph().neighbors(vid(4, 3)).collect();
        assert_eq!(nbrs, vec![vid(3, 3), vid(4, 4)]);
        assert!(!sub.vertices.contains(&vid(5, 3)));
        assert!(sub.max_degree() <= 3);
        assert!(verify_topological_minor(&sub, 2, 3), "{:?}", minor_mismatch(&sub, 2, 3));
    }
}
