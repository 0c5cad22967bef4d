//! Graph states under Pauli measurement with local-Clifford byproducts.
//!
//! A [`GraphState`] stands for `(⊗_v C_v)|G>`. Measurement rules act on
//! `|G>`, so measuring `P` on qubit `v` means measuring `C_v P C_v†` on the
//! physical state. Byproducts `U` are absorbed as `C_w <- C_w ∘ U`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::clifford::{Clifford, Pauli, SignedPauli};
use super::tableau::{stabilizer_groups_equal, tableau_from_graph, PauliString, StabilizerTableau};
use crate::bridge::{minor_mismatch, IdentifiedSubgraph};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hexlattice::HexLattice;
use crate::lattice::{grid_to_graph, mix_seed, OccupancyGrid};
use crate::pipeline::run_pipeline;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Y,
    Z,
}

impl Basis {
    pub fn pauli(self) -> Pauli {
        match self {
            Basis::Y => Pauli::Y,
            Basis::Z => Pauli::Z,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn from_minus(minus: bool) -> Self {
        if minus {
            Outcome::Minus
        } else {
            Outcome::Plus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Outcome::Minus
    }
}

impl From<Outcome> for i8 {
    fn from(o: Outcome) -> i8 {
        match o {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Outcome {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Outcome::Plus),
            -1 => Ok(Outcome::Minus),
            _ => Err(format!("outcome must be +1 or -1, got {v}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measurement {
    pub qubit: usize,
    pub basis: Basis,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub measurements: Vec<Measurement>,
}

impl MeasurementRecord {
    pub fn len(&self) -> usize {
        self.measurements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measurements.is_empty()
    }

    pub fn count(&self, basis: Basis) -> usize {
        self.measurements.iter().filter(|m| m.basis == basis).count()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphState {
    graph: Graph<usize>,
    frame: BTreeMap<usize, Clifford>,
}

pub fn graph_state_from(graph: &Graph<usize>) -> GraphState {
    GraphState { graph: graph.clone(), frame: graph.vertices().map(|v| (v, Clifford::IDENTITY)).collect() }
}

/// The graph state of the occupied sites; site `(r, c)` is qubit `r * L + c`.
pub fn graph_state_from_grid(grid: &OccupancyGrid) -> GraphState {
    let sites = grid_to_graph(grid);
    let index = |v| sites.index(v);
    let g = Graph::from_edges(sites.vertices().map(index), sites.edges().map(|(a, b)| (index(a), index(b))));
    graph_state_from(&g)
}

impl GraphState {
    pub fn graph(&self) -> &Graph<usize> {
        &self.graph
    }

    pub fn frame(&self, q: usize) -> Option<Clifford> {
        self.frame.get(&q).copied()
    }

    pub fn frames(&self) -> &BTreeMap<usize, Clifford> {
        &self.frame
    }

    pub fn is_live(&self, q: usize) -> bool {
        self.graph.contains(q)
    }

    pub fn live_qubits(&self) -> Vec<usize> {
        self.graph.vertices().collect()
    }

    /// Applies the physical unitary `u` to qubit `q`.
    pub fn apply_local(&mut self, q: usize, u: Clifford) -> Result<()> {
        let c = self.frame.get_mut(&q).ok_or(Error::NotLive(q))?;
        *c = u.compose(*c);
        Ok(())
    }

    /// The physical observable `C_q P C_q†` that realizes measuring `basis`
    /// on the underlying graph state.
    pub fn observable(&self, q: usize, basis: Basis) -> Result<SignedPauli> {
        let c = self.frame(q).ok_or(Error::NotLive(q))?;
        Ok(c.conjugate(SignedPauli::plus(basis.pauli())))
    }

    fn absorb(&mut self, q: usize, u: Clifford) {
        if let Some(c) = self.frame.get_mut(&q) {
            *c = c.compose(u);
        }
    }

    /// Z measurement: removes `q`; outcome `-1` leaves `Z` on each former
    /// neighbor.
    pub fn measure_z(&mut self, q: usize, outcome: Outcome) -> Result<()> {
        let nbrs = self.graph.remove_vertex(q).ok_or(Error::NotLive(q))?;
        self.frame.remove(&q);
        if outcome.is_minus() {
            for w in nbrs {
                self.absorb(w, Clifford::Z);
            }
        }
        Ok(())
    }

    /// Y measurement on a degree-2 vertex: toggles the edge between its
    /// neighbors and removes it; the neighbors pick up `S` for outcome `+1`
    /// and `S†` for `-1`.
    pub fn measure_y_deg2(&mut self, q: usize, outcome: Outcome) -> Result<()> {
        if !self.is_live(q) {
            return Err(Error::NotLive(q));
        }
        let degree = self.graph.degree(q);
        if degree != 2 {
            return Err(Error::WrongDegree { vertex: q, degree });
        }
        let nbrs: Vec<usize> = self.graph.remove_vertex(q).expect("live").into_iter().collect();
        self.frame.remove(&q);
        self.graph.toggle_edge(nbrs[0], nbrs[1]);
        let u = if outcome.is_minus() { Clifford::S_DAG } else { Clifford::S };
        for w in nbrs {
            self.absorb(w, u);
        }
        Ok(())
    }

    pub fn measure(&mut self, q: usize, basis: Basis, outcome: Outcome) -> Result<()> {
        match basis {
            Basis::Z => self.measure_z(q, outcome),
            Basis::Y => self.measure_y_deg2(q, outcome),
        }
    }
}

/// Outcome for `qubit` derived from `seed`.
pub fn seeded_outcome(seed: u64, qubit: usize) -> Outcome {
    Outcome::from_minus(mix_seed(&[seed, qubit as u64]) & 1 == 1)
}

/// The measurements that reduce `state` to the junctions of `sub`: Z on
/// every qubit outside `sub`, Z on dangling non-junction vertices, then Y
/// along each junction-to-junction chain from its far end back.
pub fn measurement_plan(state: &GraphState, sub: &IdentifiedSubgraph) -> Result<Vec<(usize, Basis)>> {
    let kept: BTreeSet<usize> = sub.vertices.iter().map(|&v| sub.qubit(v)).collect();
    let junctions: BTreeSet<usize> = sub.hex_map.keys().map(|&v| sub.qubit(v)).collect();
    if let Some(&q) = kept.iter().find(|&&q| !state.is_live(q)) {
        return Err(Error::NotLive(q));
    }
    let mut plan: Vec<(usize, Basis)> =
        state.graph.vertices().filter(|q| !kept.contains(q)).map(|q| (q, Basis::Z)).collect();
    let mut g = state.graph.induced(&kept);
    loop {
        let dangling: Vec<usize> = g.vertices().filter(|&q| !junctions.contains(&q) && g.degree(q) <= 1).collect();
        if dangling.is_empty() {
            break;
        }
        for q in dangling {
            g.remove_vertex(q);
            plan.push((q, Basis::Z));
        }
    }
    let mut done = BTreeSet::new();
    for &start in &junctions {
        let firsts: Vec<usize> = g.neighbors(start).collect();
        for first in firsts {
            if junctions.contains(&first) || done.contains(&first) {
                continue;
            }
            let mut chain = Vec::new();
            let (mut prev, mut cur) = (start, first);
            while !junctions.contains(&cur) {
                let degree = g.degree(cur);
                if degree != 2 {
                    return Err(Error::WrongDegree { vertex: cur, degree });
                }
                chain.push(cur);
                let next = g.neighbors(cur).find(|&w| w != prev).expect("degree 2");
                prev = cur;
                cur = next;
            }
            done.extend(chain.iter().copied());
            plan.extend(chain.into_iter().rev().map(|q| (q, Basis::Y)));
        }
    }
    if let Some(q) = g.vertices().find(|q| !junctions.contains(q) && !done.contains(q)) {
        return Err(Error::Topology(format!("qubit {q} lies on a cycle without junctions")));
    }
    Ok(plan)
}

fn run_plan(
    mut state: GraphState,
    sub: &IdentifiedSubgraph,
    mut before: impl FnMut(&GraphState, usize, Basis) -> Result<Outcome>,
) -> Result<(GraphState, MeasurementRecord)> {
    let plan = measurement_plan(&state, sub)?;
    let mut record = MeasurementRecord { measurements: Vec::with_capacity(plan.len()) };
    for (qubit, basis) in plan {
        let outcome = before(&state, qubit, basis)?;
        state.measure(qubit, basis, outcome)?;
        record.measurements.push(Measurement { qubit, basis, outcome });
    }
    Ok((state, record))
}

fn contract_impl(
    state: GraphState,
    sub: &IdentifiedSubgraph,
    before: impl FnMut(&GraphState, usize, Basis) -> Result<Outcome>,
) -> Result<(GraphState, MeasurementRecord)> {
    let (state, record) = run_plan(state, sub, before)?;
    if !is_hex_target(&state, sub) {
        return Err(Error::Topology("contracted graph differs from the hexagonal target".into()));
    }
    Ok((state, record))
}

/// The brick-wall lattice relabeled onto qubits through `sub.hex_map`, or
/// `None` when some hexagonal node has no junction.
pub fn hex_target_graph(sub: &IdentifiedSubgraph) -> Option<Graph<usize>> {
    let target = HexLattice::new(sub.rows, sub.cols).graph();
    let relabeled = Graph::from_edges(
        target.vertices().filter_map(|n| sub.junction(n).map(|v| sub.qubit(v))),
        target.edges().filter_map(|(a, b)| Some((sub.qubit(sub.junction(a)?), sub.qubit(sub.junction(b)?)))),
    );
    (relabeled.vertex_count() == target.vertex_count()).then_some(relabeled)
}

/// Whether the live graph is the brick-wall lattice under `sub.hex_map`.
pub fn is_hex_target(state: &GraphState, sub: &IdentifiedSubgraph) -> bool {
    hex_target_graph(sub).is_some_and(|g| &g == state.graph())
}

/// Runs both measurement stages with outcomes derived from `seed`.
pub fn contract_to_hexagonal(
    state: GraphState,
    sub: &IdentifiedSubgraph,
    seed: u64,
) -> Result<(GraphState, MeasurementRecord)> {
    contract_impl(state, sub, |_, q, _| Ok(seeded_outcome(seed, q)))
}

/// As [`contract_to_hexagonal`] with outcomes chosen per qubit.
pub fn contract_to_hexagonal_with(
    state: GraphState,
    sub: &IdentifiedSubgraph,
    mut outcome: impl FnMut(usize) -> Outcome,
) -> Result<(GraphState, MeasurementRecord)> {
    contract_impl(state, sub, |_, q, _| Ok(outcome(q)))
}

/// A stabilizer tableau tracking the physical state alongside a
/// [`GraphState`].
#[derive(Clone, Debug)]
pub struct TableauMirror {
    tableau: StabilizerTableau,
    index: BTreeMap<usize, usize>,
    consistent: bool,
}

impl TableauMirror {
    pub fn new(state: &GraphState) -> Self {
        let index: BTreeMap<usize, usize> = state.graph.vertices().enumerate().map(|(i, q)| (q, i)).collect();
        let mut tableau = tableau_from_graph(&state.graph);
        for (q, &c) in &state.frame {
            if !c.is_identity() {
                tableau.conjugate_qubit(index[q], c);
            }
        }
        Self { tableau, index, consistent: true }
    }

    pub fn tableau(&self) -> &StabilizerTableau {
        &self.tableau
    }

    /// False once a deterministic outcome contradicted a recorded one.
    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    /// Performs on the tableau the physical measurement that `state` is about
    /// to undergo, forcing the outcome implied by `outcome`.
    pub fn record(&mut self, state: &GraphState, q: usize, basis: Basis, outcome: Outcome) -> Result<()> {
        let obs = state.observable(q, basis)?;
        let dense = *self.index.get(&q).ok_or(Error::NotLive(q))?;
        let pauli = PauliString::single(self.tableau.qubits(), dense, obs.pauli);
        let want = outcome.is_minus() ^ obs.neg;
        let got = self.tableau.measure(&pauli, || want);
        if got.minus != want {
            self.consistent = false;
        }
        Ok(())
    }

    /// Whether the tableau, restricted to the live qubits with their frames
    /// undone, is the graph state of `state`'s graph.
    pub fn agrees_with(&self, state: &GraphState) -> Result<bool> {
        let live = state.live_qubits();
        let dense: Vec<usize> = live.iter().map(|q| self.index.get(q).copied().ok_or(Error::NotLive(*q))).collect::<Result<_>>()?;
        let Ok(mut rest) = self.tableau.restrict_to(&dense) else {
            return Ok(false);
        };
        for (i, q) in live.iter().enumerate() {
            let c = state.frame(*q).expect("live qubit has a frame");
            if !c.is_identity() {
                rest.conjugate_qubit(i, c.inverse());
            }
        }
        Ok(stabilizer_groups_equal(&rest, &tableau_from_graph(&state.graph)))
    }
}

/// Largest number of occupied sites [`verify_concentration`] accepts.
pub const TABLEAU_QUBIT_LIMIT: usize = 400;

/// End-to-end check of the concentration on a stabilizer simulation of the
/// whole faulty lattice.
pub fn verify_concentration(grid: &OccupancyGrid, seed: u64) -> Result<bool> {
    let n = grid.occupied_count();
    if n > TABLEAU_QUBIT_LIMIT {
        return Err(Error::SizeLimit { size: n, limit: TABLEAU_QUBIT_LIMIT });
    }
    let out = run_pipeline(grid)?;
    Ok(verify_subgraph(grid, &out.subgraph, seed)?.passed)
}

/// Outcome of [`verify_subgraph`]. On failure the two stabilizer groups are
/// given in canonical form, one generator per line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub reason: Option<String>,
    pub expected: String,
    pub actual: String,
}

impl VerifyReport {
    fn fail(reason: String) -> Self {
        Self { passed: false, reason: Some(reason), expected: String::new(), actual: String::new() }
    }
}

/// Measures the grid's graph state onto `sub` on a tableau and compares the
/// result, frames undone, with the graph state of the hexagonal target.
pub fn verify_subgraph(grid: &OccupancyGrid, sub: &IdentifiedSubgraph, seed: u64) -> Result<VerifyReport> {
    let n = grid.occupied_count();
    if n > TABLEAU_QUBIT_LIMIT {
        return Err(Error::SizeLimit { size: n, limit: TABLEAU_QUBIT_LIMIT });
    }
    if let Some(reason) = minor_mismatch(sub, sub.rows, sub.cols) {
        return Ok(VerifyReport::fail(reason));
    }
    let physical = grid_to_graph(grid).to_graph().induced(&sub.vertices);
    if physical != sub.graph() {
        return Ok(VerifyReport::fail("subgraph edges differ from the lattice".into()));
    }
    let Some(target) = hex_target_graph(sub) else {
        return Ok(VerifyReport::fail("some hexagonal node has no junction".into()));
    };
    let state = graph_state_from_grid(grid);
    let mut mirror = TableauMirror::new(&state);
    let run = run_plan(state, sub, |s, q, basis| {
        let o = seeded_outcome(seed, q);
        mirror.record(s, q, basis, o)?;
        Ok(o)
    });
    let final_state = match run {
        Ok((s, _)) => s,
        Err(e @ (Error::WrongDegree { .. } | Error::Topology(_) | Error::NotLive(_))) => {
            return Ok(VerifyReport::fail(e.to_string()))
        }
        Err(e) => return Err(e),
    };
    if !mirror.is_consistent() {
        return Ok(VerifyReport::fail("a deterministic outcome contradicted the recorded one".into()));
    }
    let live = final_state.live_qubits();
    if !live.iter().copied().eq(target.vertices()) {
        return Ok(VerifyReport::fail("surviving qubits differ from the hexagonal junctions".into()));
    }
    let dense: Vec<usize> = live.iter().map(|q| mirror.index[q]).collect();
    let mut actual = mirror.tableau.restrict_to(&dense)?;
    for (i, q) in live.iter().enumerate() {
        let c = final_state.frame(*q).expect("live qubit has a frame");
        if !c.is_identity() {
            actual.conjugate_qubit(i, c.inverse());
        }
    }
    let expected = tableau_from_graph(&target);
    let passed = stabilizer_groups_equal(&actual, &expected);
    let text = |t: &StabilizerTableau| t.canonical().iter().map(|p| format!("{p}\n")).collect::<String>();
    Ok(VerifyReport {
        passed,
        reason: (!passed).then(|| "stabilizer groups differ".into()),
        expected: text(&expected),
        actual: text(&actual),
    })
}

/// Contracts `state` onto `sub` while mirroring every measurement on a
/// tableau, then compares the two descriptions.
pub fn verify_contraction(
    state: GraphState,
    sub: &IdentifiedSubgraph,
    mut outcome: impl FnMut(usize) -> Outcome,
) -> Result<bool> {
    let mut mirror = TableauMirror::new(&state);
    let (final_state, _) = contract_impl(state, sub, |s, q, basis| {
        let o = outcome(q);
        mirror.record(s, q, basis, o)?;
        Ok(o)
    })?;
    Ok(mirror.is_consistent() && mirror.agrees_with(&final_state)?)
}
