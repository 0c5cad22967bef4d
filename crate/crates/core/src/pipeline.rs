//! The classical stage end to end: paths, bridges, junction correction and
//! the identified subgraph.

use serde::{Deserialize, Serialize};

use crate::bridge::{
    alternating_decomposition, bridge_decomposition_counted, compute_abutments, correct_junctions,
    extract_hex_minor, minor_mismatch, verify_total_order, Abutment, BridgeDecomposition, Correction,
    IdentifiedSubgraph, TotalOrderReport,
};
use crate::crossing::{enumerate_v_paths_counted, find_h_paths_counted, retain_every_third, validate_paths, ErrorReport, PathSet};
use crate::error::{Error, Result};
use crate::lattice::{grid_to_graph, OccupancyGrid};
use crate::work::WorkCounter;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineOutput {
    pub grid: OccupancyGrid,
    pub h_paths: PathSet,
    pub v_paths: PathSet,
    pub errors: ErrorReport,
    /// Every bridge, with the alternating subset marked as retained.
    pub bridges: BridgeDecomposition,
    pub abutments: Vec<Abutment>,
    pub total_order: TotalOrderReport,
    pub correction: Correction,
    pub subgraph: IdentifiedSubgraph,
    pub work: WorkCounter,
}

impl PipelineOutput {
    pub fn rows(&self) -> usize {
        self.subgraph.rows
    }

    pub fn cols(&self) -> usize {
        self.subgraph.cols
    }
}

/// Paths only: H-paths and every-third V-paths with their work counts.
pub fn find_paths(grid: &OccupancyGrid, work: &mut WorkCounter) -> (PathSet, PathSet) {
    let graph = grid_to_graph(grid);
    let h = find_h_paths_counted(&graph, work);
    let v = retain_every_third(enumerate_v_paths_counted(&graph, work));
    (h, v)
}

/// Runs the classical stage. Fails with [`Error::NotApplicable`] when fewer
/// than two H-paths or two V-paths are found; other errors are violated
/// invariants.
pub fn run_pipeline(grid: &OccupancyGrid) -> Result<PipelineOutput> {
    run_pipeline_counted(grid, &mut WorkCounter::default())
}

/// As [`run_pipeline`], adding the work done to `total` even on failure.
pub fn run_pipeline_counted(grid: &OccupancyGrid, total: &mut WorkCounter) -> Result<PipelineOutput> {
    let mut work = WorkCounter::default();
    let out = stages(grid, &mut work);
    total.absorb(&work);
    out
}

fn stages(grid: &OccupancyGrid, work: &mut WorkCounter) -> Result<PipelineOutput> {
    let graph = grid_to_graph(grid);
    let h_paths = find_h_paths_counted(&graph, work);
    let v_paths = retain_every_third(enumerate_v_paths_counted(&graph, work));
    if h_paths.len() < 2 || v_paths.len() < 2 {
        return Err(Error::NotApplicable(format!(
            "{} H-paths and {} V-paths; need at least 2 of each",
            h_paths.len(),
            v_paths.len()
        )));
    }
    let errors = validate_paths(&h_paths, &v_paths, &graph);
    if !errors.h_h.is_empty() || !errors.v_v.is_empty() || !errors.self_h.is_empty() || !errors.self_v.is_empty() {
        return Err(Error::Topology("closeness errors among paths of one orientation".into()));
    }
    let bridges = alternating_decomposition(bridge_decomposition_counted(&h_paths, &v_paths, &graph, work)?);
    let abutments = compute_abutments(&bridges, &h_paths, &graph);
    work.decomposition += abutments.iter().map(|a| a.closure_total.len() as u64).sum::<u64>();
    let total_order = verify_total_order(&abutments);
    if let Some(w) = total_order.witnesses.first() {
        return Err(Error::TotalOrder {
            j: w.j,
            detail: format!("closures of V-paths {} and {} {:?}", w.first, w.second, w.violation),
        });
    }
    let correction = correct_junctions(&h_paths, &bridges, &graph, work)?;
    let subgraph = extract_hex_minor(&correction, &bridges, &graph, work);
    if let Some(reason) = minor_mismatch(&subgraph, bridges.rows, bridges.cols) {
        return Err(Error::Topology(reason));
    }
    Ok(PipelineOutput {
        grid: grid.clone(),
        h_paths,
        v_paths,
        errors,
        bridges,
        abutments,
        total_order,
        correction,
        subgraph,
        work: *work,
    })
}
