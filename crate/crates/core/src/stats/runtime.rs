//! Deterministic work per site for the classical stage.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{mean_stderr, trial_seed};
use crate::crossing::{enumerate_v_paths_counted, find_h_paths_counted};
use crate::error::{Error, Result};
use crate::lattice::{grid_to_graph, sample_grid, LatticeConfig};
use crate::pipeline::run_pipeline_counted;
use crate::work::WorkCounter;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuntimeRow {
    pub size: usize,
    pub p: f64,
    pub sites: usize,
    /// Mean total work counter divided by `L^2`.
    pub work_per_site: f64,
    pub stderr: f64,
    /// Largest ratio of wall-follower visits to occupied sites seen in one
    /// orientation.
    pub max_visits_per_occupied: f64,
    /// Runs where one orientation visited more than four times the occupied sites.
    pub visit_violations: usize,
    /// Runs where the pipeline completed.
    pub applicable: usize,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuntimeScaling {
    pub rows: Vec<RuntimeRow>,
    /// Per `p`: largest over smallest `work_per_site` across sizes.
    pub spread: Vec<(f64, f64)>,
}

struct Trial {
    work: WorkCounter,
    occupied: usize,
    h_visits: u64,
    v_visits: u64,
    applicable: bool,
}

fn trial(size: usize, p: f64, seed: u64) -> Trial {
    let grid = sample_grid(LatticeConfig { size, p, seed });
    let graph = grid_to_graph(&grid);
    let (mut h, mut v) = (WorkCounter::default(), WorkCounter::default());
    find_h_paths_counted(&graph, &mut h);
    enumerate_v_paths_counted(&graph, &mut v);
    let mut work = WorkCounter::default();
    let applicable = run_pipeline_counted(&grid, &mut work).is_ok();
    Trial { work, occupied: graph.vertex_count(), h_visits: h.rhwf_visits, v_visits: v.rhwf_visits, applicable }
}

pub fn runtime_scaling(ps: &[f64], sizes: &[usize], trials: usize, seed: u64) -> Result<RuntimeScaling> {
    if trials == 0 || ps.is_empty() || sizes.is_empty() {
        return Err(Error::InvalidArgument("need sizes, probabilities and at least one trial".into()));
    }
    let mut rows = Vec::new();
    let mut spread = Vec::new();
    for &p in ps {
        let start = rows.len();
        for &size in sizes {
            LatticeConfig::new(size, p, 0)?;
            let runs: Vec<Trial> =
                (0..trials as u64).into_par_iter().map(|t| trial(size, p, trial_seed(seed, size, t))).collect();
            let sites = size * size;
            let per_site: Vec<f64> = runs.iter().map(|r| r.work.total() as f64 / sites as f64).collect();
            let (mean, stderr) = mean_stderr(&per_site);
            let ratio = |visits: u64, occ: usize| if occ == 0 { 0.0 } else { visits as f64 / occ as f64 };
            rows.push(RuntimeRow {
                size,
                p,
                sites,
                work_per_site: mean,
                stderr,
                max_visits_per_occupied: runs
                    .iter()
                    .map(|r| ratio(r.h_visits.max(r.v_visits), r.occupied))
                    .fold(0.0, f64::max),
                visit_violations: runs
                    .iter()
                    .filter(|r| r.h_visits.max(r.v_visits) > 4 * r.occupied as u64)
                    .count(),
                applicable: runs.iter().filter(|r| r.applicable).count(),
                trials,
            });
        }
        let ws: Vec<f64> = rows[start..].iter().map(|r| r.work_per_site).collect();
        let (lo, hi) = ws.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &w| (lo.min(w), hi.max(w)));
        spread.push((p, if lo > 0.0 { hi / lo } else if hi == 0.0 { 1.0 } else { f64::INFINITY }));
    }
    Ok(RuntimeScaling { rows, spread })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_grid_does_no_work() {
        let s = runtime_scaling(&[0.0], &[8, 16], 2, 0).unwrap();
        assert!(s.rows.iter().all(|r| r.work_per_site == 0.0 && r.applicable == 0));
        assert_eq!(s.spread, vec![(0.0, 1.0)]);
    }

    #[test]
    fn visits_within_budget() {
        let s = runtime_scaling(&[0.85], &[16, 32], 4, 3).unwrap();
        assert!(s.rows.iter().all(|r| r.visit_violations == 0 && r.max_visits_per_occupied <= 4.0));
        assert!(s.rows.iter().all(|r| r.work_per_site > 0.0));
    }
}
