//! Maximal crossing counts `m_L` and the achieved pipeline count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{mean_stderr, trial_seed, SweepConfig};
use crate::crossing::{enumerate_v_paths, retain_every_third};
use crate::error::Result;
use crate::lattice::{grid_to_graph, sample_grid, LatticeConfig};
use crate::stats::maxflow::max_disjoint_crossings;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverheadPoint {
    pub size: usize,
    pub p: f64,
    /// Mean of `m_L / L`.
    pub mean_ml_over_l: f64,
    pub stderr: f64,
    pub trials: usize,
    /// Mean number of V-paths kept by the wall follower after retention.
    pub achieved_pipeline_count: f64,
}

impl OverheadPoint {
    /// Ideal overhead: sites per logical hexagonal qubit, `(L / m_L)^2`.
    pub fn ideal_overhead(&self) -> f64 {
        1.0 / (self.mean_ml_over_l * self.mean_ml_over_l)
    }
}

/// `m_L` for trial `trial` at each `p`, sharing one set of site uniforms.
pub fn coupled_crossing_counts(size: usize, ps: &[f64], master_seed: u64, trial: u64) -> Vec<usize> {
    let seed = trial_seed(master_seed, size, trial);
    ps.iter().map(|&p| max_disjoint_crossings(&sample_grid(LatticeConfig { size, p, seed }))).collect()
}

/// One point per `(L, p)`, ordered by size then probability.
pub fn overhead_curve(sweep: &SweepConfig) -> Result<Vec<OverheadPoint>> {
    sweep.validate()?;
    for &size in &sweep.sizes {
        LatticeConfig::new(size, 1.0, 0)?;
    }
    let mut out = Vec::new();
    for &size in &sweep.sizes {
        for &p in &sweep.ps {
            let samples: Vec<(f64, f64)> = (0..sweep.trials as u64)
                .into_par_iter()
                .map(|t| {
                    let grid = sample_grid(LatticeConfig { size, p, seed: trial_seed(sweep.master_seed, size, t) });
                    let m = max_disjoint_crossings(&grid) as f64 / size as f64;
                    let kept = retain_every_third(enumerate_v_paths(&grid_to_graph(&grid))).len() as f64;
                    (m, kept)
                })
                .collect();
            let ms: Vec<f64> = samples.iter().map(|s| s.0).collect();
            let (mean, stderr) = mean_stderr(&ms);
            let achieved = samples.iter().map(|s| s.1).sum::<f64>() / samples.len() as f64;
            out.push(OverheadPoint {
                size,
                p,
                mean_ml_over_l: mean,
                stderr,
                trials: sweep.trials,
                achieved_pipeline_count: achieved,
            });
        }
    }
    Ok(out)
}
