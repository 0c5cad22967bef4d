//! Largest-cluster statistics below threshold.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{least_squares, mean_stderr, trial_seed};
use crate::error::{Error, Result};
use crate::lattice::{component_sizes, grid_to_graph, sample_grid, LatticeConfig};

/// Probabilities at or above this are rejected as not clearly subcritical.
pub const SUBCRITICAL_LIMIT: f64 = 0.55;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentRow {
    pub size: usize,
    pub p: f64,
    pub sites: usize,
    pub mean_largest: f64,
    pub stderr: f64,
    pub max_largest: usize,
    pub trials: usize,
}

/// `mean_largest = intercept + slope * ln N` at one `p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogFit {
    pub p: f64,
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentScaling {
    pub rows: Vec<ComponentRow>,
    /// One fit per `p`; empty when fewer than two sizes were sampled.
    pub fits: Vec<LogFit>,
}

pub fn largest_component(size: usize, p: f64, seed: u64) -> usize {
    let grid = sample_grid(LatticeConfig { size, p, seed });
    component_sizes(&grid_to_graph(&grid)).into_iter().max().unwrap_or(0)
}

pub fn largest_component_scaling(ps: &[f64], sizes: &[usize], trials: usize, seed: u64) -> Result<ComponentScaling> {
    if trials == 0 || ps.is_empty() || sizes.is_empty() {
        return Err(Error::InvalidArgument("need sizes, probabilities and at least one trial".into()));
    }
    if let Some(p) = ps.iter().find(|&&p| !(0.0..SUBCRITICAL_LIMIT).contains(&p)) {
        return Err(Error::InvalidArgument(format!("p = {p} is not below {SUBCRITICAL_LIMIT}")));
    }
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    for &p in ps {
        let start = rows.len();
        for &size in sizes {
            LatticeConfig::new(size, p, 0)?;
            let largest: Vec<usize> = (0..trials as u64)
                .into_par_iter()
                .map(|t| largest_component(size, p, trial_seed(seed, size, t)))
                .collect();
            let xs: Vec<f64> = largest.iter().map(|&s| s as f64).collect();
            let (mean, stderr) = mean_stderr(&xs);
            rows.push(ComponentRow {
                size,
                p,
                sites: size * size,
                mean_largest: mean,
                stderr,
                max_largest: largest.iter().copied().max().unwrap_or(0),
                trials,
            });
        }
        if sizes.len() >= 2 {
            let xs: Vec<f64> = rows[start..].iter().map(|r| (r.sites as f64).ln()).collect();
            let ys: Vec<f64> = rows[start..].iter().map(|r| r.mean_largest).collect();
            let fit = least_squares(&xs, &ys);
            fits.push(LogFit { p, intercept: fit.intercept, slope: fit.slope, r_squared: fit.r_squared });
        }
    }
    Ok(ComponentScaling { rows, fits })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_lattice_has_no_component() {
        let s = largest_component_scaling(&[0.0], &[8, 16], 4, 1).unwrap();
        assert!(s.rows.iter().all(|r| r.max_largest == 0));
    }

    #[test]
    fn sparse_lattice_has_tiny_components() {
        let s = largest_component_scaling(&[0.05], &[32, 64], 20, 2).unwrap();
        assert!(s.rows.iter().all(|r| r.max_largest <= 8), "{:?}", s.rows);
    }

    #[test]
    fn supercritical_is_rejected() {
        assert!(largest_component_scaling(&[0.6], &[8], 1, 0).is_err());
    }
}
