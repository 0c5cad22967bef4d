//! Crossing probability and threshold location.

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{binomial_stderr, least_squares, trial_seed, CurvePoint};
use crate::error::{Error, Result};
use crate::lattice::{sample_grid, site_uniforms, LatticeConfig, OccupancyGrid};

/// Whether an occupied path joins column 0 to column `L - 1`.
pub fn has_h_crossing(grid: &OccupancyGrid) -> bool {
    let size = grid.size();
    if size == 0 {
        return false;
    }
    let occupied = |i: usize| grid.is_occupied(crate::lattice::VertexId::new(i / size, i % size));
    let mut seen = vec![false; size * size];
    let mut stack: Vec<usize> = (0..size).map(|r| r * size).filter(|&i| occupied(i)).collect();
    for &i in &stack {
        seen[i] = true;
    }
    while let Some(i) = stack.pop() {
        let (r, c) = (i / size, i % size);
        if c + 1 == size {
            return true;
        }
        let mut push = |j: usize| {
            if !seen[j] && occupied(j) {
                seen[j] = true;
                stack.push(j);
            }
        };
        push(i + 1);
        if c > 0 {
            push(i - 1);
        }
        if r + 1 < size {
            push(i + size);
        }
        if r > 0 {
            push(i - size);
        }
    }
    false
}

/// Fraction of sampled grids with an H-crossing.
pub fn crossing_probability(size: usize, p: f64, trials: usize, seed: u64) -> Result<CurvePoint> {
    LatticeConfig::new(size, p, 0)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let hits = (0..trials as u64)
        .into_par_iter()
        .filter(|&t| has_h_crossing(&sample_grid(LatticeConfig { size, p, seed: trial_seed(seed, size, t) })))
        .count();
    let q = hits as f64 / trials as f64;
    Ok(CurvePoint { size, p, estimate: q, stderr: binomial_stderr(q, trials), trials })
}

/// The smallest `p` at which the sample with this seed has an H-crossing:
/// sites are added in order of their uniform draw until left and right
/// boundaries join.
pub fn critical_p(size: usize, seed: u64) -> f64 {
    if size == 0 {
        return 1.0;
    }
    let u = site_uniforms(size, seed);
    let n = size * size;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| u[a].total_cmp(&u[b]));
    let (left, right) = (n, n + 1);
    let mut uf = UnionFind::<usize>::new(n + 2);
    let mut added = vec![false; n];
    for i in order {
        added[i] = true;
        let (r, c) = (i / size, i % size);
        if c == 0 {
            uf.union(i, left);
        }
        if c + 1 == size {
            uf.union(i, right);
        }
        if c > 0 && added[i - 1] {
            uf.union(i, i - 1);
        }
        if c + 1 < size && added[i + 1] {
            uf.union(i, i + 1);
        }
        if r > 0 && added[i - size] {
            uf.union(i, i - size);
        }
        if r + 1 < size && added[i + size] {
            uf.union(i, i + size);
        }
        if uf.equiv(left, right) {
            return u[i];
        }
    }
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPoint {
    pub size: usize,
    pub trials: usize,
    /// `p` at which the empirical crossing probability reaches 1/2.
    pub p_half: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub per_size: Vec<ThresholdPoint>,
    /// Intercept of `p_half` against `L^-exponent`; `None` with fewer than
    /// two sizes.
    pub estimate: Option<f64>,
    pub stderr: Option<f64>,
    pub exponent: f64,
}

/// Correction-to-scaling exponent `1/nu` for two-dimensional percolation.
pub const SHIFT_EXPONENT: f64 = 0.75;

/// Per-size median critical point and its stderr from the order
/// statistics `n/2 ± sqrt(n)/2`.
pub fn threshold_point(size: usize, trials: usize, seed: u64) -> ThresholdPoint {
    let mut ps: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| critical_p(size, trial_seed(seed, size, t)))
        .collect();
    ps.sort_unstable_by(f64::total_cmp);
    let n = ps.len();
    let at = |k: f64| ps[(k.max(0.0) as usize).min(n - 1)];
    let half = n as f64 / 2.0;
    let p_half = if n % 2 == 1 { ps[n / 2] } else { (ps[n / 2 - 1] + ps[n / 2]) / 2.0 };
    let spread = (n as f64).sqrt() / 2.0;
    let stderr = (at(half + spread) - at(half - spread)) / 2.0;
    ThresholdPoint { size, trials, p_half, stderr }
}

/// Per-size crossing points and their extrapolation to `L -> infinity`.
pub fn estimate_threshold(sizes: &[usize], trials: usize, seed: u64) -> Result<ThresholdEstimate> {
    if sizes.is_empty() || trials == 0 || sizes.contains(&0) {
        return Err(Error::InvalidArgument("need at least one positive size and one trial".into()));
    }
    let per_size: Vec<ThresholdPoint> = sizes.iter().map(|&s| threshold_point(s, trials, seed)).collect();
    let (estimate, stderr) = if per_size.len() >= 2 {
        let xs: Vec<f64> = per_size.iter().map(|t| (t.size as f64).powf(-SHIFT_EXPONENT)).collect();
        let ys: Vec<f64> = per_size.iter().map(|t| t.p_half).collect();
        let fit = least_squares(&xs, &ys);
        // propagate the per-size errors through the intercept weights
        let (mx, sxx) = (fit.mean_x, fit.sxx);
        let var: f64 = per_size
            .iter()
            .zip(&xs)
            .map(|(t, &x)| {
                let w = 1.0 / xs.len() as f64 - mx * (x - mx) / sxx;
                (w * t.stderr).powi(2)
            })
            .sum();
        (Some(fit.intercept), Some(var.sqrt()))
    } else {
        (None, None)
    };
    Ok(ThresholdEstimate { per_size, estimate, stderr, exponent: SHIFT_EXPONENT })
}
