//! Monte Carlo statistics over sampled lattices.
//!
//! Trial `t` at size `L` uses the lattice seed `mix_seed([master, L, t])` for
//! every `p`, so curves in `p` are coupled through shared site uniforms.

pub mod bound;
pub mod components;
pub mod maxflow;
pub mod output;
pub mod overhead;
pub mod percolation;
pub mod runtime;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::mix_seed;

pub use bound::{best_beta, gamma_epsilon, BoundParams, P_C};
pub use components::{largest_component_scaling, ComponentRow, ComponentScaling, LogFit};
pub use maxflow::{max_disjoint_crossings, max_disjoint_v_crossings};
pub use overhead::{overhead_curve, OverheadPoint};
pub use percolation::{critical_p, crossing_probability, estimate_threshold, has_h_crossing, ThresholdEstimate, ThresholdPoint};
pub use runtime::{runtime_scaling, RuntimeRow, RuntimeScaling};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub sizes: Vec<usize>,
    pub ps: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if let Some(p) = self.ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidArgument(format!("p = {p} outside [0, 1]")));
        }
        if self.sizes.is_empty() || self.ps.is_empty() {
            return Err(Error::InvalidArgument("need at least one size and one p".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub size: usize,
    pub p: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub trials: usize,
}

pub fn trial_seed(master: u64, size: usize, trial: u64) -> u64 {
    mix_seed(&[master, size as u64, trial])
}

pub(crate) fn binomial_stderr(q: f64, n: usize) -> f64 {
    (q * (1.0 - q) / n as f64).sqrt()
}

/// Mean and standard error of the mean.
pub(crate) fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fit {
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
    pub mean_x: f64,
    pub sxx: f64,
}

/// Ordinary least squares `y = intercept + slope * x`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Fit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let r_squared = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    Fit { intercept, slope, r_squared, mean_x: mx, sxx }
}
