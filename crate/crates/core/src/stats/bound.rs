//! The reduced exponent `gamma_eps(p) = alpha(p_c + eps) - beta ln(p / (p - p_c - eps))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square-lattice site percolation threshold.
pub const P_C: f64 = 0.592746;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    /// `alpha(p_c + eps)`, supplied by the caller.
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub eps: f64,
}

fn log_term(p: f64, eps: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument(format!("p = {p} outside (0, 1]")));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!("eps = {eps} must be positive")));
    }
    let gap = p - P_C - eps;
    if gap.is_nan() || gap <= 0.0 {
        return Err(Error::InvalidArgument(format!("p - p_c - eps = {gap} must be positive")));
    }
    Ok((p / gap).ln())
}

pub fn gamma_epsilon(b: &BoundParams) -> Result<f64> {
    if b.beta.is_nan() || b.beta < 0.0 {
        return Err(Error::InvalidArgument(format!("beta = {} must be nonnegative", b.beta)));
    }
    Ok(b.alpha - b.beta * log_term(b.p, b.eps)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BestBeta {
    pub eps: f64,
    /// Largest `beta` with `gamma_eps(p) >= 0`.
    pub beta: f64,
}

/// Scans `eps_grid` for the `eps` admitting the largest overhead exponent.
///
/// Grid points outside the domain are skipped; `None` if none remain.
pub fn best_beta(alpha: impl Fn(f64) -> f64, p: f64, eps_grid: &[f64]) -> Option<BestBeta> {
    eps_grid
        .iter()
        .filter_map(|&eps| {
            let l = log_term(p, eps).ok()?;
            Some(BestBeta { eps, beta: alpha(P_C + eps) / l })
        })
        .max_by(|a, b| a.beta.total_cmp(&b.beta))
}
