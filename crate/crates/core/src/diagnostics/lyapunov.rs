//! Top Lyapunov exponent by tangent-vector renormalization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::{AnnulusPoint, ReturnMap};

use super::step;

/// Number of batches for the standard error.
pub const BATCHES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    /// Per-iterate exponent.
    pub lambda1: f64,
    /// Standard error from batch means.
    pub stderr: f64,
    pub n: usize,
}

/// Estimates `lim (1/n) log ‖DTⁿ v‖` along the orbit of `p0`.
pub fn lyapunov_top(map: &ReturnMap, p0: AnnulusPoint, n: usize, burn_in: usize) -> Result<LyapunovEstimate> {
    if n < BATCHES {
        return Err(Error::PreconditionViolated(format!("need at least {BATCHES} iterates")));
    }
    let mut p = p0;
    for i in 0..burn_in {
        p = step(map, p, i)?;
    }
    let mut v = [std::f64::consts::FRAC_1_SQRT_2; 2];
    let per_batch = n / BATCHES;
    let mut batch_means = Vec::with_capacity(BATCHES);
    let mut total = 0.0;
    let mut acc = 0.0;
    for i in 0..per_batch * BATCHES {
        let (q, j) = map.apply_with_jacobian(p)?;
        if !map.system.in_annulus(q.z) {
            return Err(Error::Escaped { iterate: burn_in + i });
        }
        let w = [j[0][0] * v[0] + j[0][1] * v[1], j[1][0] * v[0] + j[1][1] * v[1]];
        let norm = w[0].hypot(w[1]);
        acc += norm.ln();
        if norm > 0.0 {
            v = [w[0] / norm, w[1] / norm];
        }
        p = q;
        if (i + 1) % per_batch == 0 {
            batch_means.push(acc / per_batch as f64);
            total += acc;
            acc = 0.0;
        }
    }
    let lambda1 = total / (per_batch * BATCHES) as f64;
    let var = batch_means.iter().map(|m| (m - lambda1).powi(2)).sum::<f64>() / (BATCHES - 1) as f64;
    Ok(LyapunovEstimate {
        lambda1,
        stderr: (var / BATCHES as f64).sqrt(),
        n: per_batch * BATCHES,
    })
}
