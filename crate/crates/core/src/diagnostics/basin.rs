//! Lyapunov statistics over a grid of initial conditions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::{AnnulusPoint, ReturnMap};

use super::lyapunov::lyapunov_top;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinReport {
    /// `λ₁` per cell, `None` where the orbit escaped.
    pub per_cell: Vec<Option<f64>>,
    /// Fraction of non-escaping cells with `λ₁ > threshold`; `NaN` if every
    /// orbit escaped.
    pub fraction: f64,
    pub escaped: usize,
}

/// Estimates `λ₁` from every point of `grid` and counts those above
/// `threshold`.
pub fn basin_sample(
    map: &ReturnMap,
    grid: &[AnnulusPoint],
    n: usize,
    burn_in: usize,
    threshold: f64,
) -> Result<BasinReport> {
    let per_cell = grid
        .par_iter()
        .map(|&p| match lyapunov_top(map, p, n, burn_in) {
            Ok(est) => Ok(Some(est.lambda1)),
            Err(Error::Escaped { .. } | Error::LeftAnnulus { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    let kept: Vec<f64> = per_cell.iter().flatten().copied().collect();
    let above = kept.iter().filter(|&&l| l > threshold).count();
    Ok(BasinReport {
        fraction: if kept.is_empty() { f64::NAN } else { above as f64 / kept.len() as f64 },
        escaped: per_cell.len() - kept.len(),
        per_cell,
    })
}
