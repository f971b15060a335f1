//! Correlation decay and the block-sum central limit check.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::fit::{linear_fit, power_law_exponent};
use crate::hopf::{AnnulusPoint, ReturnMap};

use super::observable::{series, Observable};

/// Asymptotic 5% Kolmogorov–Smirnov coefficient.
pub const KS_COEFF_5PCT: f64 = 1.358;
/// Minimum number of blocks for the CLT check.
pub const MIN_BLOCKS: usize = 1000;
/// Growth exponent of `Var(S_B)` below which the limiting variance is
/// taken to vanish.
pub const VARIANCE_SLOPE_FLOOR: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Decay {
    /// `|ρ(k)| ≈ C e^{−rate·k}` over the lags above the noise floor.
    Exponential { rate: f64 },
    /// Already at the noise floor from lag 1.
    BelowNoise,
    NonDecaying,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Autocorrelation {
    /// `(lag, ρ(lag))`, `ρ(0) = 1`.
    pub values: Vec<(usize, f64)>,
    pub noise_floor: f64,
    pub decay: Decay,
}

impl Autocorrelation {
    pub fn at(&self, lag: usize) -> Option<f64> {
        self.values.get(lag).map(|v| v.1)
    }
}

/// Normalized autocovariance of a time series for lags `0..=max_lag`.
pub fn autocorrelation_of(xs: &[f64], max_lag: usize) -> Result<Autocorrelation> {
    let n = xs.len();
    if n < 2 || max_lag >= n {
        return Err(Error::PreconditionViolated(format!(
            "series of length {n} is too short for lag {max_lag}"
        )));
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let c: Vec<f64> = xs.iter().map(|x| x - mean).collect();
    let var = c.iter().map(|x| x * x).sum::<f64>() / n as f64;
    if !(var > 1e-24 * mean.abs().max(1.0).powi(2)) {
        return Err(Error::DegenerateObservable);
    }
    let values: Vec<(usize, f64)> = (0..=max_lag)
        .map(|k| {
            let s: f64 = c[..n - k].iter().zip(&c[k..]).map(|(a, b)| a * b).sum();
            (k, if k == 0 { 1.0 } else { s / n as f64 / var })
        })
        .collect();
    let noise_floor = 3.0 / (n as f64).sqrt();
    let decay = classify(&values, noise_floor);
    Ok(Autocorrelation {
        values,
        noise_floor,
        decay,
    })
}

fn classify(values: &[(usize, f64)], floor: f64) -> Decay {
    let max_lag = values.len() - 1;
    if max_lag == 0 {
        return Decay::BelowNoise;
    }
    let tail_start = (3 * max_lag / 4).max(1);
    if values[tail_start..].iter().any(|v| v.1.abs() > floor) {
        return Decay::NonDecaying;
    }
    let head: Vec<(f64, f64)> = values[1..]
        .iter()
        .take_while(|v| v.1.abs() > floor)
        .map(|&(k, r)| (k as f64, r.abs().ln()))
        .collect();
    if head.is_empty() {
        return Decay::BelowNoise;
    }
    let (mut x, mut y): (Vec<f64>, Vec<f64>) = head.into_iter().unzip();
    // ρ(0) = 1 anchors a single-lag fit
    x.insert(0, 0.0);
    y.insert(0, 0.0);
    match linear_fit(&x, &y) {
        Some((slope, _)) if slope < 0.0 => Decay::Exponential { rate: -slope },
        _ => Decay::NonDecaying,
    }
}

/// Autocorrelation of `obs` along the orbit of `p0`.
pub fn autocorrelation(
    map: &ReturnMap,
    obs: Observable,
    p0: AnnulusPoint,
    n: usize,
    max_lag: usize,
    burn_in: usize,
) -> Result<Autocorrelation> {
    autocorrelation_of(&series(map, obs, p0, n, burn_in)?, max_lag)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CltReport {
    /// `sup |F_m − Φ|` of the standardized block sums.
    pub statistic: f64,
    /// `1.358/√m`.
    pub critical_value: f64,
    pub blocks: usize,
    /// `Var(S_B)/B`.
    pub variance: f64,
    /// Log-log slope of `Var(S_b)` over `b = B/8, …, B`.
    pub variance_growth: f64,
}

impl CltReport {
    pub fn passes(&self, factor: f64) -> bool {
        self.statistic <= factor * self.critical_value
    }
}

/// Kolmogorov–Smirnov distance between the centered block sums
/// `S_B/√B` (rescaled to unit variance) and the standard normal law.
///
/// A bounded coboundary has `Var(S_B)` bounded in `B`, so a growth slope
/// below [`VARIANCE_SLOPE_FLOOR`] is reported as [`Error::ZeroVariance`]
/// alongside the literal `σ² < 1e−12` test.
pub fn clt_statistic(xs: &[f64], block_len: usize) -> Result<CltReport> {
    if block_len == 0 || xs.len() / block_len < MIN_BLOCKS {
        return Err(Error::PreconditionViolated(format!(
            "need at least {MIN_BLOCKS} blocks of length {block_len}, have {}",
            xs.len() / block_len.max(1)
        )));
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let block_var = |b: usize| {
        let sums: Vec<f64> = xs.chunks_exact(b).map(|c| c.iter().map(|x| x - mean).sum()).collect();
        let m = sums.len() as f64;
        let mu = sums.iter().sum::<f64>() / m;
        (sums.iter().map(|s| (s - mu).powi(2)).sum::<f64>() / (m - 1.0), sums)
    };
    let lens: Vec<usize> = [8, 4, 2, 1]
        .iter()
        .map(|d| (block_len / d).max(1))
        .collect();
    let vars: Vec<f64> = lens.iter().map(|&b| block_var(b).0).collect();
    let growth = power_law_exponent(&lens.iter().map(|&b| b as f64).collect::<Vec<_>>(), &vars).unwrap_or(0.0);
    let (var_b, sums) = block_var(block_len);
    let variance = var_b / block_len as f64;
    if !(variance >= 1e-12) || growth < VARIANCE_SLOPE_FLOOR {
        return Err(Error::ZeroVariance { estimate: variance });
    }
    let m = sums.len();
    let mu = sums.iter().sum::<f64>() / m as f64;
    let sd = var_b.sqrt();
    let mut zs: Vec<f64> = sums.iter().map(|s| (s - mu) / sd).collect();
    zs.sort_by(f64::total_cmp);
    let normal = Normal::standard();
    let statistic = zs
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let f = normal.cdf(z);
            (f - i as f64 / m as f64).abs().max(((i + 1) as f64 / m as f64 - f).abs())
        })
        .fold(0.0, f64::max);
    Ok(CltReport {
        statistic,
        critical_value: KS_COEFF_5PCT / (m as f64).sqrt(),
        blocks: m,
        variance,
        variance_growth: growth,
    })
}

/// [`clt_statistic`] of `obs` along the orbit of `p0`.
pub fn clt_check(
    map: &ReturnMap,
    obs: Observable,
    p0: AnnulusPoint,
    n: usize,
    block_len: usize,
    burn_in: usize,
) -> Result<CltReport> {
    if block_len == 0 || n / block_len < MIN_BLOCKS {
        return Err(Error::PreconditionViolated(format!(
            "n/block_len must be at least {MIN_BLOCKS}"
        )));
    }
    clt_statistic(&series(map, obs, p0, n, burn_in)?, block_len)
}
