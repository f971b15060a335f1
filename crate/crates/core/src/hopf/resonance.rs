//! The phase `ξ(μ)`, the resonant sequence `ξ(μ_n) ∈ 2πℤ` and the
//! reparametrization `μ(a, n)`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::bisect;

use super::flow::relaxation_time;
use super::system::HopfSystem;

/// Grid used to check that `ξ` is monotone on a bracket.
const MONOTONE_GRID: usize = 64;

/// `ξ(μ) = (ω + γ_μμ)τ(μ) + (β_μ/2)L²μ^{2ρ₂−1}`.
pub fn xi(system: &HopfSystem, mu: f64) -> Result<f64> {
    let tau = relaxation_time(system, mu)?;
    Ok(system.frequency(mu) * tau
        + 0.5 * system.beta.eval(mu) * system.l * system.l * mu.powf(2.0 * system.rho2 - 1.0))
}

/// `ξ(μ) mod 2π`.
pub fn xi_phase(system: &HopfSystem, mu: f64) -> Result<f64> {
    xi(system, mu).map(crate::angle::wrap)
}

/// The decreasing sequence `μ₁ > μ₂ > …` with `ξ(μ_n) = 2π(m₁ + n − 1)`.
///
/// `μ₁` is the largest resonant `μ` not exceeding `mu_top`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuLadder {
    pub system: HopfSystem,
    pub mu_top: f64,
    pub m1: i64,
}

impl MuLadder {
    pub fn new(system: &HopfSystem, mu_top: f64) -> Result<Self> {
        let top = xi(system, mu_top)?;
        Ok(Self {
            system: system.clone(),
            mu_top,
            m1: (top / TAU).ceil() as i64,
        })
    }

    /// Resonance order `m_n` of the `n`-th term (`n ≥ 1`).
    pub fn order(&self, n: usize) -> i64 {
        self.m1 + n as i64 - 1
    }

    /// Solves `ξ(μ) = target` for `μ ≤ mu_top`.
    pub fn solve(&self, target: f64) -> Result<f64> {
        let f = |mu: f64| xi(&self.system, mu).map(|x| x - target).unwrap_or(f64::NAN);
        let mut hi = self.mu_top;
        if f(hi) > 0.0 {
            return Err(Error::PreconditionViolated(format!(
                "target {target} is below xi(mu_top)"
            )));
        }
        let mut lo = 0.5 * hi;
        while f(lo) < 0.0 {
            hi = lo;
            lo *= 0.5;
            if lo < 1e-300 {
                return Err(Error::NotBracketed { lo, hi });
            }
        }
        check_monotone(&self.system, lo, hi)?;
        bisect(f, lo, hi, 0.0)
    }

    /// `μ_n`.
    pub fn mu(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::PreconditionViolated("resonant index starts at 1".into()));
        }
        self.solve(TAU * self.order(n) as f64)
    }

    /// `μ(a, n) = ξ⁻¹(ξ(μ_n) + a)`.
    pub fn mu_of_a(&self, n: usize, a: f64) -> Result<f64> {
        if !(0.0..TAU).contains(&a) {
            return Err(Error::PreconditionViolated(format!("a = {a} outside [0, 2π)")));
        }
        if n == 0 {
            return Err(Error::PreconditionViolated("resonant index starts at 1".into()));
        }
        if a == 0.0 {
            return self.mu(n);
        }
        self.solve(TAU * self.order(n) as f64 + a)
    }

    /// Index whose `μ_n` is the first at or below `mu`.
    pub fn index_near(&self, mu: f64) -> Result<usize> {
        let m = (xi(&self.system, mu)? / TAU).ceil() as i64;
        Ok((m - self.m1 + 1).max(1) as usize)
    }

    /// `μ₁, …, μ_{n_max}`.
    pub fn sequence(&self, n_max: usize) -> Result<Vec<f64>> {
        (1..=n_max).map(|n| self.mu(n)).collect()
    }
}

/// `μ₁ > … > μ_{n_max}` below `mu_top`.
pub fn mu_sequence(system: &HopfSystem, mu_top: f64, n_max: usize) -> Result<Vec<f64>> {
    MuLadder::new(system, mu_top)?.sequence(n_max)
}

/// Fails with `NonMonotone` if `ξ` is not strictly decreasing on a grid over
/// `[lo, hi]`.
pub fn check_monotone(system: &HopfSystem, lo: f64, hi: f64) -> Result<()> {
    let mut prev = f64::INFINITY;
    for i in 0..=MONOTONE_GRID {
        let mu = lo + (hi - lo) * i as f64 / MONOTONE_GRID as f64;
        let x = xi(system, mu)?;
        if !(x < prev) {
            return Err(Error::NonMonotone { lo, hi });
        }
        prev = x;
    }
    Ok(())
}
