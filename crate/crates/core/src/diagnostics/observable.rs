//! Observables on the annulus and their time series along orbits.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hopf::{AnnulusPoint, ReturnMap};

use super::run_orbit;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    SinTheta,
    CosTheta,
    Z,
    Constant(f64),
    /// `ψ∘T − ψ` with `ψ = sin θ`.
    SinCoboundary,
}

impl Observable {
    /// Value at `p`; the coboundary needs the image `tp = T(p)`.
    pub fn eval(&self, p: AnnulusPoint, tp: AnnulusPoint) -> f64 {
        match *self {
            Observable::SinTheta => p.theta.sin(),
            Observable::CosTheta => p.theta.cos(),
            Observable::Z => p.z,
            Observable::Constant(c) => c,
            Observable::SinCoboundary => tp.theta.sin() - p.theta.sin(),
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "sin_theta" => Some(Self::SinTheta),
            "cos_theta" => Some(Self::CosTheta),
            "z" => Some(Self::Z),
            "sin_coboundary" => Some(Self::SinCoboundary),
            _ => None,
        }
    }
}

/// `φ(x_i)` for `i < n` after `burn_in`.
pub fn series(map: &ReturnMap, obs: Observable, p0: AnnulusPoint, n: usize, burn_in: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n);
    let mut prev: Option<AnnulusPoint> = None;
    let last = run_orbit(map, p0, n, burn_in, |_, p| {
        if let Some(q) = prev {
            out.push(obs.eval(q, p));
        }
        prev = Some(p);
    })?;
    if let Some(q) = prev {
        out.push(obs.eval(q, last));
    }
    Ok(out)
}
