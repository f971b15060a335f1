//! Orbits of a circle map with derivative bookkeeping.

use serde::{Deserialize, Serialize};

use crate::critical::CriticalStructure;
use crate::error::{Error, Result};
use crate::family::OneDFamily;

/// Orbits longer than this keep running sums only.
pub const STREAMING_THRESHOLD: usize = 1_000_000;

/// An orbit `x₀, f(x₀), …, fⁿ(x₀)` with `log|f′|` at each of the first `n`
/// states.
///
/// In streaming mode `states` holds only `x₀` and `fⁿ(x₀)` and
/// `log_derivatives` is empty; the sums are still exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitTrace {
    pub states: Vec<f64>,
    pub log_derivatives: Vec<f64>,
    pub min_distance_to_c: f64,
    pub sum_log_derivative: f64,
    pub steps: usize,
    pub streaming: bool,
}

impl OrbitTrace {
    pub fn last(&self) -> f64 {
        *self.states.last().expect("orbit has at least one state")
    }

    /// Mean of `log|f′|` along the orbit.
    pub fn lyapunov(&self) -> f64 {
        self.sum_log_derivative / self.steps as f64
    }
}

/// Iterates `f_{a,L}` `n` times from `x0`.
///
/// Recomputing from any stored state with the same inputs reproduces the tail
/// bit for bit; divergence from the exact orbit grows like `|(fⁿ)′|·ε`.
pub fn iterate_orbit(
    family: &OneDFamily,
    a: f64,
    l: f64,
    x0: f64,
    n: usize,
    critical: &CriticalStructure,
) -> Result<OrbitTrace> {
    if n == 0 {
        return Err(Error::PreconditionViolated("orbit length n must be ≥ 1".into()));
    }
    let streaming = n > STREAMING_THRESHOLD;
    let (mut states, mut logs) = if streaming {
        (Vec::with_capacity(2), Vec::new())
    } else {
        (Vec::with_capacity(n + 1), Vec::with_capacity(n))
    };
    let mut x = crate::angle::wrap(x0);
    states.push(x);
    let mut min_d = critical.distance_to(x);
    let mut sum = 0.0;
    for _ in 0..n {
        let ld = family.d1(l, x).abs().ln();
        sum += ld;
        x = family.eval(a, l, x);
        min_d = min_d.min(critical.distance_to(x));
        if !streaming {
            logs.push(ld);
            states.push(x);
        }
    }
    if streaming {
        states.push(x);
    }
    Ok(OrbitTrace {
        states,
        log_derivatives: logs,
        min_distance_to_c: min_d,
        sum_log_derivative: sum,
        steps: n,
        streaming,
    })
}
