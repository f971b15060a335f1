//! Relaxation time, the exact reduced flow and the integrated full flow.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::angle::wrap;
use crate::error::{Error, Result};

use super::ode::{integrate, OdeOptions, OdeStats};
use super::system::{AnnulusPoint, HopfSystem};

/// Below this, `z̃ − 1` is flagged as near-degenerate.
pub const NEAR_DEGENERATE: f64 = 1e-8;

/// Minimal number of steps per revolution when `g` or `h` depends on `θ`.
pub const STEPS_PER_TURN: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Relaxation {
    pub mu: f64,
    pub z_tilde: f64,
    pub tau: f64,
    pub near_degenerate: bool,
}

impl Relaxation {
    pub fn from_z_tilde(z_tilde: f64, mu: f64) -> Result<Self> {
        if !(z_tilde > 1.0) || !(mu > 0.0) {
            return Err(Error::NotRelaxable { mu, z_tilde });
        }
        let excess = z_tilde - 1.0;
        Ok(Self {
            mu,
            z_tilde,
            tau: excess.ln_1p() / mu,
            near_degenerate: excess < NEAR_DEGENERATE,
        })
    }
}

pub fn relaxation(system: &HopfSystem, mu: f64) -> Result<Relaxation> {
    Relaxation::from_z_tilde(system.z_tilde(mu), mu)
}

/// `τ(μ) = ln(z̃)/μ`.
pub fn relaxation_time(system: &HopfSystem, mu: f64) -> Result<f64> {
    relaxation(system, mu).map(|r| r.tau)
}

/// Twist accumulated by the reduced flow from radius `z1` in time `t`:
/// `(β_μ/2)μ^{2ρ₁−1}z₁²(1 − e^{−2μt})`.
#[inline]
pub fn reduced_twist(z1: f64, t: f64, system: &HopfSystem, mu: f64) -> f64 {
    0.5 * system.beta.eval(mu) * mu.powf(2.0 * system.rho1 - 1.0) * z1 * z1 * -(-2.0 * mu * t).exp_m1()
}

/// Closed-form reduced flow started at the kicked point `p = (z₁, θ₁)`.
pub fn reduced_flow(p: AnnulusPoint, t: f64, system: &HopfSystem, mu: f64) -> AnnulusPoint {
    let z = p.z * (-mu * t).exp();
    let theta = p.theta + t * system.frequency(mu) + reduced_twist(p.z, t, system, mu);
    AnnulusPoint::new(z, wrap(theta))
}

/// Full flow result in co-rotating form: `θ̂(t) = θ₁ + (ω+γμ)t + phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullFlowState {
    pub z: f64,
    pub phi: f64,
    pub stats: OdeStats,
}

/// Integrates the full normal form from `p` for time `t`.
///
/// Time is rescaled to `t′ = t/T ∈ [0, 1]` and the linear rotation is
/// removed, so both state components stay of moderate size however long
/// the relaxation is.
pub fn full_flow_state(
    p: AnnulusPoint,
    t: f64,
    system: &HopfSystem,
    mu: f64,
    opts: &OdeOptions,
) -> Result<FullFlowState> {
    if t == 0.0 {
        return Ok(FullFlowState {
            z: p.z,
            phi: 0.0,
            stats: OdeStats::default(),
        });
    }
    if !(t > 0.0) {
        return Err(Error::PreconditionViolated(format!("flow time must be >= 0 (got {t})")));
    }
    let omega = system.frequency(mu);
    let beta = system.beta.eval(mu);
    let r_scale = mu.powf(system.rho1);
    let twist = beta * mu.powf(2.0 * system.rho1);
    let quartic = mu.powf(4.0 * system.rho1);
    let (g, h) = (system.g, system.h);
    let theta1 = p.theta;
    let mut opts = *opts;
    if system.g.depends_on_theta() || system.h.depends_on_theta() {
        // resolve the forcing: at least STEPS_PER_TURN steps per revolution
        let turns = (omega * t).abs() / TAU;
        opts.max_step = opts.max_step.min(1.0 / (STEPS_PER_TURN * turns.max(1.0)));
    }
    let field = move |s: f64, y: &[f64; 2]| {
        let z = y[0];
        let theta = theta1 + omega * t * s + y[1];
        let r = r_scale * z;
        let z2 = z * z;
        let z4 = z2 * z2;
        [
            t * (-mu * z + quartic * z4 * z * g.eval(r, theta, mu)),
            t * (twist * z2 + quartic * z4 * h.eval(r, theta, mu)),
        ]
    };
    let (y, stats) = integrate(field, 0.0, [p.z, 0.0], 1.0, &opts)?;
    Ok(FullFlowState { z: y[0], phi: y[1], stats })
}

/// Radius of the full flow when `g` does not depend on `θ`, so the radial
/// equation decouples.
pub fn full_flow_radius(z1: f64, t: f64, system: &HopfSystem, mu: f64, opts: &OdeOptions) -> Result<f64> {
    if system.g.depends_on_theta() {
        return full_flow_state(AnnulusPoint::new(z1, 0.0), t, system, mu, opts).map(|s| s.z);
    }
    if t == 0.0 {
        return Ok(z1);
    }
    let quartic = mu.powf(4.0 * system.rho1);
    let r_scale = mu.powf(system.rho1);
    let g = system.g;
    let field = move |_: f64, y: &[f64; 1]| {
        let z = y[0];
        [t * (-mu * z + quartic * z.powi(5) * g.eval(r_scale * z, 0.0, mu))]
    };
    integrate(field, 0.0, [z1], 1.0, opts).map(|(y, _)| y[0])
}

/// Full flow from the kicked point `p`, with angle in `[0, 2π)`.
pub fn full_flow(p: AnnulusPoint, t: f64, system: &HopfSystem, mu: f64, tol: f64) -> Result<AnnulusPoint> {
    let s = full_flow_state(p, t, system, mu, &OdeOptions::with_tol(tol))?;
    Ok(AnnulusPoint::new(s.z, wrap(p.theta + system.frequency(mu) * t + s.phi)))
}

/// Gronwall-type bound `(A₁/A₂)(e^{A₂t} − 1)`.
pub fn gronwall_bound(a1: f64, a2: f64, t: f64) -> f64 {
    if a1 == 0.0 || t == 0.0 {
        return 0.0;
    }
    a1 / a2 * (a2 * t).exp_m1()
}

/// Constants of the Gronwall comparison between the full and reduced flows
/// in rescaled time `t′ ∈ [0, 1]`, sampled on a grid over a flow tube.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GronwallCheck {
    /// `sup ‖F_full − F_reduced‖_∞`.
    pub a1: f64,
    /// `sup ‖DF_reduced‖_∞` (maximal row sum).
    pub a2: f64,
    pub bound: f64,
    /// `‖full − reduced‖_∞` at `t′ = 1` (angles unwrapped).
    pub measured: f64,
}

/// Compares the full and reduced flows from the kicked point `p` over time
/// `t`. The tube is `z ∈ [z_min/2, 2z_max]` around the reduced radius.
pub fn gronwall_check(
    p: AnnulusPoint,
    t: f64,
    system: &HopfSystem,
    mu: f64,
    tol: f64,
    grid: usize,
) -> Result<GronwallCheck> {
    let full = full_flow_state(p, t, system, mu, &OdeOptions::with_tol(tol))?;
    let red_z = p.z * (-mu * t).exp();
    let red_phi = reduced_twist(p.z, t, system, mu);
    let measured = (full.z - red_z).abs().max((full.phi - red_phi).abs());

    let (z_lo, z_hi) = (0.5 * red_z.min(full.z), 2.0 * p.z.max(full.z));
    let quartic = mu.powf(4.0 * system.rho1);
    let r_scale = mu.powf(system.rho1);
    let twist = system.beta.eval(mu) * mu.powf(2.0 * system.rho1);
    let (mut a1, mut a2) = (0.0f64, 0.0f64);
    for i in 0..=grid {
        let z = z_lo + (z_hi - z_lo) * i as f64 / grid as f64;
        let z4 = z.powi(4);
        for j in 0..grid {
            let theta = TAU * j as f64 / grid as f64;
            let dz = quartic * z4 * z * system.g.eval(r_scale * z, theta, mu);
            let dt = quartic * z4 * system.h.eval(r_scale * z, theta, mu);
            a1 = a1.max(t * dz.abs()).max(t * dt.abs());
        }
        // reduced field (−μz, ω + βμ^{2ρ₁}z²) has rows (μ, 0) and (2βμ^{2ρ₁}z, 0)
        a2 = a2.max(t * mu).max(t * (2.0 * twist * z).abs());
    }
    Ok(GronwallCheck {
        a1,
        a2,
        bound: gronwall_bound(a1, a2, 1.0),
        measured,
    })
}
