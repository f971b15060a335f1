//! Annulus return maps `T_{a,L,μ} = G_{τ(μ)} ∘ κ` and their singular limit.

use std::f64::consts::{FRAC_PI_2, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::{signed_diff, wrap};
use crate::error::{Error, Result};
use crate::family::OneDFamily;

use super::flow::{full_flow_state, relaxation, reduced_twist};
use super::kick::{kick, kick_by, kick_jacobian_by};
use super::ode::OdeOptions;
use super::resonance::{xi_phase, MuLadder};
use super::system::{AnnulusPoint, HopfSystem};

/// Finite-difference step for Jacobians of the integrated map.
pub const FD_STEP: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    ReducedExact,
    FullIntegrated { tol: f64 },
    SingularLimit,
}

/// A return map with its relaxation data cached at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnMap {
    pub kind: MapKind,
    pub system: HopfSystem,
    pub a: f64,
    /// `None` when built from a raw `μ`.
    pub n: Option<usize>,
    /// Zero for the singular limit.
    pub mu: f64,
    pub tau: f64,
    pub z_tilde: f64,
    /// `ξ(μ) mod 2π`; equals `a` up to the resonance solve for indexed maps.
    pub phase: f64,
    pub coef: Coefficients,
}

/// `μ`-dependent factors of the reduced map, evaluated once.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Coefficients {
    /// `Lμ^{ρ₂−ρ₁}`.
    pub kick: f64,
    /// `μ^{2ρ₁−1}`.
    pub radial: f64,
    /// `2Lμ^{ρ₁+ρ₂−1}`.
    pub cross: f64,
    pub beta: f64,
}

impl Coefficients {
    fn new(system: &HopfSystem, mu: f64) -> Self {
        Self {
            kick: system.kick_size(mu),
            radial: mu.powf(2.0 * system.rho1 - 1.0),
            cross: 2.0 * system.l * mu.powf(system.rho1 + system.rho2 - 1.0),
            beta: system.beta.eval(mu),
        }
    }
}

impl ReturnMap {
    /// `T_{a,L,μ(a,n)}`.
    pub fn indexed(kind: MapKind, ladder: &MuLadder, n: usize, a: f64) -> Result<Self> {
        if kind == MapKind::SingularLimit {
            return Ok(Self::singular(&ladder.system, a));
        }
        let mu = ladder.mu_of_a(n, a)?;
        let mut map = Self::raw(kind, &ladder.system, mu)?;
        map.a = a;
        map.n = Some(n);
        Ok(map)
    }

    /// The map at an arbitrary `μ`; `a` is recorded as `ξ(μ) mod 2π`.
    pub fn raw(kind: MapKind, system: &HopfSystem, mu: f64) -> Result<Self> {
        if kind == MapKind::SingularLimit {
            return Err(Error::PreconditionViolated("the singular limit has no μ".into()));
        }
        let r = relaxation(system, mu)?;
        let phase = xi_phase(system, mu)?;
        Ok(Self {
            kind,
            system: system.clone(),
            a: phase,
            n: None,
            mu,
            tau: r.tau,
            z_tilde: r.z_tilde,
            phase,
            coef: Coefficients::new(system, mu),
        })
    }

    /// `T_{a,L,0}(z₀, θ₀) = (1, π/2 + β₀Lz₀ sin θ₀ + a)`.
    pub fn singular(system: &HopfSystem, a: f64) -> Self {
        Self {
            kind: MapKind::SingularLimit,
            system: system.clone(),
            a,
            n: None,
            mu: 0.0,
            tau: f64::INFINITY,
            z_tilde: f64::INFINITY,
            phase: a,
            coef: Coefficients {
                beta: system.beta0(),
                ..Coefficients::default()
            },
        }
    }

    /// Same construction at a different kind.
    pub fn with_kind(&self, kind: MapKind) -> Result<Self> {
        match kind {
            MapKind::SingularLimit => Ok(Self::singular(&self.system, self.a)),
            _ if self.kind == MapKind::SingularLimit => Err(Error::PreconditionViolated(
                "cannot lift a singular-limit map to finite μ".into(),
            )),
            _ => Ok(Self { kind, ..self.clone() }),
        }
    }

    fn reduced(&self, p: AnnulusPoint) -> AnnulusPoint {
        let c = &self.coef;
        let q = kick_by(p, c.kick);
        let z_ratio = q.z / self.z_tilde;
        let bracket = c.radial * p.z * p.z + c.cross * p.z * p.theta.sin() - c.radial * z_ratio * z_ratio;
        let theta = q.theta + self.phase + 0.5 * c.beta * bracket;
        AnnulusPoint::new(z_ratio, wrap(theta))
    }

    fn reduced_jacobian(&self, p: AnnulusPoint, q: AnnulusPoint) -> [[f64; 2]; 2] {
        let k = kick_jacobian_by(p, self.coef.kick);
        let zt = self.z_tilde;
        let shear = self.coef.beta * self.coef.radial * q.z * (1.0 - 1.0 / (zt * zt));
        [
            [k[0][0] / zt, k[0][1] / zt],
            [shear * k[0][0] + k[1][0], shear * k[0][1] + k[1][1]],
        ]
    }

    /// Image and Jacobian in one pass.
    pub fn apply_with_jacobian(&self, p: AnnulusPoint) -> Result<(AnnulusPoint, [[f64; 2]; 2])> {
        match self.kind {
            MapKind::ReducedExact => {
                let q = kick_by(p, self.coef.kick);
                Ok((self.reduced(p), self.reduced_jacobian(p, q)))
            }
            _ => Ok((self.apply_unchecked(p)?, self.jacobian(p)?)),
        }
    }

    /// Evaluates the map without the annulus check.
    pub fn apply_unchecked(&self, p: AnnulusPoint) -> Result<AnnulusPoint> {
        let s = &self.system;
        match self.kind {
            MapKind::SingularLimit => Ok(AnnulusPoint::new(
                1.0,
                wrap(FRAC_PI_2 + s.beta0() * s.l * p.z * p.theta.sin() + self.a),
            )),
            MapKind::ReducedExact => Ok(self.reduced(p)),
            MapKind::FullIntegrated { tol } => {
                let q = kick(p, s, self.mu);
                let st = full_flow_state(q, self.tau, s, self.mu, &OdeOptions::with_tol(tol))?;
                // ω τ ≡ ξ − (β/2)L²μ^{2ρ₂−1}
                let rot = self.phase - 0.5 * s.beta.eval(self.mu) * s.l * s.l * self.mu.powf(2.0 * s.rho2 - 1.0);
                Ok(AnnulusPoint::new(st.z, wrap(q.theta + rot + st.phi)))
            }
        }
    }

    /// Evaluates the map; fails with `LeftAnnulus` if the image leaves `𝒜`.
    pub fn apply(&self, p: AnnulusPoint) -> Result<AnnulusPoint> {
        let q = self.apply_unchecked(p)?;
        if !self.system.in_annulus(q.z) {
            let (lo, hi) = self.system.annulus_bounds();
            return Err(Error::LeftAnnulus { z: q.z, lo, hi });
        }
        Ok(q)
    }

    /// `DT` at `p`, rows `(z, θ)`, columns `(∂_z, ∂_θ)`.
    pub fn jacobian(&self, p: AnnulusPoint) -> Result<[[f64; 2]; 2]> {
        let s = &self.system;
        match self.kind {
            MapKind::SingularLimit => {
                let amp = s.beta0() * s.l;
                let (sin, cos) = p.theta.sin_cos();
                Ok([[0.0, 0.0], [amp * sin, amp * p.z * cos]])
            }
            MapKind::ReducedExact => Ok(self.reduced_jacobian(p, kick_by(p, self.coef.kick))),
            MapKind::FullIntegrated { .. } => self.fd_jacobian(p, FD_STEP),
        }
    }

    /// Central-difference Jacobian.
    pub fn fd_jacobian(&self, p: AnnulusPoint, h: f64) -> Result<[[f64; 2]; 2]> {
        let e = |z: f64, t: f64| self.apply_unchecked(AnnulusPoint::new(z, t));
        let (zp, zm) = (e(p.z + h, p.theta)?, e(p.z - h, p.theta)?);
        let (tp, tm) = (e(p.z, p.theta + h)?, e(p.z, p.theta - h)?);
        let d = 2.0 * h;
        Ok([
            [(zp.z - zm.z) / d, (tp.z - tm.z) / d],
            [signed_diff(zp.theta, zm.theta) / d, signed_diff(tp.theta, tm.theta) / d],
        ])
    }

    /// `det DT`.
    pub fn jacobian_det(&self, p: AnnulusPoint) -> Result<f64> {
        let j = self.jacobian(p)?;
        Ok(j[0][0] * j[1][1] - j[0][1] * j[1][0])
    }

    /// The circle family `θ ↦ π/2 + β₀L sin θ + a` obtained by restricting
    /// the singular limit to `z = 1`.
    pub fn singular_limit_restriction(&self) -> OneDFamily {
        OneDFamily::hopf(self.system.beta0())
    }

    /// Twist of the reduced flow over one relaxation from the kicked radius.
    pub fn reduced_twist_at(&self, z1: f64) -> f64 {
        reduced_twist(z1, self.tau, &self.system, self.mu)
    }
}

/// The `grid × grid` sample of `𝒜` used for invariance and distortion
/// checks (`z` uniform in `[K₄⁻¹, K₄]`, `θ` uniform on the circle).
pub fn annulus_grid(system: &HopfSystem, grid: usize) -> Vec<AnnulusPoint> {
    let (lo, hi) = system.annulus_bounds();
    let mut pts = Vec::with_capacity(grid * grid);
    for i in 0..grid {
        let z = if grid == 1 { 1.0 } else { lo + (hi - lo) * i as f64 / (grid - 1) as f64 };
        for j in 0..grid {
            pts.push(AnnulusPoint::new(z, TAU * j as f64 / grid as f64));
        }
    }
    pts
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub pass: bool,
    pub violations: usize,
    pub min_z: f64,
    pub max_z: f64,
}

/// Samples whether `T(𝒜) ⊆ 𝒜` on a `grid × grid` sample.
pub fn annulus_invariance(map: &ReturnMap, grid: usize) -> Result<InvarianceReport> {
    let images: Vec<f64> = annulus_grid(&map.system, grid)
        .par_iter()
        .map(|&p| map.apply_unchecked(p).map(|q| q.z))
        .collect::<Result<_>>()?;
    let violations = images.iter().filter(|&&z| !map.system.in_annulus(z)).count();
    Ok(InvarianceReport {
        pass: violations == 0,
        violations,
        min_z: images.iter().copied().fold(f64::INFINITY, f64::min),
        max_z: images.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Largest `μ` in `mu_grid` below which every grid value passes the
/// invariance sample; `None` if the smallest already fails.
pub fn detect_mu_max(kind: MapKind, system: &HopfSystem, mu_grid: &[f64], grid: usize) -> Option<f64> {
    let mut mus = mu_grid.to_vec();
    mus.sort_by(|a, b| a.total_cmp(b));
    let mut best = None;
    for mu in mus {
        let ok = ReturnMap::raw(kind, system, mu)
            .and_then(|m| annulus_invariance(&m, grid))
            .map(|r| r.pass)
            .unwrap_or(false);
        if !ok {
            break;
        }
        best = Some(mu);
    }
    best
}

/// `n` log-spaced values from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}
