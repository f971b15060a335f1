//! Convergence of `T_{a,L,μ_n}` to the singular limit, decay of the
//! higher-order perturbation, and determinant distortion.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::signed_diff;
use crate::error::{Error, Result};
use crate::fit::power_law_exponent;

use super::flow::{full_flow_radius, full_flow_state, reduced_twist, relaxation};
use super::kick::kick;
use super::ode::OdeOptions;
use super::resonance::MuLadder;
use super::return_map::{annulus_grid, MapKind, ReturnMap};
use super::system::{AnnulusPoint, HopfSystem};

/// Finite-difference steps for derivative orders 1, 2, 3.
pub const FD_STEPS: [f64; 3] = [1e-5, 1e-4, 1e-3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceGrid {
    pub z: usize,
    pub theta: usize,
    pub a: usize,
}

impl Default for ConvergenceGrid {
    fn default() -> Self {
        Self { z: 64, theta: 64, a: 32 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub mu: f64,
    /// Sup-distance of derivatives of order 0..=3; `NaN` beyond the requested order.
    pub dist: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub kind: MapKind,
    pub rows: Vec<ConvergenceRow>,
    /// Fitted `log dist` vs `log μ` slopes per order.
    pub slopes: [Option<f64>; 4],
}

impl ConvergenceReport {
    /// Number of `n` where the C⁰ distance fails to decrease.
    pub fn c0_inversions(&self) -> usize {
        self.rows.windows(2).filter(|w| w[1].dist[0] >= w[0].dist[0]).count()
    }
}

fn difference(t: &ReturnMap, s: &ReturnMap, p: AnnulusPoint) -> Result<[f64; 2]> {
    let (q, r) = (t.apply_unchecked(p)?, s.apply_unchecked(p)?);
    Ok([q.z - r.z, signed_diff(q.theta, r.theta)])
}

fn sup_norm(v: [f64; 2]) -> f64 {
    v[0].abs().max(v[1].abs())
}

/// Sup over the derivative orders `0..=order` of `T − S` at `p`, using pure
/// partials in `z₀` and `θ₀`.
fn local_mismatch(t: &ReturnMap, s: &ReturnMap, p: AnnulusPoint, order: usize) -> Result<[f64; 4]> {
    let d = |dz: f64, dt: f64| difference(t, s, AnnulusPoint::new(p.z + dz, p.theta + dt));
    let mut out = [f64::NAN; 4];
    let centre = d(0.0, 0.0)?;
    out[0] = sup_norm(centre);
    for k in 1..=order.min(3) {
        let h = FD_STEPS[k - 1];
        let mut worst: f64 = 0.0;
        for dir in [(1.0, 0.0), (0.0, 1.0)] {
            let at = |m: f64| d(m * h * dir.0, m * h * dir.1);
            let v = match k {
                1 => {
                    let (a, b) = (at(1.0)?, at(-1.0)?);
                    [(a[0] - b[0]) / (2.0 * h), (a[1] - b[1]) / (2.0 * h)]
                }
                2 => {
                    let (a, b) = (at(1.0)?, at(-1.0)?);
                    let h2 = h * h;
                    [(a[0] - 2.0 * centre[0] + b[0]) / h2, (a[1] - 2.0 * centre[1] + b[1]) / h2]
                }
                _ => {
                    let (a, b, c, e) = (at(2.0)?, at(1.0)?, at(-1.0)?, at(-2.0)?);
                    let h3 = 2.0 * h * h * h;
                    [
                        (a[0] - 2.0 * b[0] + 2.0 * c[0] - e[0]) / h3,
                        (a[1] - 2.0 * b[1] + 2.0 * c[1] - e[1]) / h3,
                    ]
                }
            };
            worst = worst.max(sup_norm(v));
        }
        out[k] = worst;
    }
    Ok(out)
}

/// Sup-distances between `T_{a,L,μ_n}` and `T_{a,L,0}` over a
/// `z × θ × a` grid, for each `n` in `n_list`, with fitted rates.
///
/// Derivative mismatches use pure partials in `z₀` and `θ₀`.
pub fn convergence_report(
    ladder: &MuLadder,
    kind: MapKind,
    n_list: &[usize],
    order: usize,
    grid: ConvergenceGrid,
) -> Result<ConvergenceReport> {
    if n_list.len() < 4 {
        return Err(Error::PreconditionViolated("need ≥ 4 points for a slope".into()));
    }
    if order > 3 {
        return Err(Error::PreconditionViolated(format!("derivative order {order} > 3")));
    }
    if kind == MapKind::SingularLimit {
        return Err(Error::PreconditionViolated("convergence needs a finite-μ kind".into()));
    }
    let points = annulus_grid_rect(&ladder.system, grid.z, grid.theta);
    let a_grid: Vec<f64> = (0..grid.a).map(|i| TAU * i as f64 / grid.a as f64).collect();
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let maps: Vec<(ReturnMap, ReturnMap)> = a_grid
            .iter()
            .map(|&a| {
                let t = ReturnMap::indexed(kind, ladder, n, a)?;
                let s = ReturnMap::singular(&ladder.system, a);
                Ok((t, s))
            })
            .collect::<Result<_>>()?;
        let mu = ladder.mu(n)?;
        let dist = maps
            .par_iter()
            .flat_map_iter(|(t, s)| points.iter().map(move |&p| local_mismatch(t, s, p, order)))
            .try_reduce(
                || [0.0; 4],
                |x, y| {
                    let mut m = [0.0; 4];
                    for k in 0..4 {
                        m[k] = if k > order { f64::NAN } else { x[k].max(y[k]) };
                    }
                    Ok(m)
                },
            )?;
        let mut dist = dist;
        for d in dist.iter_mut().skip(order + 1) {
            *d = f64::NAN;
        }
        rows.push(ConvergenceRow { n, mu, dist });
    }
    let mus: Vec<f64> = rows.iter().map(|r| r.mu).collect();
    let lo = mus.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = mus.iter().copied().fold(0.0, f64::max);
    if hi < 10.0 * lo * (1.0 - 1e-9) {
        return Err(Error::PreconditionViolated(format!(
            "μ_n must span a decade (got [{lo:e}, {hi:e}])"
        )));
    }
    let mut slopes = [None; 4];
    for (k, slot) in slopes.iter_mut().enumerate().take(order + 1) {
        let d: Vec<f64> = rows.iter().map(|r| r.dist[k]).collect();
        *slot = power_law_exponent(&mus, &d);
    }
    Ok(ConvergenceReport { kind, rows, slopes })
}

fn annulus_grid_rect(system: &HopfSystem, nz: usize, ntheta: usize) -> Vec<AnnulusPoint> {
    if nz == ntheta {
        return annulus_grid(system, nz);
    }
    let (lo, hi) = system.annulus_bounds();
    let mut pts = Vec::with_capacity(nz * ntheta);
    for i in 0..nz {
        let z = if nz == 1 { 1.0 } else { lo + (hi - lo) * i as f64 / (nz - 1) as f64 };
        for j in 0..ntheta {
            pts.push(AnnulusPoint::new(z, TAU * j as f64 / ntheta as f64));
        }
    }
    pts
}

/// Indices of the resonant sequence nearest to `count` log-spaced values of
/// `μ` in `[mu_lo, mu_hi]`.
pub fn n_list_for_range(ladder: &MuLadder, mu_lo: f64, mu_hi: f64, count: usize) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = super::return_map::log_grid(mu_hi, mu_lo, count)
        .into_iter()
        .map(|mu| ladder.index_near(mu))
        .collect::<Result<_>>()?;
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationOptions {
    pub grid_z: usize,
    pub grid_theta: usize,
    pub tol: f64,
    /// Also measure `θ̃(τ)`; needs the planar integration.
    pub theta: bool,
}

impl Default for PerturbationOptions {
    fn default() -> Self {
        Self {
            grid_z: 16,
            grid_theta: 32,
            tol: 1e-12,
            theta: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSample {
    pub mu: f64,
    /// `max |ẑ(τ) − z(τ)|` over the grid.
    pub zeta: f64,
    /// `max |θ̂(τ) − θ(τ)|` over the grid, when measured.
    pub theta_tilde: Option<f64>,
}

/// Measures the effect of `g` and `h` after one relaxation, from the kicked
/// images of a grid over `𝒜`.
pub fn perturbation_magnitude(system: &HopfSystem, mu: f64, opts: &PerturbationOptions) -> Result<PerturbationSample> {
    let r = relaxation(system, mu)?;
    let ode = OdeOptions::with_tol(opts.tol);
    let pts = annulus_grid_rect(system, opts.grid_z, opts.grid_theta);
    let per_point = |p: &AnnulusPoint| -> Result<(f64, f64)> {
        let q = kick(*p, system, mu);
        let z_red = q.z / r.z_tilde;
        if opts.theta {
            let st = full_flow_state(q, r.tau, system, mu, &ode)?;
            let phi_red = reduced_twist(q.z, r.tau, system, mu);
            Ok(((st.z - z_red).abs(), (st.phi - phi_red).abs()))
        } else {
            let z = full_flow_radius(q.z, r.tau, system, mu, &ode)?;
            Ok(((z - z_red).abs(), 0.0))
        }
    };
    let (zeta, theta) = pts
        .par_iter()
        .map(per_point)
        .try_reduce(|| (0.0, 0.0), |a, b| Ok((a.0.max(b.0), a.1.max(b.1))))?;
    Ok(PerturbationSample {
        mu,
        zeta,
        theta_tilde: opts.theta.then_some(theta),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationFit {
    pub samples: Vec<PerturbationSample>,
    pub zeta_exponent: Option<f64>,
    pub theta_exponent: Option<f64>,
    /// `5ρ₂ − ρ₁ − 1`.
    pub zeta_predicted: f64,
    /// `6ρ₂ − 2`.
    pub theta_predicted: f64,
}

pub fn perturbation_fit(system: &HopfSystem, mus: &[f64], opts: &PerturbationOptions) -> Result<PerturbationFit> {
    let samples: Vec<PerturbationSample> = mus
        .iter()
        .map(|&mu| perturbation_magnitude(system, mu, opts))
        .collect::<Result<_>>()?;
    let x: Vec<f64> = samples.iter().map(|s| s.mu).collect();
    let z: Vec<f64> = samples.iter().map(|s| s.zeta).collect();
    let theta_exponent = if opts.theta {
        let t: Vec<f64> = samples.iter().map(|s| s.theta_tilde.unwrap_or(0.0)).collect();
        power_law_exponent(&x, &t)
    } else {
        None
    };
    Ok(PerturbationFit {
        zeta_exponent: power_law_exponent(&x, &z),
        theta_exponent,
        zeta_predicted: 5.0 * system.rho2 - system.rho1 - 1.0,
        theta_predicted: 6.0 * system.rho2 - 2.0,
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortionRow {
    pub n: usize,
    pub mu: f64,
    pub min_det: f64,
    pub max_det: f64,
}

impl DistortionRow {
    pub fn ratio(&self) -> f64 {
        self.max_det / self.min_det
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub rows: Vec<DistortionRow>,
    /// `max_n max/min |det DT|`, the observed distortion constant.
    pub k_d: f64,
}

/// Ratio of `|det DT_{a,L,μ_n}|` over all pairs of a `grid × grid` sample
/// of `𝒜`, for each `n` in `n_list`.
pub fn distortion_report(
    ladder: &MuLadder,
    kind: MapKind,
    a: f64,
    n_list: &[usize],
    grid: usize,
) -> Result<DistortionReport> {
    let pts = annulus_grid(&ladder.system, grid);
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let map = ReturnMap::indexed(kind, ladder, n, a)?;
        let (min_det, max_det) = pts
            .par_iter()
            .map(|&p| map.jacobian_det(p).map(f64::abs))
            .try_fold(
                || (f64::INFINITY, 0.0f64),
                |acc, d| d.map(|d| (acc.0.min(d), acc.1.max(d))),
            )
            .try_reduce(|| (f64::INFINITY, 0.0), |x, y| Ok((x.0.min(y.0), x.1.max(y.1))))?;
        rows.push(DistortionRow { n, mu: map.mu, min_det, max_det });
    }
    let k_d = rows.iter().map(DistortionRow::ratio).fold(1.0, f64::max);
    Ok(DistortionReport { rows, k_d })
}
