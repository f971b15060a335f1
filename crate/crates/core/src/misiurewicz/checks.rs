//! Finite-horizon checks of the Misiurewicz conditions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::{distance, distance_to_set, signed_diff};
use crate::error::{Error, Result};
use crate::family::OneDFamily;

use super::certificate::{Evidence, MisiurewiczCertificate};
use super::curves::{capture_orbit, CaptureOptions, CriticalOrbit};

/// Longest excursion outside `V` followed by [`check_outside_expansion`].
pub const MAX_EXCURSION: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub pass: bool,
    /// Smallest observed `|(fⁿ)′(x)| / e^{λ₀n}`.
    pub min_ratio: f64,
    pub witness_x: f64,
    pub witness_n: usize,
    pub samples: usize,
}

/// Outside-`V` expansion on a uniform grid of starting points.
///
/// Each start outside `V` is followed until it enters `V` or for
/// `min(horizon_N, MAX_EXCURSION)` steps. Condition (1) is tested for
/// `n ≥ M₀`, condition (2) at the entry step with `d₀`.
pub fn check_outside_expansion(
    family: &OneDFamily,
    a: f64,
    l: f64,
    cert: &MisiurewiczCertificate,
    samples: usize,
) -> Result<ExpansionReport> {
    if samples < 1000 {
        return Err(Error::PreconditionViolated(format!(
            "need at least 10^3 samples (got {samples})"
        )));
    }
    let horizon = cert.horizon_n.clamp(1, MAX_EXCURSION);
    let lam = cert.lambda0;
    let ln_d0 = cert.d0.ln();

    // (log-ratio, x, n, violated)
    let worst = (0..samples)
        .into_par_iter()
        .map(|i| {
            let x0 = std::f64::consts::TAU * (i as f64 + 0.5) / samples as f64;
            let mut best = (f64::INFINITY, x0, 0usize, false);
            if cert.in_v(x0) {
                return best;
            }
            let mut x = x0;
            let mut log_d = 0.0;
            for n in 1..=horizon {
                log_d += family.d1(l, x).abs().ln();
                x = family.eval(a, l, x);
                let excess = log_d - lam * n as f64;
                let entered = cert.in_v(x);
                let floor = if entered { ln_d0 } else { 0.0 };
                let applies = entered || n >= cert.m0;
                if applies && excess < floor {
                    return (excess, x0, n, true);
                }
                if applies && excess < best.0 {
                    best = (excess, x0, n, false);
                }
                if entered {
                    break;
                }
            }
            best
        })
        .reduce(
            || (f64::INFINITY, 0.0, 0, false),
            |p, q| {
                let key = |t: &(f64, f64, usize, bool)| (!t.3, t.0, t.1);
                if key(&q).partial_cmp(&key(&p)) == Some(std::cmp::Ordering::Less) {
                    q
                } else {
                    p
                }
            },
        );
    Ok(ExpansionReport {
        pass: !worst.3,
        min_ratio: worst.0.exp(),
        witness_x: worst.1,
        witness_n: worst.2,
        samples,
    })
}

/// How a critical orbit was followed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitMethod {
    /// Prefix plus a verified repelling cycle.
    Captured,
    /// Plain floating-point iteration.
    Direct,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalOrbitReport {
    pub pass: bool,
    /// `min d(fⁿ(c), C)` over both orbits and `1 ≤ n ≤ N`.
    pub min_distance: f64,
    /// `min |f′(fⁿ(c))| / K`.
    pub min_expansion_ratio: f64,
    /// First `(critical index, n)` with `fⁿ(c) ∈ V`, if any.
    pub first_failure: Option<(usize, usize)>,
    pub methods: Vec<OrbitMethod>,
    pub landing_defects: Vec<f64>,
    pub horizon: usize,
}

/// Checks that no critical orbit enters `V` for `1 ≤ n ≤ N`.
pub fn check_critical_orbits(
    family: &OneDFamily,
    a: f64,
    l: f64,
    cert: &MisiurewiczCertificate,
    n: usize,
) -> Result<CriticalOrbitReport> {
    if n == 0 {
        return Err(Error::PreconditionViolated("horizon N must be ≥ 1".into()));
    }
    let opts = CaptureOptions {
        probe: n.min(CaptureOptions::default().probe),
        ..CaptureOptions::default()
    };
    let mut report = CriticalOrbitReport {
        pass: true,
        min_distance: f64::INFINITY,
        min_expansion_ratio: f64::INFINITY,
        first_failure: None,
        methods: Vec::new(),
        landing_defects: Vec::new(),
        horizon: n,
    };
    for (idx, &c) in cert.critical_points.iter().enumerate() {
        let orbit = capture_orbit(family, a, l, c, &opts);
        let visit = |k: usize, x: f64, rep: &mut CriticalOrbitReport| {
            rep.min_distance = rep.min_distance.min(distance_to_set(x, &cert.critical_points));
            let ratio = family.d1(l, x).abs() / cert.k;
            rep.min_expansion_ratio = rep.min_expansion_ratio.min(ratio);
            if ratio <= 1.0 && rep.first_failure.is_none() {
                rep.pass = false;
                rep.first_failure = Some((idx + 1, k));
            }
        };
        if let Some(cyc) = &orbit.cycle {
            report.methods.push(OrbitMethod::Captured);
            report.landing_defects.push(orbit.landing_defect);
            // the orbit from the landing step on is periodic
            let stop = n.min(orbit.prefix.len() + cyc.period() - 1);
            for k in 1..=stop {
                visit(k, orbit.point(k).unwrap(), &mut report);
            }
        } else {
            report.methods.push(OrbitMethod::Direct);
            report.landing_defects.push(f64::INFINITY);
            let mut x = c;
            for k in 1..=n {
                x = family.eval(a, l, x);
                visit(k, x, &mut report);
            }
        }
    }
    Ok(report)
}

impl CriticalOrbitReport {
    pub fn evidence(&self) -> Evidence {
        let witness = match self.first_failure {
            Some((i, k)) => format!("critical {i} enters V at n={k}"),
            None => format!(
                "min d(f^n(c),C)={:.6e} methods={:?}",
                self.min_distance, self.methods
            ),
        };
        Evidence::new("critical_orbits", self.pass, self.min_expansion_ratio, witness)
    }
}

/// Resolved critical orbits of both critical points, for reuse by the
/// checklist.
pub fn critical_orbits(family: &OneDFamily, a: f64, l: f64, points: &[f64]) -> Vec<CriticalOrbit> {
    points
        .iter()
        .map(|&c| capture_orbit(family, a, l, c, &CaptureOptions::default()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recovery {
    /// First `n` with `|fⁿ(x) − fⁿ(c)| > K³/(4K₂L)`.
    pub n_x: usize,
    /// `|(f^{n(x)})′(x)|`.
    pub growth: f64,
    /// `k₃·K^{n(x)}`.
    pub bound: f64,
    /// Whether the critical orbit stayed outside `C_σ` up to `n(x)`.
    pub critical_orbit_outside_c_sigma: bool,
}

/// Derivative regrowth of an orbit starting in `V` while it shadows the
/// orbit of `c`.
///
/// The requirement that the critical orbit avoid `C_σ` is reported in the
/// result instead of enforced: for moderate `L` and `K = 8` the set `C_σ`
/// covers the whole circle.
pub fn recovery_estimate(
    family: &OneDFamily,
    a: f64,
    l: f64,
    cert: &MisiurewiczCertificate,
    c: f64,
    x: f64,
) -> Result<Recovery> {
    if !cert.in_v(x) {
        return Err(Error::PreconditionViolated(format!("x = {x} is not in V")));
    }
    let radius = cert.tracking_radius(family);
    let (mut u, mut v) = (x, c);
    let mut log_growth = 0.0;
    let mut outside = true;
    for n in 1..=cert.horizon_n {
        log_growth += family.d1(l, u).abs().ln();
        u = family.eval(a, l, u);
        v = family.eval(a, l, v);
        if distance_to_set(v, &cert.critical_points) < cert.sigma {
            outside = false;
        }
        if distance(u, v) > radius {
            return Ok(Recovery {
                n_x: n,
                growth: log_growth.exp(),
                bound: cert.k3 * cert.k.powi(n as i32),
                critical_orbit_outside_c_sigma: outside,
            });
        }
    }
    Err(Error::NoEscape {
        x,
        horizon: cert.horizon_n,
    })
}

/// `(fⁿ)′(x)/(fⁿ)′(y)` in absolute value, without checking preconditions.
pub fn distortion_ratio_unchecked(family: &OneDFamily, a: f64, l: f64, x: f64, y: f64, n: usize) -> f64 {
    let (mut u, mut v, mut s) = (x, y, 0.0);
    for _ in 0..n {
        s += family.d1(l, u).abs().ln() - family.d1(l, v).abs().ln();
        u = family.eval(a, l, u);
        v = family.eval(a, l, v);
    }
    s.exp()
}

/// Derivative ratio along two nearby orbits, after checking that each
/// segment `ω_i` is shorter than `K³/(4K₂L)` and at distance at least `σ/2`
/// from the critical set.
pub fn local_distortion_ratio(
    family: &OneDFamily,
    a: f64,
    l: f64,
    cert: &MisiurewiczCertificate,
    x: f64,
    y: f64,
    n: usize,
) -> Result<f64> {
    // identical orbits and the empty product need no distortion control
    if x == y || n == 0 {
        return Ok(1.0);
    }
    let radius = cert.tracking_radius(family);
    let (mut u, mut v) = (x, y);
    for i in 0..n {
        let len = distance(u, v);
        if len > radius {
            return Err(Error::PreconditionViolated(format!(
                "segment {i} has length {len:.3e} > {radius:.3e}"
            )));
        }
        let d = segment_distance(u, v, &cert.critical_points);
        if d < cert.delta {
            return Err(Error::PreconditionViolated(format!(
                "segment {i} is {d:.3e} from the critical set (< sigma/2 = {:.3e})",
                cert.delta
            )));
        }
        u = family.eval(a, l, u);
        v = family.eval(a, l, v);
    }
    Ok(distortion_ratio_unchecked(family, a, l, x, y, n))
}

/// Distance from the short arc between `u` and `v` to `set`.
fn segment_distance(u: f64, v: f64, set: &[f64]) -> f64 {
    let d = signed_diff(v, u);
    let (start, len) = if d >= 0.0 { (u, d) } else { (v, -d) };
    set.iter()
        .map(|&c| {
            let off = crate::angle::ccw_length(start, c);
            if off <= len {
                0.0
            } else {
                distance(c, start).min(distance(c, start + len))
            }
        })
        .fold(f64::INFINITY, f64::min)
}
