//! Critical curves `γ_n⁽ⁱ⁾(a, L) = f_{a,L}ⁿ(c⁽ⁱ⁾)` and their parameter
//! derivatives, plus capture of critical orbits onto repelling cycles.

use serde::{Deserialize, Serialize};

use crate::angle::{distance, signed_diff, wrap};
use crate::critical::CriticalStructure;
use crate::error::{Error, Result};
use crate::family::OneDFamily;

/// Minimal `|J|` accepted for the parameter Jacobian of `Γ₁`.
pub const JACOBIAN_FLOOR: f64 = 1e-10;

fn critical_point(critical: &CriticalStructure, i: usize) -> Result<f64> {
    if i == 0 || i > critical.points.len() {
        return Err(Error::PreconditionViolated(format!(
            "critical index {i} out of range 1..={}",
            critical.points.len()
        )));
    }
    Ok(critical.points[i - 1])
}

/// `γ_n⁽ⁱ⁾(a, L)`, with `i` counted from 1.
pub fn critical_curve(
    family: &OneDFamily,
    critical: &CriticalStructure,
    i: usize,
    n: usize,
    a: f64,
    l: f64,
) -> Result<f64> {
    let mut x = critical_point(critical, i)?;
    for _ in 0..n {
        x = family.eval(a, l, x);
    }
    Ok(x)
}

/// `(γ_n, ∂_a γ_n, ∂_L γ_n)` starting from `c`.
///
/// Uses `∂γ_{n+1} = f′(γ_n)·∂γ_n + ∂f(γ_n)`; critical points do not move with
/// the parameters, so both derivatives start at zero.
pub fn curve_with_derivatives(family: &OneDFamily, c: f64, n: usize, a: f64, l: f64) -> (f64, f64, f64) {
    let (mut x, mut da, mut dl) = (c, 0.0, 0.0);
    for _ in 0..n {
        let d = family.d1(l, x);
        let (na, nl) = (d * da + family.d_da(), d * dl + family.d_dl(x));
        x = family.eval(a, l, x);
        da = na;
        dl = nl;
    }
    (x, da, dl)
}

/// Determinant of `DΓ₁` in `(a, L)` for an explicit pair of critical points:
/// `β₀(Φ(c₂) − Φ(c₁))`.
pub fn gamma_jacobian_at(family: &OneDFamily, c1: f64, c2: f64) -> Result<f64> {
    let j = family.beta0 * (family.profile.value(c2) - family.profile.value(c1));
    if j.abs() < JACOBIAN_FLOOR {
        return Err(Error::DegenerateJacobian { value: j.abs() });
    }
    Ok(j)
}

/// `gamma_jacobian_at` for the first two critical points.
pub fn gamma_jacobian(family: &OneDFamily, critical: &CriticalStructure) -> Result<f64> {
    let (c1, c2) = critical.pair()?;
    gamma_jacobian_at(family, c1, c2)
}

/// Largest eigenvalue of `DΓ₁ᵀDΓ₁` (constant in the parameters).
pub fn lambda_m(family: &OneDFamily, c1: f64, c2: f64) -> f64 {
    let (p1, p2) = (family.d_dl(c1), family.d_dl(c2));
    // DΓ₁ = [[1, p1], [1, p2]]
    let (s11, s12, s22) = (2.0, p1 + p2, p1 * p1 + p2 * p2);
    let tr = s11 + s22;
    let det = s11 * s22 - s12 * s12;
    0.5 * (tr + (tr * tr - 4.0 * det).max(0.0).sqrt())
}

/// Tuning for [`capture_orbit`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaptureOptions {
    /// Number of floating-point iterates scanned for a near return.
    pub probe: usize,
    /// Distance at which a return counts as a candidate cycle.
    pub tol: f64,
    pub max_period: usize,
    /// Largest accepted distance between the landing iterate and the cycle.
    pub landing_tol: f64,
}

impl Default for CaptureOptions {
    fn default() -> Self {
        Self {
            probe: 64,
            tol: 1e-8,
            max_period: 8,
            landing_tol: 1e-9,
        }
    }
}

/// A periodic orbit verified by a Newton–Kantorovich test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cycle {
    pub points: Vec<f64>,
    /// `|(f^q)′(p)|`.
    pub multiplier: f64,
    /// Kantorovich quantity `h = η·B/|g′|`; existence needs `h ≤ ½`.
    pub kantorovich: f64,
    /// Radius `2η` of the ball holding the exact periodic point.
    pub radius: f64,
}

impl Cycle {
    pub fn period(&self) -> usize {
        self.points.len()
    }

    pub fn is_verified(&self) -> bool {
        self.kantorovich <= 0.5 && self.multiplier > 1.0
    }
}

/// A critical orbit resolved as `prefix` followed by the periodic repetition
/// of `cycle`, or, when no cycle is found, the raw floating-point orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalOrbit {
    /// `γ₀ … γ_{j−1}`.
    pub prefix: Vec<f64>,
    pub cycle: Option<Cycle>,
    /// Distance between the computed `γ_j` and the cycle point it lands on.
    pub landing_defect: f64,
}

impl CriticalOrbit {
    pub fn is_captured(&self) -> bool {
        self.cycle.is_some()
    }

    /// `γ_n`; for an uncaptured orbit only `n < prefix.len()` is available.
    pub fn point(&self, n: usize) -> Option<f64> {
        if n < self.prefix.len() {
            return Some(self.prefix[n]);
        }
        let cyc = self.cycle.as_ref()?;
        let q = cyc.period();
        Some(cyc.points[(n - self.prefix.len()) % q])
    }
}

fn iterate_n(family: &OneDFamily, a: f64, l: f64, x: f64, q: usize) -> (f64, f64) {
    let (mut y, mut d) = (x, 1.0);
    for _ in 0..q {
        d *= family.d1(l, y);
        y = family.eval(a, l, y);
    }
    (y, d)
}

/// Newton-polishes a period-`q` point near `x0` and bounds the distance to
/// the exact periodic point.
pub fn polish_cycle(family: &OneDFamily, a: f64, l: f64, x0: f64, q: usize) -> Option<Cycle> {
    let mut p = x0;
    for _ in 0..60 {
        let (y, d) = iterate_n(family, a, l, p, q);
        let g = signed_diff(y, p);
        let step = g / (d - 1.0);
        if !step.is_finite() {
            return None;
        }
        p = wrap(p - step);
        if step.abs() < 1e-16 {
            break;
        }
    }
    let (y, d) = iterate_n(family, a, l, p, q);
    let g = signed_diff(y, p);
    let gp = d - 1.0;
    let eta = (g / gp).abs();
    let m1 = family.amplitude(l).abs() * family.profile.sup_norm(1);
    let m2 = family.amplitude(l).abs() * family.profile.sup_norm(2);
    let bound = q as f64 * m2 * m1.max(1.0).powi(2 * q as i32 - 2);
    let h = eta * bound / gp.abs();
    if !h.is_finite() {
        return None;
    }
    let mut points = Vec::with_capacity(q);
    let mut x = p;
    for _ in 0..q {
        points.push(x);
        x = family.eval(a, l, x);
    }
    Some(Cycle {
        points,
        multiplier: d.abs(),
        kantorovich: h,
        radius: 2.0 * eta,
    })
}

/// Follows the orbit of `c` until it returns close to an earlier iterate,
/// then replaces the tail by a verified repelling cycle.
///
/// Expanding maps amplify round-off by `|f′|` per step, so a long raw
/// floating-point critical orbit says little about the true one. A landing
/// on a verified cycle lets the orbit be extended to any horizon.
pub fn capture_orbit(family: &OneDFamily, a: f64, l: f64, c: f64, opts: &CaptureOptions) -> CriticalOrbit {
    let mut xs = Vec::with_capacity(opts.probe + 1);
    let mut x = c;
    xs.push(x);
    for _ in 0..opts.probe {
        x = family.eval(a, l, x);
        xs.push(x);
    }
    for j in 1..xs.len() {
        for q in 1..=opts.max_period {
            if j + q >= xs.len() || distance(xs[j + q], xs[j]) >= opts.tol {
                continue;
            }
            let Some(cyc) = polish_cycle(family, a, l, xs[j], q) else {
                continue;
            };
            let defect = distance(xs[j], cyc.points[0]);
            if cyc.is_verified() && defect <= opts.landing_tol {
                return CriticalOrbit {
                    prefix: xs[..j].to_vec(),
                    cycle: Some(cyc),
                    landing_defect: defect,
                };
            }
        }
    }
    CriticalOrbit {
        prefix: xs,
        cycle: None,
        landing_defect: f64::INFINITY,
    }
}
