//! Critical structure of a circle family.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::angle::{distance, wrap};
use crate::error::{Error, Result};
use crate::family::{OneDFamily, TrigPoly};
use crate::roots::{bisect, bracketed_roots};

/// Grid used to bracket sign changes of `Φ′`.
pub const CRITICAL_GRID: usize = 4096;
/// Bisection tolerance for critical points.
pub const CRITICAL_XTOL: f64 = 1e-13;

/// Critical points of `Φ` with the constants derived from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalStructure {
    pub points: Vec<f64>,
    pub values_phi: Vec<f64>,
    pub second_derivatives: Vec<f64>,
    /// `k₁ = ½·min|Φ″(c)|`.
    pub min_second_derivative: f64,
    /// Minimal pairwise circle distance between critical points.
    pub separation: f64,
    /// Largest radius `δ₂` such that `|Φ″| > k₁` on `C_{δ₂}`, capped below
    /// half the separation.
    pub delta2: f64,
}

impl CriticalStructure {
    pub fn k1(&self) -> f64 {
        self.min_second_derivative
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn distance_to(&self, theta: f64) -> f64 {
        crate::angle::distance_to_set(theta, &self.points)
    }

    /// The first two critical points, the pair used by two-parameter searches.
    pub fn pair(&self) -> Result<(f64, f64)> {
        match self.points.as_slice() {
            [c1, c2, ..] => Ok((*c1, *c2)),
            _ => Err(Error::PreconditionViolated(format!(
                "need at least two critical points, found {}",
                self.points.len()
            ))),
        }
    }
}

/// Finds all critical points of `Φ` on `[0, 2π)`.
///
/// Critical points do not depend on `a` or `L`, and the result is shared by
/// every member of the family.
pub fn critical_points(family: &OneDFamily) -> Result<CriticalStructure> {
    profile_critical_points(&family.profile)
}

pub fn profile_critical_points(phi: &TrigPoly) -> Result<CriticalStructure> {
    let d1 = |t: f64| phi.d1(t);
    let scale2 = phi.sup_norm(2).max(f64::MIN_POSITIVE);
    let scale1 = phi.sup_norm(1).max(f64::MIN_POSITIVE);

    let mut points: Vec<f64> = bracketed_roots(d1, 0.0, TAU, CRITICAL_GRID, CRITICAL_XTOL)
        .into_iter()
        .map(|c| {
            // bisection stops at CRITICAL_XTOL; Newton recovers full precision
            let mut c = c;
            for _ in 0..3 {
                let d2 = phi.d2(c);
                if d2 == 0.0 {
                    break;
                }
                let step = phi.d1(c) / d2;
                if step.abs() > CRITICAL_XTOL {
                    break;
                }
                c -= step;
            }
            wrap(c)
        })
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| distance(*a, *b) < 1e-9);
    if points.len() > 1 && distance(points[0], *points.last().unwrap()) < 1e-9 {
        points.pop();
    }

    // even-order roots of Φ′ produce no sign change; catch them as grid minima
    let step = TAU / CRITICAL_GRID as f64;
    for i in 0..CRITICAL_GRID {
        let t = step * i as f64;
        let v = phi.d1(t).abs();
        if v < 1e-6 * scale1
            && v <= phi.d1(t - step).abs()
            && v <= phi.d1(t + step).abs()
            && points.iter().all(|&c| distance(c, t) > 2.0 * step)
        {
            return Err(Error::DegenerateCritical {
                point: t,
                second_derivative: phi.d2(t).abs(),
            });
        }
    }

    let mut second = Vec::with_capacity(points.len());
    for &c in &points {
        let s = phi.d2(c);
        if s.abs() < 1e-8 * scale2 {
            return Err(Error::DegenerateCritical {
                point: c,
                second_derivative: s.abs(),
            });
        }
        second.push(s);
    }
    if points.is_empty() {
        return Err(Error::PreconditionViolated(
            "profile has no critical points".into(),
        ));
    }

    let k1 = 0.5 * second.iter().map(|s| s.abs()).fold(f64::INFINITY, f64::min);
    let mut separation = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            separation = separation.min(distance(points[i], points[j]));
        }
    }

    let mut delta2 = if separation.is_finite() {
        0.5 * separation
    } else {
        std::f64::consts::PI
    };
    for &c in &points {
        for dir in [1.0, -1.0] {
            let g = |r: f64| phi.d2(c + dir * r).abs() - k1;
            // march outward until |Φ″| drops to k₁, then refine
            let mut r = 0.0;
            let h = TAU / CRITICAL_GRID as f64;
            while r + h < delta2 && g(r + h) > 0.0 {
                r += h;
            }
            if r + h < delta2 {
                let edge = bisect(g, r, r + h, 1e-14).unwrap_or(r);
                delta2 = delta2.min(edge);
            }
        }
    }

    // strict separation |c₂ − c₁| > 2δ₂
    if delta2 >= 0.5 * separation {
        delta2 = 0.5 * separation * (1.0 - 1e-12);
    }

    Ok(CriticalStructure {
        values_phi: points.iter().map(|&c| phi.value(c)).collect(),
        points,
        second_derivatives: second,
        min_second_derivative: k1,
        separation,
        delta2,
    })
}
