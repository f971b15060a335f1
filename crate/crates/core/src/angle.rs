//! Angle arithmetic on `S¹ = ℝ / 2πℤ`.
//!
//! Every angle handed out by this crate lives in `[0, 2π)`.

use std::f64::consts::{PI, TAU};

/// Reduces `theta` to `[0, 2π)`.
///
/// `rem_euclid` is exact (it is an `fmod`), so arguments far from the base
/// interval do not accumulate drift.
#[inline]
pub fn wrap(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid may round up to TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed representative of `a - b` in `(-π, π]`.
#[inline]
pub fn signed_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// Geodesic distance on the circle, in `[0, π]`.
#[inline]
pub fn distance(a: f64, b: f64) -> f64 {
    signed_diff(a, b).abs()
}

/// Distance from `theta` to the nearest point of `set`; `+∞` for an empty set.
pub fn distance_to_set(theta: f64, set: &[f64]) -> f64 {
    set.iter()
        .map(|&c| distance(theta, c))
        .fold(f64::INFINITY, f64::min)
}

/// Counter-clockwise length of the arc from `from` to `to`, in `[0, 2π)`.
#[inline]
pub fn ccw_length(from: f64, to: f64) -> f64 {
    wrap(to - from)
}

/// A closed arc of the circle, traversed counter-clockwise from `start`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Arc {
    pub start: f64,
    pub length: f64,
}

impl Arc {
    pub fn new(start: f64, length: f64) -> Self {
        Self {
            start: wrap(start),
            length: length.max(0.0),
        }
    }

    /// Arc centered at `center` with half-width `radius`.
    pub fn centered(center: f64, radius: f64) -> Self {
        Self::new(center - radius, 2.0 * radius)
    }

    pub fn end(&self) -> f64 {
        wrap(self.start + self.length)
    }

    pub fn is_full(&self) -> bool {
        self.length >= TAU
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.is_full() || ccw_length(self.start, theta) <= self.length
    }

    /// True when `other` lies inside `self` (both read counter-clockwise).
    pub fn contains_arc(&self, other: &Arc) -> bool {
        if self.is_full() {
            return true;
        }
        if other.is_full() {
            return false;
        }
        let offset = ccw_length(self.start, other.start);
        offset + other.length <= self.length
    }

    pub fn midpoint(&self) -> f64 {
        wrap(self.start + 0.5 * self.length)
    }
}
