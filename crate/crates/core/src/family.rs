//! Circle-map families `f_{a,L}(θ) = ζ + β₀·L·Φ(θ) + a`.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::angle::wrap;
use crate::error::{Error, Result};

/// One harmonic `c·cos(kθ) + s·sin(kθ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub k: u32,
    pub cos: f64,
    pub sin: f64,
}

/// A real trigonometric polynomial on the circle.
///
/// This is the profile `Φ` of a family. It is smooth and 2π-periodic by
/// construction, and all derivatives are available in closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    pub harmonics: Vec<Harmonic>,
}

impl TrigPoly {
    pub fn new(harmonics: Vec<Harmonic>) -> Self {
        Self { harmonics }
    }

    pub fn sin() -> Self {
        Self::new(vec![Harmonic { k: 1, cos: 0.0, sin: 1.0 }])
    }

    pub fn cos() -> Self {
        Self::new(vec![Harmonic { k: 1, cos: 1.0, sin: 0.0 }])
    }

    /// `sin θ + eps·sin 2θ`.
    pub fn sin_with_second_harmonic(eps: f64) -> Self {
        Self::new(vec![
            Harmonic { k: 1, cos: 0.0, sin: 1.0 },
            Harmonic { k: 2, cos: 0.0, sin: eps },
        ])
    }

    /// `order`-th derivative at `theta` (order 0 is the value).
    pub fn eval_derivative(&self, theta: f64, order: u32) -> f64 {
        let mut acc = 0.0;
        for h in &self.harmonics {
            if h.k == 0 {
                if order == 0 {
                    acc += h.cos;
                }
                continue;
            }
            let k = h.k as f64;
            let (s, c) = (k * theta).sin_cos();
            // d/dθ rotates (cos, sin) -> (-sin, cos) and scales by k
            let (dc, ds) = match order % 4 {
                0 => (c, s),
                1 => (-s, c),
                2 => (-c, -s),
                _ => (s, -c),
            };
            acc += k.powi(order as i32) * (h.cos * dc + h.sin * ds);
        }
        acc
    }

    pub fn value(&self, theta: f64) -> f64 {
        self.eval_derivative(theta, 0)
    }

    pub fn d1(&self, theta: f64) -> f64 {
        self.eval_derivative(theta, 1)
    }

    pub fn d2(&self, theta: f64) -> f64 {
        self.eval_derivative(theta, 2)
    }

    pub fn d3(&self, theta: f64) -> f64 {
        self.eval_derivative(theta, 3)
    }

    /// `sup |Φ^{(order)}|`, sampled on a 8192-point grid.
    pub fn sup_norm(&self, order: u32) -> f64 {
        const GRID: usize = 8192;
        (0..GRID)
            .map(|i| self.eval_derivative(TAU * i as f64 / GRID as f64, order).abs())
            .fold(0.0, f64::max)
    }

    /// `‖Φ‖_{C²} = max(sup|Φ|, sup|Φ′|, sup|Φ″|)`.
    pub fn c2_norm(&self) -> f64 {
        (0..=2).map(|j| self.sup_norm(j)).fold(0.0, f64::max)
    }
}

/// Two-parameter circle-map family `f_{a,L}(θ) = ζ + β₀·L·Φ(θ) + a`.
///
/// `beta0` is folded into the amplitude so that the singular limit of the
/// kicked Hopf system (`ζ = π/2`, `Φ = sin`) is represented without rescaling
/// `L`. For the plain family of the two-parameter example set `beta0 = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneDFamily {
    pub zeta: f64,
    pub profile: TrigPoly,
    pub beta0: f64,
}

impl OneDFamily {
    pub fn new(zeta: f64, profile: TrigPoly, beta0: f64) -> Self {
        Self {
            zeta,
            profile,
            beta0,
        }
    }

    /// `π/2 + β₀·L·sin θ + a`, the singular-limit family of the kicked Hopf map.
    pub fn hopf(beta0: f64) -> Self {
        Self::new(FRAC_PI_2, TrigPoly::sin(), beta0)
    }

    /// Effective amplitude `β₀·L`.
    #[inline]
    pub fn amplitude(&self, l: f64) -> f64 {
        self.beta0 * l
    }

    /// Unreduced value `ζ + β₀LΦ(θ) + a`.
    #[inline]
    pub fn lift(&self, a: f64, l: f64, theta: f64) -> f64 {
        self.zeta + self.amplitude(l) * self.profile.value(theta) + a
    }

    /// `f_{a,L}(θ)` reduced to `[0, 2π)`.
    #[inline]
    pub fn eval(&self, a: f64, l: f64, theta: f64) -> f64 {
        wrap(self.lift(a, l, theta))
    }

    #[inline]
    pub fn d1(&self, l: f64, theta: f64) -> f64 {
        self.amplitude(l) * self.profile.d1(theta)
    }

    #[inline]
    pub fn d2(&self, l: f64, theta: f64) -> f64 {
        self.amplitude(l) * self.profile.d2(theta)
    }

    /// Spatial derivative of order 1 or 2 (3 is accepted for C³ checks).
    pub fn derivative(&self, l: f64, theta: f64, order: u32) -> Result<f64> {
        match order {
            1..=3 => Ok(self.amplitude(l) * self.profile.eval_derivative(theta, order)),
            _ => Err(Error::PreconditionViolated(format!(
                "derivative order must be 1, 2 or 3 (got {order})"
            ))),
        }
    }

    /// `∂f/∂a`, identically one.
    #[inline]
    pub fn d_da(&self) -> f64 {
        1.0
    }

    /// `∂f/∂L = β₀Φ(θ)`.
    #[inline]
    pub fn d_dl(&self, theta: f64) -> f64 {
        self.beta0 * self.profile.value(theta)
    }

    /// `K₂ = ‖Φ‖_{C²}`.
    pub fn k2(&self) -> f64 {
        self.profile.c2_norm()
    }
}
