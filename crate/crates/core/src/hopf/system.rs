//! The kicked degenerate Hopf system and its rescaled annulus coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Polynomial in `μ`, coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    pub coeffs: Vec<f64>,
}

impl Poly {
    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn eval(&self, mu: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * mu + c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }
}

/// Higher-order term `g_μ(r, θ)` or `h_μ(r, θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "amplitude")]
pub enum HigherOrder {
    Zero,
    Constant(f64),
    Cos(f64),
    Sin(f64),
}

impl HigherOrder {
    #[inline]
    pub fn eval(&self, _r: f64, theta: f64, _mu: f64) -> f64 {
        match *self {
            HigherOrder::Zero => 0.0,
            HigherOrder::Constant(c) => c,
            HigherOrder::Cos(c) => c * theta.cos(),
            HigherOrder::Sin(c) => c * theta.sin(),
        }
    }

    /// `sup |·|` over the whole phase space.
    pub fn sup(&self) -> f64 {
        match *self {
            HigherOrder::Zero => 0.0,
            HigherOrder::Constant(c) | HigherOrder::Cos(c) | HigherOrder::Sin(c) => c.abs(),
        }
    }

    pub fn depends_on_theta(&self) -> bool {
        matches!(self, HigherOrder::Cos(c) | HigherOrder::Sin(c) if *c != 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.sup() == 0.0
    }
}

/// Normal form
///
/// ```text
/// ṙ = −μr + r⁵g_μ(r,θ),   θ̇ = ω + γ_μμ + β_μr² + r⁴h_μ(r,θ)
/// ```
///
/// kicked by the vertical translation of amplitude `Lμ^{ρ₂}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopfSystem {
    pub omega: f64,
    pub gamma: Poly,
    pub beta: Poly,
    pub rho1: f64,
    pub rho2: f64,
    pub l: f64,
    pub k4: f64,
    pub g: HigherOrder,
    pub h: HigherOrder,
}

impl Default for HopfSystem {
    fn default() -> Self {
        Self {
            omega: 1.0,
            gamma: Poly::zero(),
            beta: Poly::constant(1.0),
            rho1: 0.55,
            rho2: 0.45,
            l: 5.0,
            k4: 2.0,
            g: HigherOrder::Zero,
            h: HigherOrder::Zero,
        }
    }
}

/// The annulus coordinates `(z, θ)` with `r = μ^{ρ₁}z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusPoint {
    pub z: f64,
    pub theta: f64,
}

impl AnnulusPoint {
    pub fn new(z: f64, theta: f64) -> Self {
        Self { z, theta }
    }
}

impl HopfSystem {
    /// Default constants with amplitude `l` and twist `beta0`.
    pub fn with_kick(l: f64, beta0: f64) -> Self {
        Self {
            l,
            beta: Poly::constant(beta0),
            ..Self::default()
        }
    }

    /// The test pair `(g, h) = (1, cos θ)`.
    pub fn with_test_terms(mut self) -> Self {
        self.g = HigherOrder::Constant(1.0);
        self.h = HigherOrder::Cos(1.0);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidSystem(msg));
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return fail(format!("ω > 0 violated: ω = {}", self.omega));
        }
        if !(self.rho2 > 3.0 / 8.0 && self.rho2 < 0.5) {
            return fail(format!("ρ₂ ∈ (3/8, 1/2) violated: ρ₂ = {}", self.rho2));
        }
        if (self.rho1 + self.rho2 - 1.0).abs() > 1e-12 {
            return fail(format!(
                "ρ₁ + ρ₂ = 1 violated: ρ₁ + ρ₂ = {}",
                self.rho1 + self.rho2
            ));
        }
        if self.beta0() == 0.0 || !self.beta0().is_finite() {
            return fail("β₀ ≠ 0 violated".into());
        }
        if !(self.l > 0.0 && self.l.is_finite()) {
            return fail(format!("L > 0 violated: L = {}", self.l));
        }
        if !(self.k4 > 1.0 && self.k4.is_finite()) {
            return fail(format!("K₄ > 1 violated: K₄ = {}", self.k4));
        }
        Ok(())
    }

    pub fn beta0(&self) -> f64 {
        self.beta.eval(0.0)
    }

    /// `ω + γ_μμ`.
    #[inline]
    pub fn frequency(&self, mu: f64) -> f64 {
        self.omega + self.gamma.eval(mu) * mu
    }

    /// Kick amplitude in rescaled coordinates, `Lμ^{ρ₂−ρ₁}`.
    #[inline]
    pub fn kick_size(&self, mu: f64) -> f64 {
        self.l * mu.powf(self.rho2 - self.rho1)
    }

    /// `z̃ = Lμ^{ρ₂−ρ₁} − K₄`.
    #[inline]
    pub fn z_tilde(&self, mu: f64) -> f64 {
        self.kick_size(mu) - self.k4
    }

    pub fn annulus_bounds(&self) -> (f64, f64) {
        (1.0 / self.k4, self.k4)
    }

    pub fn in_annulus(&self, z: f64) -> bool {
        let (lo, hi) = self.annulus_bounds();
        (lo..=hi).contains(&z)
    }

    pub fn has_higher_order(&self) -> bool {
        !(self.g.is_zero() && self.h.is_zero())
    }

    /// Largest `μ` for which the exact reduced map sends `𝒜` into itself.
    ///
    /// `z₁/z̃ ∈ [1, (s+K₄)/(s−K₄)]` with `s = Lμ^{ρ₂−ρ₁}`, so the condition is
    /// `s ≥ K₄(K₄+1)/(K₄−1)`.
    pub fn reduced_invariance_threshold(&self) -> f64 {
        let s = self.k4 * (self.k4 + 1.0) / (self.k4 - 1.0);
        (s / self.l).powf(1.0 / (self.rho2 - self.rho1))
    }

    /// Largest relaxable `μ` (where `z̃ = 1`).
    pub fn relaxable_threshold(&self) -> f64 {
        ((self.k4 + 1.0) / self.l).powf(1.0 / (self.rho2 - self.rho1))
    }
}
