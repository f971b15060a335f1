//! The kick `κ`: vertical translation by `Lμ^{ρ₂}` written in `(z, θ)`.

use crate::angle::wrap;

use super::system::{AnnulusPoint, HopfSystem};

/// `κ(z₀, θ₀) = (z₁, θ₁)`.
///
/// `θ₁` comes from a two-argument arctangent so the map is continuous
/// everywhere the translated point is not the origin.
pub fn kick(p: AnnulusPoint, system: &HopfSystem, mu: f64) -> AnnulusPoint {
    kick_by(p, system.kick_size(mu))
}

/// Kick by a precomputed rescaled amplitude `s = Lμ^{ρ₂−ρ₁}`.
#[inline]
pub fn kick_by(p: AnnulusPoint, s: f64) -> AnnulusPoint {
    let (sin, cos) = p.theta.sin_cos();
    let x = p.z * cos;
    let y = p.z * sin + s;
    AnnulusPoint::new(x.hypot(y), wrap(y.atan2(x)))
}

/// `Dκ` in `(z, θ)` coordinates, rows `(z₁, θ₁)`.
pub fn kick_jacobian(p: AnnulusPoint, system: &HopfSystem, mu: f64) -> [[f64; 2]; 2] {
    kick_jacobian_by(p, system.kick_size(mu))
}

#[inline]
pub fn kick_jacobian_by(p: AnnulusPoint, s: f64) -> [[f64; 2]; 2] {
    let (sin, cos) = p.theta.sin_cos();
    let x = p.z * cos;
    let y = p.z * sin + s;
    let r2 = x * x + y * y;
    let r = r2.sqrt();
    [
        [(x * cos + y * sin) / r, p.z * (y * cos - x * sin) / r],
        [(x * sin - y * cos) / r2, p.z * (x * cos + y * sin) / r2],
    ]
}

/// `det Dκ = z₀/z₁`.
///
/// A translation preserves area and `dx dy = z dz dθ`.
pub fn kick_jacobian_det(p: AnnulusPoint, system: &HopfSystem, mu: f64) -> f64 {
    p.z / kick(p, system, mu).z
}

/// The determinant as printed in the distortion lemma:
///
/// ```text
/// [z₀³ + s z₀(1+z₀) sin θ₀ + s²(1 + (z₀−1)cos²θ₀)] / z₁³,   s = Lμ^{ρ₂−ρ₁}
/// ```
///
/// It differs from [`kick_jacobian_det`] by `(1−z₀)s sin θ₀ (z₀ + s sin θ₀)/z₁³`
/// and coincides with it on `z₀ = 1`.
pub fn kick_jacobian_det_published(p: AnnulusPoint, system: &HopfSystem, mu: f64) -> f64 {
    let s = system.kick_size(mu);
    let (sin, cos) = p.theta.sin_cos();
    let z0 = p.z;
    let z1 = kick(p, system, mu).z;
    let num = z0.powi(3) + s * z0 * (1.0 + z0) * sin + s * s * (1.0 + (z0 - 1.0) * cos * cos);
    num / z1.powi(3)
}
