//! Misiurewicz certificates: the constants `K, σ, δ, λ₀, M₀, d₀` and the
//! evidence gathered for each condition.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::angle::{distance_to_set, Arc};
use crate::critical::CriticalStructure;
use crate::error::{Error, Result};
use crate::family::OneDFamily;
use crate::roots::bisect;

/// Auxiliary expansion constant used by the mixing condition.
pub const DEFAULT_K: f64 = 8.001;
/// Default horizon of the critical-orbit check.
pub const DEFAULT_HORIZON: usize = 10_000;

/// Outcome of one checked condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub name: String,
    pub pass: bool,
    pub margin: f64,
    pub witness: String,
}

impl Evidence {
    pub fn new(name: &str, pass: bool, margin: f64, witness: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            pass,
            margin,
            witness: witness.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisiurewiczCertificate {
    pub a: f64,
    pub l: f64,
    pub k: f64,
    pub sigma: f64,
    /// Critical-set exclusion radius `δ₁ = σ/2`.
    pub delta: f64,
    pub delta2: f64,
    pub lambda0: f64,
    pub m0: usize,
    pub d0: f64,
    pub horizon_n: usize,
    pub k1: f64,
    /// `K₂ = ‖Φ‖_{C²}`.
    pub k2: f64,
    /// Recovery constant `k₃ = k₁/(8K₂)`.
    pub k3: f64,
    /// `V = {x : |f′(x)| ≤ K}`, one arc per critical point, capped at `δ₂`.
    pub v: Vec<Arc>,
    pub critical_points: Vec<f64>,
    pub evidence: Vec<Evidence>,
}

impl MisiurewiczCertificate {
    /// Computes every constant for `f_{a,L}` at expansion level `k` and records
    /// the structural invariants as evidence. Nothing here fails on a violated
    /// invariant; use [`Self::validated`] for that.
    pub fn new(
        family: &OneDFamily,
        critical: &CriticalStructure,
        a: f64,
        l: f64,
        k: f64,
        horizon_n: usize,
    ) -> Result<Self> {
        if !(k > 1.0) {
            return Err(Error::PreconditionViolated(format!("K must exceed 1 (got {k})")));
        }
        if !(l > 0.0) {
            return Err(Error::PreconditionViolated(format!("L must be positive (got {l})")));
        }
        let amp = family.amplitude(l).abs();
        let k1 = critical.k1();
        let sigma = 2.0 * k.powi(3) / (k1 * amp);
        let k2 = family.k2();
        let v = v_arcs(family, critical, l, k);

        let mut cert = Self {
            a,
            l,
            k,
            sigma,
            delta: 0.5 * sigma,
            delta2: critical.delta2,
            lambda0: k.ln(),
            m0: 1,
            d0: 1.0,
            horizon_n,
            k1,
            k2,
            k3: k1 / (8.0 * k2),
            v,
            critical_points: critical.points.clone(),
            evidence: Vec::new(),
        };
        cert.record_structure(family);
        Ok(cert)
    }

    /// Fails with `PreconditionViolated` if `σ/2 ≥ δ₂`.
    pub fn validated(self) -> Result<Self> {
        if self.delta >= self.delta2 {
            return Err(Error::PreconditionViolated(format!(
                "sigma/2 = {:.6} must be below delta2 = {:.6} (K = {}, L = {})",
                self.delta, self.delta2, self.k, self.l
            )));
        }
        Ok(self)
    }

    fn record_structure(&mut self, family: &OneDFamily) {
        let half = self.delta;
        self.evidence.push(Evidence::new(
            "sigma_half_below_delta2",
            half < self.delta2,
            self.delta2 - half,
            format!("sigma/2={half:.6e} delta2={:.6e}", self.delta2),
        ));

        // V ⊂ C_{σ/2} and |f′| ≥ K³ outside C_{σ/2}, both on a sample grid
        const GRID: usize = 1 << 16;
        let mut worst_v = f64::NEG_INFINITY;
        let mut worst_p2 = f64::INFINITY;
        let mut p2_at = 0.0;
        let k3 = self.k.powi(3);
        for i in 0..GRID {
            let x = std::f64::consts::TAU * (i as f64 + 0.5) / GRID as f64;
            let d = distance_to_set(x, &self.critical_points);
            let df = family.d1(self.l, x).abs();
            if self.in_v(x) {
                worst_v = worst_v.max(d);
            }
            if d > half {
                let r = df / k3;
                if r < worst_p2 {
                    worst_p2 = r;
                    p2_at = x;
                }
            }
        }
        self.evidence.push(Evidence::new(
            "v_inside_c_sigma_half",
            worst_v <= half,
            half - worst_v,
            format!("max d(V,C)={worst_v:.6e}"),
        ));
        self.evidence.push(Evidence::new(
            "expansion_k3_outside_c_sigma_half",
            worst_p2 >= 1.0,
            worst_p2,
            format!("min |f'|/K^3 at x={p2_at:.9}"),
        ));
    }

    /// Membership in `V`.
    pub fn in_v(&self, x: f64) -> bool {
        self.v.iter().any(|arc| arc.contains(x))
    }

    /// Radius used by the recovery estimate and local distortion,
    /// `K³/(4K₂L)` with `L` the effective amplitude.
    pub fn tracking_radius(&self, family: &OneDFamily) -> f64 {
        self.k.powi(3) / (4.0 * self.k2 * family.amplitude(self.l).abs())
    }

    pub fn push(&mut self, e: Evidence) {
        self.evidence.retain(|old| old.name != e.name);
        self.evidence.push(e);
    }

    pub fn evidence(&self, name: &str) -> Option<&Evidence> {
        self.evidence.iter().find(|e| e.name == name)
    }

    pub fn all_pass(&self) -> bool {
        self.evidence.iter().all(|e| e.pass)
    }

    /// Key-value text form: constants first, then one evidence line per
    /// condition (`name status margin witness`).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "a = {:.17e}", self.a);
        let _ = writeln!(s, "L = {:.17e}", self.l);
        let _ = writeln!(s, "K = {:.17e}", self.k);
        let _ = writeln!(s, "sigma = {:.17e}", self.sigma);
        let _ = writeln!(s, "delta1 = {:.17e}", self.delta);
        let _ = writeln!(s, "delta2 = {:.17e}", self.delta2);
        let _ = writeln!(s, "lambda0 = {:.17e}", self.lambda0);
        let _ = writeln!(s, "M0 = {}", self.m0);
        let _ = writeln!(s, "d0 = {:.17e}", self.d0);
        let _ = writeln!(s, "horizon_N = {}", self.horizon_n);
        let _ = writeln!(s, "k1 = {:.17e}", self.k1);
        let _ = writeln!(s, "K2 = {:.17e}", self.k2);
        let _ = writeln!(s, "k3 = {:.17e}", self.k3);
        for (i, arc) in self.v.iter().enumerate() {
            let _ = writeln!(
                s,
                "V[{i}] = {:.17e} {:.17e}",
                arc.start, arc.length
            );
        }
        for e in &self.evidence {
            let _ = writeln!(
                s,
                "check.{} = {} {:.9e} {}",
                e.name,
                if e.pass { "pass" } else { "fail" },
                e.margin,
                if e.witness.is_empty() { "-" } else { &e.witness }
            );
        }
        s
    }
}

/// The arcs `{x ∈ C_{δ₂}(c) : |f′(x)| ≤ K}`.
///
/// `|f′|` is monotone on each side of `c` inside `C_{δ₂}`, so each side is a
/// single bisection. When `|f′| ≤ K` on the whole side the arc stops at `δ₂`.
pub fn v_arcs(family: &OneDFamily, critical: &CriticalStructure, l: f64, k: f64) -> Vec<Arc> {
    let d2 = critical.delta2;
    critical
        .points
        .iter()
        .map(|&c| {
            let side = |dir: f64| {
                let g = |r: f64| family.d1(l, c + dir * r).abs() - k;
                if g(d2) <= 0.0 {
                    d2
                } else {
                    bisect(g, 0.0, d2, 1e-15).unwrap_or(0.0)
                }
            };
            let left = side(-1.0);
            let right = side(1.0);
            Arc::new(c - left, left + right)
        })
        .collect()
}

/// Expansion constant for a search at `l_lo`: `DEFAULT_K` when it is
/// compatible with `σ/2 < δ₂`, otherwise the value putting `σ/2` at `δ₂/2`.
pub fn auto_k(family: &OneDFamily, critical: &CriticalStructure, l_lo: f64) -> f64 {
    let cap = (0.5 * critical.k1() * family.amplitude(l_lo).abs() * critical.delta2).cbrt();
    DEFAULT_K.min(cap)
}
