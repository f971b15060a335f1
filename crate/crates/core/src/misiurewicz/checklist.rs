//! Rank-one checklist for the singular limit: parameter transversality,
//! turn non-degeneracy and the covering conditions for mixing.

use serde::{Deserialize, Serialize};

use crate::angle::Arc;
use crate::critical::CriticalStructure;
use crate::error::{Error, Result};
use crate::family::OneDFamily;
use crate::hopf::{AnnulusPoint, ReturnMap};

use super::certificate::Evidence;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transversality {
    pub critical_point: f64,
    /// `Σ_{k=0}^{T} ∂_a f(fᵏ(c)) / (fᵏ)′(f(c))`.
    pub partial_sum: f64,
    /// `sup|∂_a f| · K^{−T}/(K−1)`.
    pub tail_bound: f64,
    /// `|partial_sum| − tail_bound`.
    pub margin: f64,
    /// `|(fᵏ)′(f(c))| ≥ Kᵏ` held for every `k ≤ T`.
    pub growth_verified: bool,
}

/// Transversality sum along the orbit of `f(c)`, truncated after
/// `truncation` terms.
///
/// Derivatives are accumulated as logarithms so long truncations do not
/// overflow.
pub fn transversality_at(family: &OneDFamily, a: f64, l: f64, c: f64, k: f64, truncation: usize) -> Transversality {
    let mut x = family.eval(a, l, c);
    let (mut log_d, mut sign) = (0.0f64, 1.0f64);
    let mut sum = 0.0;
    let mut growth = true;
    for j in 0..=truncation {
        if j > 0 {
            let d = family.d1(l, x);
            log_d += d.abs().ln();
            sign *= d.signum();
            x = family.eval(a, l, x);
            growth &= log_d >= j as f64 * k.ln() - 1e-12;
        }
        // ∂_a f is constant for these families
        sum += family.d_da() * sign * (-log_d).exp();
    }
    let tail = family.d_da().abs() * k.powi(-(truncation as i32)) / (k - 1.0);
    Transversality {
        critical_point: c,
        partial_sum: sum,
        tail_bound: tail,
        margin: sum.abs() - tail,
        growth_verified: growth,
    }
}

/// Transversality sums at every critical point.
pub fn transversality_margin(
    family: &OneDFamily,
    critical: &CriticalStructure,
    a: f64,
    l: f64,
    k: f64,
    truncation: usize,
) -> Vec<Transversality> {
    critical
        .points
        .iter()
        .map(|&c| transversality_at(family, a, l, c, k, truncation))
        .collect()
}

/// `∂_{z₀}T⁽²⁾(1, c)` at each critical point; `±β₀L` for the singular limit.
pub fn turn_nondegeneracy(map: &ReturnMap, critical: &CriticalStructure) -> Result<Vec<f64>> {
    critical
        .points
        .iter()
        .map(|&c| map.jacobian(AnnulusPoint::new(1.0, c)).map(|j| j[1][0]))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mixing {
    /// `K > 8`.
    pub g6a: bool,
    /// Monotonicity intervals `J_i`, between consecutive critical points.
    pub intervals: Vec<Arc>,
    /// `Q_ij = 1` iff `f(J_i) ⊇ J_j`.
    pub q: Vec<Vec<u8>>,
    /// Smallest `N` with `Qᴺ > 0`.
    pub n: usize,
}

/// Monotonicity intervals of the family, one per critical point.
pub fn monotone_intervals(critical: &CriticalStructure) -> Vec<Arc> {
    let pts = &critical.points;
    (0..pts.len())
        .map(|i| {
            let next = pts[(i + 1) % pts.len()];
            Arc::new(pts[i], crate::angle::ccw_length(pts[i], next))
        })
        .collect()
}

/// Covering matrix of the monotone branches and its primitivity index.
pub fn mixing_conditions(
    family: &OneDFamily,
    critical: &CriticalStructure,
    a: f64,
    l: f64,
    k: f64,
) -> Result<Mixing> {
    if critical.points.len() < 2 {
        return Err(Error::PreconditionViolated(
            "mixing needs at least two turning points".into(),
        ));
    }
    let intervals = monotone_intervals(critical);
    let images: Vec<Arc> = intervals
        .iter()
        .map(|j| {
            let (p, q) = (family.lift(a, l, j.start), family.lift(a, l, j.start + j.length));
            Arc::new(p.min(q), (q - p).abs())
        })
        .collect();
    let q: Vec<Vec<u8>> = images
        .iter()
        .map(|img| intervals.iter().map(|j| img.contains_arc(j) as u8).collect())
        .collect();
    let dim = q.len();
    let bound = dim * dim;
    let mut power = q.clone();
    for n in 1..=bound {
        if power.iter().all(|row| row.iter().all(|&v| v > 0)) {
            return Ok(Mixing {
                g6a: k > 8.0,
                intervals,
                q,
                n,
            });
        }
        power = bool_product(&power, &q);
    }
    Err(Error::NotEventuallyPositive { max_power: bound })
}

fn bool_product(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).any(|k| a[i][k] > 0 && b[k][j] > 0) as u8)
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankOneReport {
    pub k: f64,
    pub transversality: Vec<Transversality>,
    pub turns: Vec<f64>,
    pub mixing: Option<Mixing>,
}

impl RankOneReport {
    pub fn evaluate(
        map: &ReturnMap,
        critical: &CriticalStructure,
        k: f64,
        truncation: usize,
    ) -> Result<Self> {
        let family = map.singular_limit_restriction();
        let l = map.system.l;
        Ok(Self {
            k,
            transversality: transversality_margin(&family, critical, map.a, l, k, truncation),
            turns: turn_nondegeneracy(map, critical)?,
            mixing: mixing_conditions(&family, critical, map.a, l, k).ok(),
        })
    }

    pub fn evidence(&self) -> Vec<Evidence> {
        let mut out = Vec::new();
        let worst = self
            .transversality
            .iter()
            .min_by(|a, b| a.margin.total_cmp(&b.margin));
        if let Some(t) = worst {
            let floor = 1.0 - 1.0 / (self.k - 1.0);
            out.push(Evidence::new(
                "g4_transversality",
                t.growth_verified && t.margin >= floor,
                t.margin - floor,
                format!("c={:.9}", t.critical_point),
            ));
        }
        let min_turn = self.turns.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
        out.push(Evidence::new("g5_turns", min_turn > 0.0, min_turn, ""));
        out.push(Evidence::new("g6a_k_above_8", self.k > 8.0, self.k - 8.0, ""));
        match &self.mixing {
            Some(m) => out.push(Evidence::new("g6b_primitive", true, m.n as f64, format!("N={}", m.n))),
            None => out.push(Evidence::new("g6b_primitive", false, f64::NAN, "not eventually positive")),
        }
        out
    }
}
