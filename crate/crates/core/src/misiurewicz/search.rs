//! Constructive two-parameter search for Misiurewicz pairs `(a*, L*)`.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::{ccw_length, distance, distance_to_set, signed_diff, wrap, Arc};
use crate::critical::CriticalStructure;
use crate::error::{Error, Result};
use crate::family::OneDFamily;
use crate::roots::bracketed_roots;

use super::certificate::{auto_k, Evidence, MisiurewiczCertificate, DEFAULT_HORIZON};
use super::checks::{check_critical_orbits, CriticalOrbitReport};
use super::curves::{curve_with_derivatives, gamma_jacobian_at, lambda_m, polish_cycle};

/// Which sets the critical curves must land in at every generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchTarget {
    /// The boxes `I₁ × I₂` around `z`.
    Boxes,
    /// Anything outside `C_{δ₁}`.
    Complement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Expansion constant; chosen from `L_lo` when absent.
    pub k: Option<f64>,
    pub horizon_n: usize,
    /// Largest rectangle depth.
    pub max_depth: usize,
    /// Rectangles kept per generation.
    pub beam: usize,
    /// Number of generations; derived from floating-point resolution when absent.
    pub generations: Option<usize>,
    /// Smallest admissible `K`.
    pub min_k: f64,
    /// Rectangles tried during certification.
    pub max_candidates: usize,
    pub target: SearchTarget,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            k: None,
            horizon_n: DEFAULT_HORIZON,
            max_depth: 40,
            beam: 32,
            generations: None,
            min_k: 2.0,
            max_candidates: 16,
            target: SearchTarget::Boxes,
        }
    }
}

/// The parameter rectangle and target sets of the search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRegion {
    /// `Δ₁` in `a`.
    pub delta1: (f64, f64),
    /// `Δ₂` in `L`.
    pub delta2: (f64, f64),
    pub i1: Arc,
    pub i2: Arc,
    pub epsilon1: f64,
    pub n0: usize,
    pub k0: f64,
    pub lambda_m: f64,
    pub k: f64,
    /// Exclusion radius `δ₁`.
    pub exclusion: f64,
    pub z: f64,
    pub seed_a: f64,
    pub seed_l: f64,
    pub c1: f64,
    pub c2: f64,
}

impl SearchRegion {
    /// Left side of the parameter-set inequality,
    /// `2√2·max(‖∂_aF‖, ‖∂_LF‖)·max(|Δ₁|, |Δ₂|)`.
    pub fn parset_lhs(&self, family: &OneDFamily) -> f64 {
        let d_l = family.beta0.abs() * family.profile.sup_norm(0);
        let width = (self.delta1.1 - self.delta1.0).max(self.delta2.1 - self.delta2.0);
        2.0 * std::f64::consts::SQRT_2 * d_l.max(1.0) * width
    }

    /// Smallest distance from `I₁ ∪ I₂` to the critical set, minus `δ₁`.
    pub fn h3_margin(&self, critical: &CriticalStructure) -> f64 {
        let mut worst = f64::INFINITY;
        for arc in [self.i1, self.i2] {
            for k in 0..=64 {
                let x = arc.start + arc.length * k as f64 / 64.0;
                worst = worst.min(critical.distance_to(x));
            }
            for &c in &critical.points {
                if arc.contains(c) {
                    worst = 0.0;
                }
            }
        }
        worst - self.exclusion
    }

    pub fn evidence(&self, family: &OneDFamily, critical: &CriticalStructure) -> Vec<Evidence> {
        let lhs = self.parset_lhs(family);
        let h3 = self.h3_margin(critical);
        vec![
            Evidence::new(
                "parameter_set_inequality",
                lhs < self.epsilon1,
                self.epsilon1 - lhs,
                format!("lhs={lhs:.6e} eps1={}", self.epsilon1),
            ),
            Evidence::new("targets_avoid_critical_set", h3 > 0.0, h3, format!("z={:.9}", self.z)),
        ]
    }
}

/// Point, `(ã, L̃)` and target `z` of the analytic seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Seed {
    pub z: f64,
    pub a: f64,
    pub l: f64,
}

/// Midpoint of the largest complementary arc of the critical set; ties go to
/// the smaller angle.
pub fn farthest_point(critical: &CriticalStructure) -> f64 {
    let pts = &critical.points;
    let mut best: Option<(f64, f64)> = None;
    for i in 0..pts.len() {
        let from = pts[i];
        let to = pts[(i + 1) % pts.len()];
        let mut gap = ccw_length(from, to);
        if pts.len() == 1 {
            gap = TAU;
        }
        let mid = wrap(from + 0.5 * gap);
        best = match best {
            Some((g, m)) if g > gap + 1e-12 || ((g - gap).abs() <= 1e-12 && m <= mid) => Some((g, m)),
            _ => Some((gap, mid)),
        };
    }
    best.map(|b| b.1).unwrap_or(0.0)
}

/// Solves `γ₁⁽¹⁾ = γ₁⁽²⁾ = z` with the smallest `L̃ ≥ L_lo`.
///
/// `γ₁⁽²⁾ − γ₁⁽¹⁾ = β₀L(Φ(c₂) − Φ(c₁))` must be a multiple of `2π`, which
/// fixes `L̃`; `ã` then moves `γ₁⁽¹⁾` onto `z`.
pub fn seed_pair(family: &OneDFamily, critical: &CriticalStructure, l_lo: f64) -> Result<Seed> {
    let (c1, c2) = critical.pair()?;
    let k0 = gamma_jacobian_at(family, c1, c2)?.abs();
    let z = farthest_point(critical);
    let m = (l_lo * k0 / TAU).ceil();
    let l = TAU * m / k0;
    let a = wrap(z - family.zeta - family.amplitude(l) * family.profile.value(c1));
    Ok(Seed { z, a, l })
}

/// Smallest `L_lo` for which the automatic `K` exceeds `min_k` with `σ/2 < δ₂`.
pub fn l0(family: &OneDFamily, critical: &CriticalStructure, min_k: f64) -> f64 {
    2.0 * min_k.powi(3) / (critical.k1() * family.beta0.abs() * critical.delta2)
}

/// Number of iterates of a critical curve that double precision resolves to
/// about `10⁻³` at amplitude `L`: `log(10⁻³/ulp)/log(sup|f′|)`.
pub fn resolvable_horizon(family: &OneDFamily, l: f64) -> usize {
    let m1 = (family.amplitude(l).abs() * family.profile.sup_norm(1)).max(2.0);
    let scale = family.amplitude(l).abs() * family.profile.sup_norm(0) + TAU;
    let ulp = scale * f64::EPSILON;
    ((1e-3 / ulp).ln() / m1.ln()).floor().clamp(1.0, 8.0) as usize
}

pub fn build_region(
    family: &OneDFamily,
    critical: &CriticalStructure,
    l_lo: f64,
    k: f64,
) -> Result<SearchRegion> {
    let (c1, c2) = critical.pair()?;
    let j = gamma_jacobian_at(family, c1, c2)?;
    let k0 = j.abs();
    let lam = lambda_m(family, c1, c2);
    let seed = seed_pair(family, critical, l_lo)?;
    let side = lam / (k0 * k0) * k.powi(-3);
    let window = (l_lo, l_lo + TAU / k0);
    let delta2 = (
        (seed.l - 0.5 * side).max(window.0),
        (seed.l + 0.5 * side).min(window.1),
    );
    let exclusion = k.powi(3) / (critical.k1() * family.amplitude(seed.l).abs());
    let box_side = k.powi(-3);
    Ok(SearchRegion {
        delta1: (seed.a - 0.5 * side, seed.a + 0.5 * side),
        delta2,
        i1: Arc::centered(seed.z, 0.5 * box_side),
        i2: Arc::centered(seed.z, 0.5 * box_side),
        epsilon1: 1.0,
        n0: 1,
        k0,
        lambda_m: lam,
        k,
        exclusion,
        z: seed.z,
        seed_a: seed.a,
        seed_l: seed.l,
        c1,
        c2,
    })
}

/// A parameter rectangle `[a, a + da] × [L, L + dL]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub a: f64,
    pub l: f64,
    pub da: f64,
    pub dl: f64,
    pub depth: usize,
    /// Objective at the center.
    pub objective: f64,
}

impl Cell {
    pub fn center(&self) -> (f64, f64) {
        (self.a + 0.5 * self.da, self.l + 0.5 * self.dl)
    }

    pub fn contains(&self, other: &Cell) -> bool {
        let eps = 1e-12 * (1.0 + self.a.abs() + self.l.abs());
        other.a >= self.a - eps
            && other.l >= self.l - eps
            && other.a + other.da <= self.a + self.da + eps
            && other.l + other.dl <= self.l + self.dl + eps
    }
}

fn better(p: &Cell, q: &Cell) -> Ordering {
    q.objective
        .total_cmp(&p.objective)
        .then(p.a.total_cmp(&q.a))
        .then(p.l.total_cmp(&q.l))
}

/// `min d(γ_j⁽ⁱ⁾, C)` over both critical points and `1 ≤ j ≤ horizon`.
pub fn objective(family: &OneDFamily, critical: &CriticalStructure, c: (f64, f64), a: f64, l: f64, horizon: usize) -> f64 {
    let mut best = f64::INFINITY;
    for start in [c.0, c.1] {
        let mut x = start;
        for _ in 0..horizon {
            x = family.eval(a, l, x);
            best = best.min(critical.distance_to(x));
        }
    }
    best
}

fn admissible(
    family: &OneDFamily,
    region: &SearchRegion,
    target: SearchTarget,
    a: f64,
    l: f64,
    horizon: usize,
    critical: &CriticalStructure,
) -> Option<f64> {
    let mut best = f64::INFINITY;
    for (start, arc) in [(region.c1, region.i1), (region.c2, region.i2)] {
        let mut x = start;
        for _ in 0..horizon {
            x = family.eval(a, l, x);
            let d = critical.distance_to(x);
            let ok = match target {
                SearchTarget::Boxes => arc.contains(x),
                SearchTarget::Complement => d >= region.exclusion,
            };
            if !ok {
                return None;
            }
            best = best.min(d);
        }
    }
    Some(best)
}

/// Surviving rectangles of one generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generation {
    pub horizon: usize,
    pub depth: usize,
    /// Children that met the target before the beam cut.
    pub survivors: usize,
    pub kept: Vec<Cell>,
}

/// Where the certified pair came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Landing {
    /// Iterate index forced onto fixed points.
    pub step: usize,
    pub targets: (f64, f64),
    pub residual: f64,
    pub from_cell: Cell,
    pub inside_cell: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub a_star: f64,
    pub l_star: f64,
    pub certificate: MisiurewiczCertificate,
    pub region: SearchRegion,
    pub generations: Vec<Generation>,
    pub landing: Landing,
    pub orbit_report: CriticalOrbitReport,
    pub resolvable_horizon: usize,
}

/// Runs the nested-rectangle refinement and certifies the best survivor.
///
/// Each generation splits every kept rectangle into `4^s` children, where
/// `2^s` is about `sup|f′|`, and keeps the children whose center sends both
/// critical curves into the targets for one more iterate. The best survivor
/// is then moved onto an exactly preperiodic parameter by a small Newton
/// correction and checked with [`check_critical_orbits`].
pub fn find_misiurewicz_pair(
    family: &OneDFamily,
    critical: &CriticalStructure,
    l_lo: f64,
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    let k = config.k.unwrap_or_else(|| auto_k(family, critical, l_lo));
    let threshold = l0(family, critical, config.min_k);
    if k <= config.min_k {
        return Err(Error::PreconditionViolated(format!(
            "L_lo = {l_lo} is below L0 = {threshold:.4} (K = {k:.4} must exceed {})",
            config.min_k
        )));
    }
    // σ/2 < δ₂ at every L in the window
    let sigma_half = k.powi(3) / (critical.k1() * family.amplitude(l_lo).abs());
    if sigma_half >= critical.delta2 {
        return Err(Error::PreconditionViolated(format!(
            "sigma/2 = {sigma_half:.4} is not below delta2 = {:.4} at L_lo = {l_lo} with K = {k}",
            critical.delta2
        )));
    }
    let region = build_region(family, critical, l_lo, k)?;
    for e in region.evidence(family, critical) {
        if !e.pass {
            return Err(Error::PreconditionViolated(format!("{}: {}", e.name, e.witness)));
        }
    }

    let n_res = resolvable_horizon(family, region.seed_l);
    let m1 = family.amplitude(region.delta2.1).abs() * family.profile.sup_norm(1);
    let levels = (m1.max(2.0).log2().ceil() as usize).max(1);
    let generations = config
        .generations
        .unwrap_or(n_res)
        .min(config.max_depth / levels)
        .max(1);

    let root = Cell {
        a: region.delta1.0,
        l: region.delta2.0,
        da: region.delta1.1 - region.delta1.0,
        dl: region.delta2.1 - region.delta2.0,
        depth: 0,
        objective: f64::INFINITY,
    };
    let mut kept = vec![root];
    let mut history = Vec::with_capacity(generations);
    let side = 1usize << levels;
    for g in 1..=generations {
        let horizon = g;
        let per_parent: Vec<(usize, Vec<Cell>)> = kept
            .par_iter()
            .map(|parent| {
                let (da, dl) = (parent.da / side as f64, parent.dl / side as f64);
                let mut count = 0;
                let mut top: Vec<Cell> = Vec::with_capacity(config.beam + 1);
                for i in 0..side {
                    for j in 0..side {
                        let cell = Cell {
                            a: parent.a + da * i as f64,
                            l: parent.l + dl * j as f64,
                            da,
                            dl,
                            depth: parent.depth + levels,
                            objective: 0.0,
                        };
                        let (ca, cl) = cell.center();
                        if let Some(obj) = admissible(family, &region, config.target, ca, cl, horizon, critical) {
                            count += 1;
                            let cell = Cell { objective: obj, ..cell };
                            push_top(&mut top, cell, config.beam);
                        }
                    }
                }
                (count, top)
            })
            .collect();
        let survivors = per_parent.iter().map(|p| p.0).sum();
        let mut next: Vec<Cell> = Vec::new();
        for (_, top) in per_parent {
            for c in top {
                push_top(&mut next, c, config.beam);
            }
        }
        if next.is_empty() {
            return Err(Error::SearchExhausted(format!(
                "no rectangle survives generation {g} (horizon {horizon}, depth {})",
                kept[0].depth + levels
            )));
        }
        history.push(Generation {
            horizon,
            depth: next[0].depth,
            survivors,
            kept: next.clone(),
        });
        kept = next;
    }

    let window = (l_lo, l_lo + TAU / region.k0);
    let mut attempts = 0;
    let mut last_reason = String::from("no candidates");
    for cell in kept.iter().take(config.max_candidates) {
        for step in 1..=generations {
            attempts += 1;
            let (ca, cl) = cell.center();
            let Some(land) = land_on_fixed_points(family, critical, &region, ca, cl, step, k) else {
                last_reason = format!("landing at step {step} failed");
                continue;
            };
            let (a_star, l_star) = (wrap(land.0), land.1);
            if l_star < window.0 || l_star > window.1 {
                last_reason = format!("L* = {l_star} left the window");
                continue;
            }
            let cert = MisiurewiczCertificate::new(family, critical, a_star, l_star, k, config.horizon_n)?;
            let cert = match cert.validated() {
                Ok(c) => c,
                Err(e) => {
                    last_reason = e.to_string();
                    continue;
                }
            };
            let report = check_critical_orbits(family, a_star, l_star, &cert, config.horizon_n)?;
            if !report.pass || report.min_distance < cert.delta {
                last_reason = format!(
                    "certification failed (pass={}, min distance {:.3e})",
                    report.pass, report.min_distance
                );
                continue;
            }
            let mut cert = cert;
            cert.push(report.evidence());
            let margin = report.min_distance - cert.delta;
            cert.push(Evidence::new(
                "critical_orbit_margin",
                margin >= 0.0,
                margin,
                format!("min distance {:.6e} vs sigma/2 {:.6e}", report.min_distance, cert.delta),
            ));
            let defect = report.landing_defects.iter().cloned().fold(0.0, f64::max);
            cert.push(Evidence::new(
                "landing_defect",
                defect <= 1e-9,
                1e-9 - defect,
                format!("step {step}, fixed points {:.12} {:.12}", land.2, land.3),
            ));
            cert.push(Evidence::new(
                "l_window",
                true,
                (l_star - window.0).min(window.1 - l_star),
                format!("[{:.9}, {:.9}]", window.0, window.1),
            ));
            for e in region.evidence(family, critical) {
                cert.push(e);
            }
            let probe = Cell {
                a: a_star,
                l: l_star,
                da: 0.0,
                dl: 0.0,
                depth: 0,
                objective: 0.0,
            };
            return Ok(SearchOutcome {
                a_star,
                l_star,
                certificate: cert,
                region,
                generations: history,
                landing: Landing {
                    step,
                    targets: (land.2, land.3),
                    residual: land.4,
                    from_cell: *cell,
                    inside_cell: cell.contains(&probe),
                },
                orbit_report: report,
                resolvable_horizon: n_res,
            });
        }
    }
    Err(Error::SearchExhausted(format!(
        "{attempts} certification attempts failed; last: {last_reason}"
    )))
}

fn push_top(top: &mut Vec<Cell>, cell: Cell, beam: usize) {
    let pos = top.binary_search_by(|c| better(c, &cell)).unwrap_or_else(|p| p);
    if pos < beam {
        top.insert(pos, cell);
        top.truncate(beam);
    }
}

/// Fixed points of `f_{a,L}`: zeros of `sin((F(θ) − θ)/2)` with `F` the lift.
pub fn fixed_points(family: &OneDFamily, a: f64, l: f64) -> Vec<f64> {
    let m1 = family.amplitude(l).abs() * family.profile.sup_norm(1);
    let grid = ((64.0 * (m1 + 1.0)) as usize).max(4096);
    bracketed_roots(
        |t| (0.5 * (family.lift(a, l, t) - t)).sin(),
        0.0,
        TAU,
        grid,
        1e-15,
    )
    .into_iter()
    .map(wrap)
    .collect()
}

/// Newton correction of `(a, L)` so that `γ_step⁽¹⁾, γ_step⁽²⁾` land exactly on
/// repelling fixed points outside `C_{δ₁}` with `|f′| > K`.
///
/// Returns `(a, L, p₁, p₂, residual)`.
pub fn land_on_fixed_points(
    family: &OneDFamily,
    critical: &CriticalStructure,
    region: &SearchRegion,
    a0: f64,
    l0: f64,
    step: usize,
    k: f64,
) -> Option<(f64, f64, f64, f64, f64)> {
    let fps = fixed_points(family, a0, l0);
    let ok = |p: f64| {
        distance_to_set(p, &critical.points) >= region.exclusion && family.d1(l0, p).abs() > k
    };
    let nearest = |y: f64| {
        fps.iter()
            .copied()
            .filter(|&p| ok(p))
            .min_by(|&p, &q| distance(p, y).total_cmp(&distance(q, y)))
    };
    let (g1, _, _) = curve_with_derivatives(family, region.c1, step, a0, l0);
    let (g2, _, _) = curve_with_derivatives(family, region.c2, step, a0, l0);
    let (mut p1, mut p2) = (nearest(g1)?, nearest(g2)?);
    let (mut a, mut l) = (a0, l0);
    let mut residual = f64::INFINITY;
    for _ in 0..40 {
        p1 = polish_cycle(family, a, l, p1, 1)?.points[0];
        p2 = polish_cycle(family, a, l, p2, 1)?.points[0];
        let (x1, a1, l1) = curve_with_derivatives(family, region.c1, step, a, l);
        let (x2, a2, l2) = curve_with_derivatives(family, region.c2, step, a, l);
        let r1 = signed_diff(x1, p1);
        let r2 = signed_diff(x2, p2);
        residual = r1.abs().max(r2.abs());
        if residual < 1e-14 {
            break;
        }
        // a fixed point moves by ∂f/(1 − f′)
        let dp = |p: f64| {
            let s = 1.0 - family.d1(l, p);
            (family.d_da() / s, family.d_dl(p) / s)
        };
        let (pa1, pl1) = dp(p1);
        let (pa2, pl2) = dp(p2);
        let (j11, j12, j21, j22) = (a1 - pa1, l1 - pl1, a2 - pa2, l2 - pl2);
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let sa = (r1 * j22 - r2 * j12) / det;
        let sl = (j11 * r2 - j21 * r1) / det;
        a -= sa;
        l -= sl;
        if sa.abs() < 1e-17 && sl.abs() < 1e-17 * l.abs() {
            break;
        }
    }
    (residual < 1e-11).then_some((a, l, p1, p2, residual))
}
