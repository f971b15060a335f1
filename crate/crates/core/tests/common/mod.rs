//! Independent oracles shared by the integration tests and the acceptance
//! runner. Every check returns a [`Check`] instead of panicking so the
//! acceptance runner can report all of them.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use rayon::prelude::*;

use rankone::angle::{distance, distance_to_set, signed_diff, wrap};
use rankone::diagnostics::{
    autocorrelation, basin_sample, clt_check, empirical_measure, lyapunov_top, random_point, rng_for, run_orbit,
    Decay, Observable,
};
use rankone::hopf::convergence::{convergence_report, n_list_for_range, ConvergenceGrid, PerturbationOptions};
use rankone::hopf::flow::{full_flow_radius, full_flow_state, gronwall_check, reduced_flow, relaxation};
use rankone::hopf::kick::kick_jacobian;
use rankone::hopf::ode::OdeOptions;
use rankone::hopf::{
    annulus_grid, annulus_invariance, kick, kick_jacobian_det, kick_jacobian_det_published, log_grid, xi,
    AnnulusPoint, HigherOrder, HopfSystem, MapKind, MuLadder, ReturnMap,
};
use rankone::misiurewicz::checks::distortion_ratio_unchecked;
use rankone::misiurewicz::checklist::{mixing_conditions, monotone_intervals, transversality_at, turn_nondegeneracy};
use rankone::misiurewicz::search::objective;
use rankone::misiurewicz::{
    check_critical_orbits, check_outside_expansion, critical_curve, find_misiurewicz_pair,
    gamma_jacobian, local_distortion_ratio, recovery_estimate, MisiurewiczCertificate, SearchConfig, SearchOutcome,
    DEFAULT_K,
};
use rankone::{critical_points, iterate_orbit, CriticalStructure, Error, Harmonic, OneDFamily, TrigPoly};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }

    fn failed(name: &str, err: impl std::fmt::Display) -> Self {
        Self::new(name, false, format!("error: {err}"))
    }

    pub fn assert(&self) {
        assert!(self.pass, "{}: {}", self.name, self.detail);
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.pass { "ok" } else { "FAILED" };
        write!(f, "[{tag}] {} ({})", self.name, self.detail)
    }
}

macro_rules! tryc {
    ($name:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return Check::failed($name, err),
        }
    };
}

// ---------------------------------------------------------------- fixtures

pub fn sine() -> (OneDFamily, CriticalStructure) {
    let f = OneDFamily::hopf(1.0);
    let c = critical_points(&f).expect("sine has critical points");
    (f, c)
}

/// `sin θ + 0.1 sin 2θ` with `ζ = 0`.
pub fn two_harmonic() -> (OneDFamily, CriticalStructure) {
    let f = OneDFamily::new(0.0, TrigPoly::sin_with_second_harmonic(0.1), 1.0);
    let c = critical_points(&f).expect("profile has critical points");
    (f, c)
}

pub fn search(l_lo: f64) -> rankone::Result<SearchOutcome> {
    let (f, c) = sine();
    find_misiurewicz_pair(&f, &c, l_lo, &SearchConfig::default())
}

/// Certified pair for `L_lo ∈ {100, 500}`, searched once per process.
pub fn pair(l_lo: u32) -> &'static SearchOutcome {
    static P100: OnceLock<SearchOutcome> = OnceLock::new();
    static P500: OnceLock<SearchOutcome> = OnceLock::new();
    let cell = match l_lo {
        100 => &P100,
        500 => &P500,
        _ => panic!("no fixture for L_lo = {l_lo}"),
    };
    cell.get_or_init(|| search(l_lo as f64).expect("search succeeds"))
}

pub const CHAOS_MU: f64 = 1e-6;
pub const MU_TOP: f64 = 0.5;

/// Reduced map at the `L_lo = 100` pair, on the resonance nearest `μ = 10⁻⁶`.
pub fn chaos_map() -> &'static ReturnMap {
    static MAP: OnceLock<ReturnMap> = OnceLock::new();
    MAP.get_or_init(|| {
        let p = pair(100);
        let ladder = MuLadder::new(&HopfSystem::with_kick(p.l_star, 1.0), MU_TOP).unwrap();
        let n = ladder.index_near(CHAOS_MU).unwrap();
        ReturnMap::indexed(MapKind::ReducedExact, &ladder, n, p.a_star).unwrap()
    })
}

pub fn seed_point(map: &ReturnMap, stream: u64) -> AnnulusPoint {
    random_point(&map.system, &mut rng_for(20_240_601, stream))
}

// ---------------------------------------------------------------- map core

pub fn family_closed_form() -> Check {
    let name = "family value vs closed form";
    let (f, _) = two_harmonic();
    let (a, l, t): (f64, f64, f64) = (1.3, 7.0, 0.4);
    let want = (l * (t.sin() + 0.1 * (2.0 * t).sin()) + a).rem_euclid(TAU);
    let err = distance(f.eval(a, l, t), want);
    Check::new(name, err <= 1e-14, format!("err {err:.2e}"))
}

pub fn derivative_fd() -> Check {
    let name = "family derivative vs central differences";
    let f = OneDFamily::new(
        0.3,
        TrigPoly::new(vec![
            Harmonic { k: 1, cos: 0.2, sin: 1.0 },
            Harmonic { k: 2, cos: -0.1, sin: 0.05 },
            Harmonic { k: 3, cos: 0.02, sin: -0.03 },
        ]),
        1.0,
    );
    let (a, l, h) = (0.7, 12.0, 1e-5);
    let mut worst: f64 = 0.0;
    let mut used = 0;
    for i in 0..997 {
        let t = TAU * i as f64 / 997.0;
        let d = f.d1(l, t);
        if d.abs() < 1e-2 * l {
            continue;
        }
        let fd = (f.lift(a, l, t + h) - f.lift(a, l, t - h)) / (2.0 * h);
        worst = worst.max(((fd - d) / d).abs());
        used += 1;
    }
    Check::new(name, worst <= 1e-6, format!("max rel err {worst:.2e} over {used} points"))
}

pub fn critical_bisection() -> Check {
    let name = "critical points vs grid bisection";
    let (f, cs) = two_harmonic();
    let dphi = |t: f64| t.cos() + 0.2 * (2.0 * t).cos();
    let mut roots = Vec::new();
    let grid = 4096;
    for i in 0..grid {
        let (mut lo, mut hi) = (TAU * i as f64 / grid as f64, TAU * (i + 1) as f64 / grid as f64);
        if dphi(lo) == 0.0 {
            roots.push(lo);
            continue;
        }
        if dphi(lo).signum() == dphi(hi).signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if dphi(mid).signum() == dphi(lo).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    if roots.len() != cs.points.len() {
        return Check::new(name, false, format!("{} oracle roots vs {}", roots.len(), cs.points.len()));
    }
    let mut lib = cs.points.clone();
    lib.sort_by(f64::total_cmp);
    let pos: f64 = roots.iter().zip(&lib).map(|(r, c)| distance(*r, *c)).fold(0.0, f64::max);
    let slope: f64 = lib.iter().map(|&c| f.profile.d1(c).abs()).fold(0.0, f64::max);
    Check::new(
        name,
        pos <= 1e-10 && slope <= 1e-10,
        format!("{} points, position err {pos:.2e}, max |Φ′(c)| {slope:.2e}", lib.len()),
    )
}

/// `ln|Π aᵢ|` with the product kept as mantissa and exponent; scaling by
/// powers of two is exact.
fn log_abs_product(factors: impl Iterator<Item = f64>) -> f64 {
    let (mut m, mut e) = (1.0f64, 0i64);
    for x in factors {
        m *= x.abs();
        while m >= 2.0 {
            m *= 0.5;
            e += 1;
        }
        while m < 1.0 && m > 0.0 {
            m *= 2.0;
            e -= 1;
        }
    }
    m.ln() + e as f64 * std::f64::consts::LN_2
}

pub fn orbit_log_sum() -> Check {
    let name = "orbit log-derivative sum vs direct product";
    let (f, cs) = sine();
    let (a, l, n) = (2.0, 100.0, 1000);
    let trace = tryc!(name, iterate_orbit(&f, a, l, 1.0, n, &cs));
    let direct = log_abs_product(trace.states[..n].iter().map(|&x| l * x.cos()));
    let rel = ((trace.sum_log_derivative - direct) / direct).abs();
    Check::new(name, rel <= 1e-10, format!("sum {:.12e}, rel err {rel:.2e}", trace.sum_log_derivative))
}

pub fn curve_vs_orbit() -> Check {
    let name = "critical curve vs orbit iteration";
    let (f, cs) = sine();
    let (a, l) = (1.0, 50.0);
    let curve = tryc!(name, critical_curve(&f, &cs, 2, 3, a, l));
    let trace = tryc!(name, iterate_orbit(&f, a, l, cs.points[1], 3, &cs));
    let mut x = cs.points[1];
    for _ in 0..3 {
        x = (FRAC_PI_2 + l * x.sin() + a).rem_euclid(TAU);
    }
    let err = distance(curve, trace.last()).max(distance(curve, x));
    Check::new(name, err <= 1e-12, format!("err {err:.2e}"))
}

pub fn gamma_jacobian_fd() -> Check {
    let name = "critical-value Jacobian vs finite differences";
    let (f, cs) = two_harmonic();
    let (c1, c2) = (cs.points[0], cs.points[1]);
    let (a, l, h) = (1.0, 10.0, 1e-6);
    let g = |c: f64, a: f64, l: f64| f.lift(a, l, c);
    let da = |c: f64| (g(c, a + h, l) - g(c, a - h, l)) / (2.0 * h);
    let dl = |c: f64| (g(c, a, l + h) - g(c, a, l - h)) / (2.0 * h);
    let fd = da(c1) * dl(c2) - dl(c1) * da(c2);
    let lib = tryc!(name, gamma_jacobian(&f, &cs));
    let rel = ((lib - fd) / fd).abs();
    Check::new(name, rel <= 1e-6, format!("J {lib:.9}, fd {fd:.9}, rel err {rel:.2e}"))
}

// ---------------------------------------------------------------- misiurewicz

pub fn outside_expansion() -> Check {
    let name = "outside expansion vs direct products";
    let (f, cs) = sine();
    let (a, l, k, samples) = (1.0, 200.0, 8.0, 100_000);
    let cert = tryc!(name, MisiurewiczCertificate::new(&f, &cs, a, l, k, 10_000));
    let rep = tryc!(name, check_outside_expansion(&f, a, l, &cert, samples));
    let in_v = |x: f64| (l * x.cos()).abs() <= k && cs.distance_to(x) <= cs.delta2;
    let horizon = 256;
    let worst = (0..samples)
        .into_par_iter()
        .map(|i| {
            let x0 = TAU * (i as f64 + 0.5) / samples as f64;
            if in_v(x0) {
                return f64::INFINITY;
            }
            let (mut x, mut prod, mut best) = (x0, 1.0f64, f64::INFINITY);
            for n in 1..=horizon {
                prod *= (l * x.cos()).abs() / k;
                x = (FRAC_PI_2 + l * x.sin() + a).rem_euclid(TAU);
                best = best.min(prod);
                if in_v(x) || !prod.is_finite() || prod > 1e300 {
                    let _ = n;
                    break;
                }
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min);
    let rel = ((worst - rep.min_ratio) / worst).abs();
    Check::new(
        name,
        rep.pass && worst >= 1.0 && rel <= 1e-9,
        format!("oracle min ratio {worst:.6}, library {:.6}, rel diff {rel:.1e}", rep.min_ratio),
    )
}

/// Prefix of each critical orbit up to the landing step, then the fixed point
/// it lands on.
pub fn critical_orbit_oracle(l_lo: u32, n: usize) -> Check {
    let name = "critical orbits stay outside C_{σ/2}";
    let (f, cs) = sine();
    let p = pair(l_lo);
    let cert = &p.certificate;
    let (a, l) = (p.a_star, p.l_star);
    let rep = tryc!(name, check_critical_orbits(&f, a, l, cert, n));
    let targets = [p.landing.targets.0, p.landing.targets.1];
    let mut min_d = f64::INFINITY;
    let mut notes = Vec::new();
    let mut ok = true;
    for (i, &c) in cs.points.iter().enumerate() {
        let mut x = c;
        for _ in 0..p.landing.step.min(n) {
            x = f.eval(a, l, x);
            min_d = min_d.min(cs.distance_to(x));
        }
        let q = targets[i];
        let defect = distance(x, q);
        let fixed = distance(f.eval(a, l, q), q);
        let slope = f.d1(l, q).abs();
        min_d = min_d.min(cs.distance_to(q));
        ok &= defect <= 1e-9 && fixed <= 1e-9 && slope > cert.k;
        notes.push(format!("c{}: defect {defect:.1e}, |f′(p)| {slope:.1}", i + 1));
    }
    let agree = (min_d - rep.min_distance).abs() <= 1e-6;
    Check::new(
        &format!("{name} (L_lo={l_lo}, N={n})"),
        ok && rep.pass && agree && min_d >= cert.delta,
        format!(
            "oracle min d {min_d:.6}, library {:.6}, sigma/2 {:.6}; {}",
            rep.min_distance,
            cert.delta,
            notes.join("; ")
        ),
    )
}

pub fn search_window(l_lo: u32) -> Check {
    let p = pair(l_lo);
    let lo = l_lo as f64;
    let inside = p.l_star >= lo && p.l_star <= lo + PI;
    Check::new(
        &format!("search result in window (L_lo={l_lo})"),
        inside && p.certificate.all_pass(),
        format!("a* {:.9}, L* {:.9}, all evidence pass {}", p.a_star, p.l_star, p.certificate.all_pass()),
    )
}

/// Recovery at a parameter whose critical orbit sits on the repelling fixed
/// point `0`.
pub fn recovery_example() -> Check {
    let name = "recovery from x = c + 1e-4";
    let (f, cs) = sine();
    let (a, l, k) = (1.5 * PI, 96.0 * PI, 8.0);
    let cert = tryc!(name, MisiurewiczCertificate::new(&f, &cs, a, l, k, 10_000));
    let k3 = 0.5 * 1.0 / (8.0 * 1.0);
    let radius = k.powi(3) / (4.0 * l);
    let step = |x: f64| (FRAC_PI_2 + l * x.sin() + a).rem_euclid(TAU);
    let mut ok = (cert.k3 - k3).abs() < 1e-15 && (cert.tracking_radius(&f) - radius).abs() < 1e-15;
    let mut notes = Vec::new();
    for &c in &cs.points {
        let x = c + 1e-4;
        let rec = tryc!(name, recovery_estimate(&f, a, l, &cert, c, x));
        let (mut u, mut v, mut g, mut n) = (x, c, 1.0f64, 0usize);
        loop {
            g *= (l * u.cos()).abs();
            u = step(u);
            v = step(v);
            n += 1;
            if distance(u, v) > radius || n > 1000 {
                break;
            }
        }
        let rel = ((rec.growth - g) / g).abs();
        ok &= rec.n_x == n && rel <= 1e-9 && g >= k3 * k.powi(n as i32);
        notes.push(format!("n(x) {n}, growth {g:.4e} vs bound {:.4e}", k3 * k.powi(n as i32)));
    }
    Check::new(name, ok, notes.join("; "))
}

/// The stated configuration violates the lemma's precondition (σ/2 exceeds
/// π/2 at `L = 300, K = 8`); a configuration that satisfies it stays in
/// `[½, 2]`.
pub fn distortion_example() -> Check {
    let name = "local distortion five steps";
    let (f, cs) = sine();
    let a = 1.5 * PI;
    let cert300 = tryc!(name, MisiurewiczCertificate::new(&f, &cs, a, 300.0, 8.0, 10_000));
    let stated = local_distortion_ratio(&f, a, 300.0, &cert300, 0.0, 1e-6, 5);
    let rejected = matches!(stated, Err(Error::PreconditionViolated(_)));
    let l = 700.0;
    let cert = tryc!(name, MisiurewiczCertificate::new(&f, &cs, a, l, 8.0, 10_000));
    let (x, y) = (1e-13, 2e-13);
    let ratio = tryc!(name, local_distortion_ratio(&f, a, l, &cert, x, y, 5));
    let step = |x: f64| FRAC_PI_2 + l * x.sin() + a - TAU;
    let (mut u, mut v) = (x, y);
    let mut fu = Vec::new();
    let mut fv = Vec::new();
    for _ in 0..5 {
        fu.push(l * u.cos());
        fv.push(l * v.cos());
        u = step(u);
        v = step(v);
    }
    let direct = (log_abs_product(fu.into_iter()) - log_abs_product(fv.into_iter())).exp();
    let pass = rejected && (0.5..=2.0).contains(&ratio) && (ratio - direct).abs() <= 1e-12;
    Check::new(
        name,
        pass,
        format!("L=300 rejected {rejected}; L=700 ratio {ratio:.12}, direct {direct:.12}"),
    )
}

/// Largest search objective over a `side × side` grid of the search
/// rectangle, with early exit against the running best.
pub fn grid_best(p: &SearchOutcome, side: usize, horizon: usize) -> f64 {
    let (f, cs) = sine();
    let (c1, c2) = (p.region.c1, p.region.c2);
    let (a0, a1) = p.region.delta1;
    let (l0, l1) = p.region.delta2;
    let best = AtomicU64::new(0f64.to_bits());
    (0..side * side).into_par_iter().for_each(|idx| {
        let (i, j) = (idx / side, idx % side);
        let a = a0 + (a1 - a0) * (i as f64 + 0.5) / side as f64;
        let l = l0 + (l1 - l0) * (j as f64 + 0.5) / side as f64;
        let floor = f64::from_bits(best.load(Ordering::Relaxed));
        let mut m = f64::INFINITY;
        'outer: for start in [c1, c2] {
            let mut x = start;
            for _ in 0..horizon {
                x = f.eval(a, l, x);
                m = m.min(cs.distance_to(x));
                if m <= floor {
                    break 'outer;
                }
            }
        }
        if m > floor {
            best.fetch_max(m.to_bits(), Ordering::Relaxed);
        }
    });
    f64::from_bits(best.load(Ordering::Relaxed))
}

pub fn search_beats_grid(l_lo: u32) -> Check {
    let p = pair(l_lo);
    let horizon = 1000;
    let g = grid_best(p, 1000, horizon);
    let found = p.orbit_report.min_distance;
    let _ = objective;
    Check::new(
        &format!("search objective ≥ exhaustive grid (L_lo={l_lo})"),
        found >= g - 1e-12 && found >= p.certificate.delta,
        format!("search {found:.6}, grid best {g:.6}, sigma/2 {:.6}", p.certificate.delta),
    )
}

pub fn transversality_truncation() -> Check {
    let name = "transversality 50 vs 200 terms";
    let (f, cs) = sine();
    let p = pair(100);
    let mut ok = true;
    let mut notes = Vec::new();
    for &c in &cs.points {
        let s = transversality_at(&f, p.a_star, p.l_star, c, DEFAULT_K, 50);
        let t = transversality_at(&f, p.a_star, p.l_star, c, DEFAULT_K, 200);
        let diff = (s.partial_sum - t.partial_sum).abs();
        ok &= diff <= s.tail_bound;
        notes.push(format!("diff {diff:.2e} ≤ tail {:.2e}", s.tail_bound));
    }
    Check::new(name, ok, notes.join("; "))
}

pub fn turn_fd() -> Check {
    let name = "turn derivative vs finite differences";
    let (_, cs) = sine();
    let p = pair(100);
    let map = ReturnMap::singular(&HopfSystem::with_kick(p.l_star, 1.0), p.a_star);
    let turns = tryc!(name, turn_nondegeneracy(&map, &cs));
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for (&c, &t) in cs.points.iter().zip(&turns) {
        let up = tryc!(name, map.apply_unchecked(AnnulusPoint::new(1.0 + h, c)));
        let dn = tryc!(name, map.apply_unchecked(AnnulusPoint::new(1.0 - h, c)));
        let fd = signed_diff(up.theta, dn.theta) / (2.0 * h);
        worst = worst.max(((fd - t) / t).abs());
    }
    Check::new(name, worst <= 1e-5, format!("turns {turns:?}, max rel err {worst:.2e}"))
}

/// `Q_ij` from sampled images of `J_i` against sampled points of `J_j`.
fn brute_q(f: &OneDFamily, cs: &CriticalStructure, a: f64, l: f64, pts: usize) -> Vec<Vec<u8>> {
    let arcs = monotone_intervals(cs);
    let sample = |s: f64, len: f64| (0..pts).map(move |k| s + len * k as f64 / (pts - 1) as f64);
    arcs.iter()
        .map(|ji| {
            let ys: Vec<f64> = sample(ji.start, ji.length).map(|t| f.lift(a, l, t)).collect();
            let lo = ys.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            arcs.iter()
                .map(|jj| {
                    let covered = hi - lo >= TAU
                        || sample(jj.start, jj.length).all(|s| (s - lo).rem_euclid(TAU) <= hi - lo + 1e-12);
                    covered as u8
                })
                .collect()
        })
        .collect()
}

pub fn covering_matrix() -> Check {
    let name = "covering matrix vs sampled images";
    let (f, cs) = sine();
    let p = pair(100);
    let mut cases = vec![(p.a_star, p.l_star), (0.3, 7.0)];
    cases.extend([(0.3, 1.2), (1.0, 2.0), (2.5, 3.0), (4.0, 2.4)]);
    let mut notes = Vec::new();
    let mut ok = true;
    for (a, l) in cases {
        let oracle = brute_q(&f, &cs, a, l, 10_000);
        match mixing_conditions(&f, &cs, a, l, DEFAULT_K) {
            Ok(m) => {
                ok &= m.q == oracle;
                notes.push(format!("L={l:.2}: {:?} N={}", m.q, m.n));
            }
            Err(Error::NotEventuallyPositive { .. }) => {
                notes.push(format!("L={l:.2}: not primitive, oracle {oracle:?}"));
            }
            Err(e) => return Check::failed(name, e),
        }
    }
    Check::new(name, ok, notes.join("; "))
}

// ---------------------------------------------------------------- hopf

pub fn kick_rectangular() -> Check {
    let name = "kick vs rectangular translation";
    let s = HopfSystem::default();
    let mu: f64 = 1e-3;
    let shift = s.l * mu.powf(s.rho2 - s.rho1);
    let mut worst: f64 = 0.0;
    for i in 0..40 {
        for j in 0..40 {
            let p = AnnulusPoint::new(0.5 + 0.04 * i as f64, TAU * j as f64 / 40.0);
            let (x, y) = (p.z * p.theta.cos(), p.z * p.theta.sin() + shift);
            let q = kick(p, &s, mu);
            worst = worst
                .max((q.z - (x * x + y * y).sqrt()).abs())
                .max(distance(q.theta, y.atan2(x)));
        }
    }
    Check::new(name, worst <= 1e-12, format!("max err {worst:.2e}"))
}

fn rk4<const N: usize>(f: impl Fn(&[f64; N]) -> [f64; N], y0: [f64; N], h: f64, steps: usize) -> [f64; N] {
    let mut y = y0;
    let add = |y: &[f64; N], k: &[f64; N], c: f64| {
        let mut o = *y;
        for i in 0..N {
            o[i] += c * k[i];
        }
        o
    };
    for _ in 0..steps {
        let k1 = f(&y);
        let k2 = f(&add(&y, &k1, 0.5 * h));
        let k3 = f(&add(&y, &k2, 0.5 * h));
        let k4 = f(&add(&y, &k3, h));
        for i in 0..N {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

pub fn reduced_flow_rk4() -> Check {
    let name = "reduced flow vs RK4";
    let s = HopfSystem::default();
    let mu = 1e-3;
    let r = tryc!(name, relaxation(&s, mu));
    let p = kick(AnnulusPoint::new(1.2, 0.7), &s, mu);
    let field = |y: &[f64; 2]| [-mu * y[0], s.frequency(mu) + s.beta.eval(mu) * mu.powf(2.0 * s.rho1) * y[0] * y[0]];
    let h = 1e-4 * r.tau;
    let mut worst: f64 = 0.0;
    let mut y = [p.z, p.theta];
    for chunk in 1..=10 {
        y = rk4(field, y, h, 1000);
        let t = r.tau * chunk as f64 / 10.0;
        let q = reduced_flow(p, t, &s, mu);
        worst = worst.max((q.z - y[0]).abs()).max(distance(q.theta, y[1].rem_euclid(TAU)));
    }
    Check::new(name, worst <= 1e-8, format!("tau {:.3}, max deviation {worst:.2e}", r.tau))
}

pub fn quintic_series() -> Check {
    let name = "full radius vs first-order series in t";
    let s = HopfSystem {
        g: HigherOrder::Constant(1.0),
        ..HopfSystem::default()
    };
    let mu: f64 = 1e-4;
    let opts = OdeOptions::with_tol(1e-13);
    let q = mu.powf(4.0 * s.rho1);
    let mut worst: f64 = 0.0;
    for z1 in [0.8, 1.5, 3.0] {
        for frac in [0.25, 0.5, 1.0] {
            let t = frac * 1e-3 / mu;
            let z = tryc!(name, full_flow_radius(z1, t, &s, mu, &opts));
            let diff = z - z1 * (-mu * t).exp();
            let pred = q * t * z1.powi(5);
            worst = worst.max(((diff - pred) / pred).abs() / (mu * t));
        }
    }
    Check::new(name, worst <= 5.0, format!("max |rel err|/(μt) {worst:.3}"))
}

pub fn tolerance_halving() -> Check {
    let name = "halving the tolerance halves the deviation";
    let s = HopfSystem {
        g: HigherOrder::Constant(1.0),
        ..HopfSystem::default()
    };
    let mu = 1e-4;
    let r = tryc!(name, relaxation(&s, mu));
    let p = kick(AnnulusPoint::new(1.0, 0.5), &s, mu);
    let run = |tol: f64| full_flow_state(p, r.tau, &s, mu, &OdeOptions::with_tol(tol));
    let reference = tryc!(name, run(1e-13));
    let dev = |tol: f64| run(tol).map(|st| (st.z - reference.z).abs().max((st.phi - reference.phi).abs()));
    let mut ok = true;
    let mut notes = Vec::new();
    for tol in [1e-6, 1e-7, 1e-8] {
        let (d1, d2) = (tryc!(name, dev(tol)), tryc!(name, dev(0.5 * tol)));
        ok &= d2 <= 0.5 * d1;
        notes.push(format!("tol {tol:.0e}: ratio {:.2}", d1 / d2));
    }
    Check::new(name, ok, notes.join("; "))
}

pub fn xi_monotone() -> Check {
    let name = "xi strictly decreasing below mu_1";
    let s = HopfSystem::default();
    let ladder = tryc!(name, MuLadder::new(&s, 0.1));
    let mu1 = tryc!(name, ladder.mu(1));
    let grid = log_grid(1e-12, mu1, 1000);
    let vals: Vec<f64> = tryc!(name, grid.iter().map(|&m| xi(&s, m)).collect::<rankone::Result<Vec<_>>>());
    let bad = vals.windows(2).filter(|w| !(w[1] < w[0])).count();
    Check::new(name, bad == 0, format!("mu_1 {mu1:.6e}, {bad} non-decreasing steps of 999"))
}

pub fn mu_secant() -> Check {
    let name = "resonant mu_n vs secant solve";
    let s = HopfSystem::default();
    let ladder = tryc!(name, MuLadder::new(&s, 0.1));
    let mut worst: f64 = 0.0;
    for n in [1usize, 5, 20, 100, 1000] {
        let target = TAU * ladder.order(n) as f64;
        let g = |m: f64| xi(&s, m).unwrap() - target;
        let (mut hi, mut lo) = (0.1, 0.1);
        while g(lo) < 0.0 {
            hi = lo;
            lo *= 0.9;
        }
        // Illinois variant of regula falsi
        let (mut glo, mut ghi) = (g(lo), g(hi));
        let mut side = 0;
        let mut x = lo;
        for _ in 0..200 {
            x = (lo * ghi - hi * glo) / (ghi - glo);
            let gx = g(x);
            if gx == 0.0 || (hi - lo).abs() <= 1e-17 {
                break;
            }
            if gx.signum() == glo.signum() {
                lo = x;
                glo = gx;
                if side == -1 {
                    ghi *= 0.5;
                }
                side = -1;
            } else {
                hi = x;
                ghi = gx;
                if side == 1 {
                    glo *= 0.5;
                }
                side = 1;
            }
        }
        let mu = tryc!(name, ladder.mu(n));
        worst = worst.max((mu - x).abs());
    }
    Check::new(name, worst <= 1e-12, format!("max abs diff {worst:.2e}"))
}

pub fn mu_of_a_monotone() -> Check {
    let name = "mu(a) strictly monotone in a";
    let ladder = tryc!(name, MuLadder::new(&HopfSystem::default(), 0.1));
    let mus: Vec<f64> = tryc!(
        name,
        (0..1000)
            .map(|i| ladder.mu_of_a(5, TAU * i as f64 / 1000.0))
            .collect::<rankone::Result<Vec<_>>>()
    );
    let bad = mus.windows(2).filter(|w| !(w[1] < w[0])).count();
    Check::new(name, bad == 0, format!("{bad} violations over 1000 values of a"))
}

pub fn reduced_map_composition() -> Check {
    let name = "reduced map vs kick then flow";
    let s = HopfSystem::default();
    let mut worst: f64 = 0.0;
    // the oracle adds ωτ unreduced, so μ stays where ωτ is small
    for mu in [1e-1, 1e-2, 1e-3] {
        let map = tryc!(name, ReturnMap::raw(MapKind::ReducedExact, &s, mu));
        for p in annulus_grid(&s, 16) {
            let q = tryc!(name, map.apply_unchecked(p));
            let r = reduced_flow(kick(p, &s, mu), map.tau, &s, mu);
            worst = worst.max((q.z - r.z).abs()).max(distance(q.theta, r.theta));
        }
    }
    Check::new(name, worst <= 1e-12, format!("max err {worst:.2e}"))
}

/// `C⁰` slope of the reduced map against the singular limit; the defaults
/// of the `converge` command.
pub fn reduced_slope() -> Check {
    let name = "reduced C0 convergence slope";
    let ladder = tryc!(name, MuLadder::new(&HopfSystem::default(), 0.1));
    let ns = tryc!(name, n_list_for_range(&ladder, 1e-6, 1e-3, 6));
    let rep = tryc!(name, convergence_report(&ladder, MapKind::ReducedExact, &ns, 0, ConvergenceGrid::default()));
    let mus: Vec<f64> = rep.rows.iter().map(|r| r.mu).collect();
    let span = mus.iter().copied().fold(0.0, f64::max) / mus.iter().copied().fold(f64::INFINITY, f64::min);
    match rep.slopes[0] {
        Some(s) => Check::new(
            name,
            (s - 0.10).abs() <= 0.15 && rep.rows.len() >= 4 && span >= 10.0,
            format!("slope {s:.4} over {} mu_n spanning {span:.0}x", rep.rows.len()),
        ),
        None => Check::new(name, false, "no slope"),
    }
}

fn zeta_exponent(system: &HopfSystem, mus: &[f64]) -> rankone::Result<f64> {
    let opts = PerturbationOptions {
        theta: false,
        ..PerturbationOptions::default()
    };
    let fit = rankone::hopf::convergence::perturbation_fit(system, mus, &opts)?;
    fit.zeta_exponent
        .ok_or_else(|| Error::PreconditionViolated("degenerate fit".into()))
}

/// `g ≡ 1, h ≡ 0` over `μ ∈ [10⁻⁵, 10⁻³]`.
pub fn perturbation_example() -> Check {
    let name = "zeta exponent, g=1 h=0, mu in [1e-5, 1e-3]";
    let mus = log_grid(1e-5, 1e-3, 5);
    let sys = HopfSystem {
        g: HigherOrder::Constant(1.0),
        ..HopfSystem::default()
    };
    let alt = HopfSystem { l: 2.0, ..sys.clone() };
    let at_two = match zeta_exponent(&alt, &mus) {
        Ok(e) => format!("{e:.3}"),
        Err(e) => e.to_string(),
    };
    match zeta_exponent(&sys, &mus) {
        Ok(e) => Check::new(name, (e - 0.70).abs() <= 0.2, format!("L=5 exponent {e:.3}; L=2 {at_two}")),
        Err(e) => Check::new(name, false, format!("L=5: {e}; L=2 exponent {at_two}")),
    }
}

/// `(g, h) = (1, cos θ)` over `μ ∈ [10⁻⁹, 10⁻⁵]`.
pub fn perturbation_test_terms() -> Check {
    let name = "zeta exponent, (g,h)=(1,cos), mu in [1e-9, 1e-5]";
    let sys = HopfSystem::default().with_test_terms();
    match zeta_exponent(&sys, &log_grid(1e-9, 1e-5, 5)) {
        Ok(e) => Check::new(name, (e - 0.70).abs() <= 0.2, format!("exponent {e:.4}, predicted 0.70")),
        Err(e) => Check::failed(name, e),
    }
}

fn fd_det(p: AnnulusPoint, s: &HopfSystem, mu: f64, h: f64) -> f64 {
    let at = |dz: f64, dt: f64| kick(AnnulusPoint::new(p.z + dz, p.theta + dt), s, mu);
    let (zp, zm, tp, tm) = (at(h, 0.0), at(-h, 0.0), at(0.0, h), at(0.0, -h));
    let j = [
        [(zp.z - zm.z) / (2.0 * h), (tp.z - tm.z) / (2.0 * h)],
        [signed_diff(zp.theta, zm.theta) / (2.0 * h), signed_diff(tp.theta, tm.theta) / (2.0 * h)],
    ];
    j[0][0] * j[1][1] - j[0][1] * j[1][0]
}

pub fn kick_det_fd() -> Check {
    let name = "kick determinant at (1, π/2) vs finite differences";
    let s = HopfSystem::default();
    let mu: f64 = 1e-3;
    let p = AnnulusPoint::new(1.0, FRAC_PI_2);
    let fd = fd_det(p, &s, mu, 1e-6);
    let (a, b) = (kick_jacobian_det(p, &s, mu), kick_jacobian_det_published(p, &s, mu));
    let rel = ((a - fd) / fd).abs().max(((b - fd) / fd).abs());
    Check::new(name, rel <= 1e-6, format!("det {a:.12}, published {b:.12}, fd {fd:.12}, rel {rel:.1e}"))
}

/// Analytic `det Dκ` against finite differences over the distortion grid.
pub fn kick_det_grid(mus: &[f64], grid: usize, tol: f64) -> Check {
    let name = "kick determinant vs finite differences on the grid";
    let s = HopfSystem::default();
    let mut worst: f64 = 0.0;
    for &mu in mus {
        for p in annulus_grid(&s, grid) {
            let j = kick_jacobian(p, &s, mu);
            let det = kick_jacobian_det(p, &s, mu);
            let fd = fd_det(p, &s, mu, 1e-6);
            worst = worst
                .max(((det - fd) / fd).abs())
                .max(((j[0][0] * j[1][1] - j[0][1] * j[1][0] - det) / det).abs());
        }
    }
    Check::new(name, worst <= tol, format!("max rel err {worst:.2e}"))
}

pub fn gronwall() -> Check {
    let name = "full vs reduced flow within the Gronwall bound";
    let s = HopfSystem::default().with_test_terms();
    let mut notes = Vec::new();
    let mut ok = true;
    for mu in [1e-4, 1e-5] {
        let r = tryc!(name, relaxation(&s, mu));
        let p = kick(AnnulusPoint::new(1.0, 0.3), &s, mu);
        let g = tryc!(name, gronwall_check(p, r.tau, &s, mu, 1e-10, 32));
        ok &= g.measured <= g.bound;
        notes.push(format!("mu {mu:.0e}: {:.3e} ≤ {:.3e}", g.measured, g.bound));
    }
    Check::new(name, ok, notes.join("; "))
}

// ---------------------------------------------------------------- diagnostics

pub fn singular_lyapunov() -> Check {
    let name = "singular-limit λ1 vs circle orbit average (L_lo=500)";
    let p = pair(500);
    let (f, _) = sine();
    let map = ReturnMap::singular(&HopfSystem::with_kick(p.l_star, 1.0), p.a_star);
    let (p0, n, burn) = (AnnulusPoint::new(1.0, 0.1234), 1_000_000, 1000);
    let est = tryc!(name, lyapunov_top(&map, p0, n, burn));
    let mut sum = 0.0;
    tryc!(name, run_orbit(&map, p0, n, burn, |_, q| sum += f.d1(p.l_star, q.theta).abs().ln()));
    let avg = sum / n as f64;
    let err = (est.lambda1 - avg).abs();
    Check::new(name, err <= 1e-3, format!("λ1 {:.6}, orbit average {avg:.6}, diff {err:.1e}", est.lambda1))
}

pub fn lyapunov_doubling() -> Check {
    let name = "doubling n moves λ1 by < 2 stderr";
    let map = chaos_map();
    let p0 = seed_point(map, 1);
    let a = tryc!(name, lyapunov_top(map, p0, 1_000_000, 10_000));
    let b = tryc!(name, lyapunov_top(map, p0, 2_000_000, 10_000));
    let d = (a.lambda1 - b.lambda1).abs();
    Check::new(
        name,
        d < 2.0 * a.stderr,
        format!("{:.6} vs {:.6}, diff {d:.2e}, stderr {:.2e}", a.lambda1, b.lambda1, a.stderr),
    )
}

pub fn two_seed_tv(n: usize) -> Check {
    let name = "two-seed histogram TV distance";
    let map = chaos_map();
    let hs: Vec<_> = tryc!(
        name,
        [1u64, 2]
            .par_iter()
            .map(|&s| empirical_measure(map, seed_point(map, s), n, 10_000, (64, 256)))
            .collect::<rankone::Result<Vec<_>>>()
    );
    let tv = tryc!(name, hs[0].total_variation(&hs[1]));
    Check::new(name, tv <= 0.05, format!("n {n:.0e}, TV {tv:.4}"))
}

pub fn birkhoff_vs_histogram() -> Check {
    let name = "Birkhoff averages vs histogram integrals";
    let map = chaos_map();
    let h = tryc!(name, empirical_measure(map, seed_point(map, 3), 1_000_000, 10_000, (64, 256)));
    let s = (h.integrate(|p| p.theta.sin()) - h.birkhoff.sin_theta).abs();
    let c = (h.integrate(|p| p.theta.cos()) - h.birkhoff.cos_theta).abs();
    let one = h.birkhoff.one;
    Check::new(
        name,
        s <= 1e-3 && c <= 1e-3 && one == 1.0,
        format!("sin diff {s:.1e}, cos diff {c:.1e}, constant {one}"),
    )
}

pub fn autocorr_lag20(n: usize) -> Check {
    let name = "autocorrelation at lag 20";
    let map = chaos_map();
    let ac = tryc!(name, autocorrelation(map, Observable::SinTheta, seed_point(map, 4), n, 40, 10_000));
    let v = ac.at(20).unwrap_or(f64::NAN);
    Check::new(name, v.abs() <= 0.05, format!("n {n:.0e}, rho(20) {v:.2e}, decay {:?}", ac.decay))
}

/// Weak kick: the orbit falls onto a periodic sink.
pub fn non_decaying_control() -> Check {
    let name = "stable regime flagged NonDecaying";
    let ladder = tryc!(name, MuLadder::new(&HopfSystem::with_kick(1.5, 1.0), 1e-6));
    let n = tryc!(name, ladder.index_near(1e-8));
    let map = tryc!(name, ReturnMap::indexed(MapKind::ReducedExact, &ladder, n, 0.625 * PI));
    let p0 = AnnulusPoint::new(1.0, 0.2);
    let est = tryc!(name, lyapunov_top(&map, p0, 100_000, 1000));
    let ac = tryc!(name, autocorrelation(&map, Observable::SinTheta, p0, 100_000, 40, 1000));
    Check::new(
        name,
        est.lambda1 <= 3.0 * est.stderr && ac.decay == Decay::NonDecaying,
        format!("λ1 {:.3}, decay {:?}", est.lambda1, ac.decay),
    )
}

pub fn clt_chaotic() -> Check {
    let name = "CLT statistic below 1.5x critical";
    let map = chaos_map();
    let r = tryc!(name, clt_check(map, Observable::SinTheta, seed_point(map, 5), 1_000_000, 1000, 10_000));
    Check::new(
        name,
        r.passes(1.5),
        format!("statistic {:.4}, critical {:.4}, blocks {}", r.statistic, r.critical_value, r.blocks),
    )
}

pub fn clt_coboundary() -> Check {
    let name = "coboundary observable detected";
    let map = chaos_map();
    match clt_check(map, Observable::SinCoboundary, seed_point(map, 6), 1_000_000, 1000, 10_000) {
        Err(Error::ZeroVariance { .. }) => Check::new(name, true, "ZeroVariance"),
        Ok(r) => Check::new(name, false, format!("not detected: {r:?}")),
        Err(e) => Check::failed(name, e),
    }
}

pub fn subgrid_fractions() -> Check {
    let name = "disjoint sub-grids give the same chaotic fraction";
    let map = chaos_map();
    let grid = annulus_grid(&map.system, 16);
    let (even, odd): (Vec<_>, Vec<_>) = grid.iter().enumerate().partition(|(i, _)| i % 2 == 0);
    let even: Vec<_> = even.into_iter().map(|(_, p)| *p).collect();
    let odd: Vec<_> = odd.into_iter().map(|(_, p)| *p).collect();
    let a = tryc!(name, basin_sample(map, &even, 10_000, 1000, 0.0));
    let b = tryc!(name, basin_sample(map, &odd, 10_000, 1000, 0.0));
    let d = (a.fraction - b.fraction).abs();
    Check::new(name, d <= 0.05, format!("fractions {:.4} and {:.4}", a.fraction, b.fraction))
}

// ---------------------------------------------------------------- invariant suites

pub fn invariance_suite() -> Check {
    let name = "annulus invariance below the threshold";
    let mut violations = 0;
    let mut maps = 0;
    for l in [5.0, 20.0, 100.0] {
        let s = HopfSystem::with_kick(l, 1.0);
        let top = s.reduced_invariance_threshold().min(0.5);
        for mu in log_grid(1e-10, top, 12) {
            let map = tryc!(name, ReturnMap::raw(MapKind::ReducedExact, &s, mu));
            violations += tryc!(name, annulus_invariance(&map, 64)).violations;
            maps += 1;
        }
    }
    Check::new(name, violations == 0, format!("{violations} violations over {maps} maps of 64x64 points"))
}

pub fn recovery_suite() -> Check {
    let name = "recovery growth ≥ k3 K^n(x)";
    let (f, _) = sine();
    let p = pair(100);
    let cert = &p.certificate;
    let (mut checked, mut violations, mut no_escape) = (0, 0, 0);
    for (arc, &c) in cert.v.iter().zip(&cert.critical_points) {
        for k in 0..=400 {
            let x = arc.start + arc.length * k as f64 / 400.0;
            if distance(x, c) < 1e-9 || !cert.in_v(x) {
                continue;
            }
            match recovery_estimate(&f, p.a_star, p.l_star, cert, c, x) {
                Ok(r) => {
                    checked += 1;
                    violations += (r.growth < r.bound) as usize;
                }
                Err(Error::NoEscape { .. }) => no_escape += 1,
                Err(e) => return Check::failed(name, e),
            }
        }
    }
    Check::new(
        name,
        violations == 0 && checked > 0,
        format!("{violations} violations over {checked} points, {no_escape} without escape"),
    )
}

pub fn distortion_suite() -> Check {
    let name = "local distortion within [1/2, 2]";
    let (f, _) = sine();
    let p = pair(100);
    let cert = &p.certificate;
    let (mut checked, mut violations) = (0, 0);
    for i in 0..4000 {
        let x = TAU * (i as f64 + 0.37) / 4000.0;
        for (sep, n) in [(1e-6, 1), (1e-6, 2), (1e-8, 3), (1e-10, 4), (1e-12, 5)] {
            if let Ok(r) = local_distortion_ratio(&f, p.a_star, p.l_star, cert, x, x + sep, n) {
                checked += 1;
                violations += !(0.5..=2.0).contains(&r) as usize;
            }
        }
    }
    let _ = distortion_ratio_unchecked;
    Check::new(
        name,
        violations == 0 && checked > 0,
        format!("{violations} violations over {checked} admissible pairs"),
    )
}

pub fn nested_suite() -> Check {
    let name = "nested search rectangles";
    let mut violations = 0;
    let mut cells = 0;
    for l_lo in [100, 500] {
        let p = pair(l_lo);
        let root = rankone::misiurewicz::search::Cell {
            a: p.region.delta1.0,
            l: p.region.delta2.0,
            da: p.region.delta1.1 - p.region.delta1.0,
            dl: p.region.delta2.1 - p.region.delta2.0,
            depth: 0,
            objective: 0.0,
        };
        let mut parents = vec![root];
        for g in &p.generations {
            for c in &g.kept {
                cells += 1;
                violations += !parents.iter().any(|q| q.contains(c)) as usize;
            }
            parents = g.kept.clone();
        }
    }
    Check::new(name, violations == 0, format!("{violations} violations over {cells} cells"))
}

#[derive(Clone, Copy)]
struct Cx(f64, f64);

impl Cx {
    fn sin(self) -> Cx {
        Cx(self.0.sin() * self.1.cosh(), self.0.cos() * self.1.sinh())
    }
}

/// `γ_n` at `a + ih` for `n = 1..=n_max`, real parts reduced mod 2π.
fn complex_curve(c: f64, a: Cx, l: f64, n_max: usize) -> Vec<Cx> {
    let mut x = Cx(c, 0.0);
    let mut out = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        let s = x.sin();
        x = Cx(wrap(FRAC_PI_2 + l * s.0 + a.0), l * s.1 + a.1);
        out.push(x);
    }
    out
}

/// `|∂_a γ_n| ≥ ½Kⁿ` while `γ_j ∉ C_{δ₁}` for `j < n`, at `K = 2`.
pub fn half_kn_suite() -> Check {
    let name = "parameter derivative ≥ K^n/2 for n ≤ 8";
    let (f, cs) = sine();
    let k = 2.0;
    let h = 1e-30;
    let (checked, violations) = (0..4000)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(7, i);
            use rand::Rng;
            let a = rng.gen_range(0.0..TAU);
            let l = rng.gen_range(30.0..100.0);
            let cert = MisiurewiczCertificate::new(&f, &cs, a, l, k, 1).unwrap();
            let (mut checked, mut bad) = (0usize, 0usize);
            for &c in &cs.points {
                let curve = complex_curve(c, Cx(a, h), l, 8);
                for n in 1..=8 {
                    if n > 1 && distance_to_set(curve[n - 2].0, &cs.points) < cert.delta {
                        break;
                    }
                    checked += 1;
                    bad += ((curve[n - 1].1 / h).abs() < 0.5 * k.powi(n as i32)) as usize;
                }
            }
            (checked, bad)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    Check::new(
        name,
        violations == 0 && checked > 0,
        format!("{violations} violations over {checked} (a, L, c, n)"),
    )
}

pub fn det_coherence_suite() -> Check {
    let name = "reduced determinant vs finite-difference Jacobian";
    let s = HopfSystem::default();
    let mut worst: f64 = 0.0;
    for mu in [1e-2, 1e-4, 1e-6] {
        let map = tryc!(name, ReturnMap::raw(MapKind::ReducedExact, &s, mu));
        for p in annulus_grid(&s, 16) {
            let det = tryc!(name, map.jacobian_det(p));
            let j = tryc!(name, map.fd_jacobian(p, 1e-7));
            let fd = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            worst = worst.max(((det - fd) / det).abs());
        }
    }
    Check::new(name, worst <= 1e-4, format!("max rel err {worst:.2e}"))
}

pub fn reparametrization_suite() -> Check {
    let name = "xi(mu(a, n)) = a mod 2π";
    let ladder = tryc!(name, MuLadder::new(&HopfSystem::default(), 0.1));
    let mut worst: f64 = 0.0;
    for n in [1usize, 10, 100, 1000] {
        for i in 0..64 {
            let a = TAU * i as f64 / 64.0;
            let map = tryc!(name, ReturnMap::indexed(MapKind::ReducedExact, &ladder, n, a));
            worst = worst.max(distance(map.phase, a));
        }
    }
    Check::new(name, worst <= 1e-9, format!("max phase err {worst:.2e}"))
}

// ---------------------------------------------------------------- groups

pub fn derived_examples() -> Vec<Check> {
    vec![
        family_closed_form(),
        derivative_fd(),
        critical_bisection(),
        orbit_log_sum(),
        curve_vs_orbit(),
        gamma_jacobian_fd(),
        outside_expansion(),
        search_window(100),
        search_window(500),
        critical_orbit_oracle(100, 10_000),
        critical_orbit_oracle(500, 10_000),
        search_beats_grid(500),
        recovery_example(),
        distortion_example(),
        transversality_truncation(),
        turn_fd(),
        covering_matrix(),
        kick_rectangular(),
        reduced_flow_rk4(),
        quintic_series(),
        tolerance_halving(),
        xi_monotone(),
        mu_secant(),
        mu_of_a_monotone(),
        reduced_map_composition(),
        reduced_slope(),
        perturbation_example(),
        kick_det_fd(),
        gronwall(),
        singular_lyapunov(),
        lyapunov_doubling(),
        two_seed_tv(10_000_000),
        birkhoff_vs_histogram(),
        autocorr_lag20(10_000_000),
        non_decaying_control(),
        clt_chaotic(),
        clt_coboundary(),
        subgrid_fractions(),
    ]
}

pub fn invariant_suites() -> Vec<Check> {
    vec![
        invariance_suite(),
        recovery_suite(),
        distortion_suite(),
        nested_suite(),
        half_kn_suite(),
        det_coherence_suite(),
        reparametrization_suite(),
    ]
}
